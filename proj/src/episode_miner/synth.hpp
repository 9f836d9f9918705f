#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "episode_miner/model.hpp"

namespace epm {

// A causal chain: every spike of neurons[0] starts a cascade in which each
// next neuron fires with `probability` after a delay drawn uniformly from its
// edge interval. `delays` has one interval per edge.
struct ChainSpec {
  std::vector<TypeId> neurons;
  std::vector<IntervalConstraint> delays;
  double probability = 0.9;
};

// Defaults reproduce the 26-neuron, 20 Hz, 60 s spike-train recipe.
struct GeneratorConfig {
  std::size_t neurons = 26;
  double basal_rate = 20.0;  // spikes per second per neuron
  double duration = 60.0;    // seconds
  std::vector<ChainSpec> chains;
  std::uint64_t seed = 1;

  void validate() const;
};

// Delay interval used when a chain does not give one: (1 ms, 5 ms].
IntervalConstraint default_chain_delay();

struct ChainLedger {
  std::uint64_t source_spikes = 0;
  std::uint64_t injected_spikes = 0;
  std::uint64_t complete = 0;        // cascades that reached the last neuron
  std::uint64_t non_overlapped = 0;  // greedy disjoint subset of the complete ones
};

struct GeneratedStream {
  EventStream stream;
  std::vector<ChainLedger> ledger;  // one per chain
};

// Label of neuron i: "A".."Z" for up to 26 neurons, zero-padded "N<i>" beyond.
std::string neuron_label(std::size_t index, std::size_t neurons);

// Episode whose constraints are the chain's delay intervals.
Episode chain_episode(const ChainSpec& chain);

// Deterministic for a given config and seed.
GeneratedStream generate(const GeneratorConfig& config);

}  // namespace epm
