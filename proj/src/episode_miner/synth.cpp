#include "episode_miner/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace epm {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations so streams are reproducible.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

void GeneratorConfig::validate() const {
  if (!(basal_rate >= 0.0) || !std::isfinite(basal_rate)) {
    throw Error(ErrorCode::InvalidArgument, "basal rate must be finite and non-negative");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorCode::InvalidArgument, "duration must be finite and non-negative");
  }
  for (const auto& chain : chains) {
    if (chain.neurons.size() < 2) throw Error(ErrorCode::InvalidArgument, "a chain needs at least two neurons");
    if (chain.delays.size() + 1 != chain.neurons.size()) {
      throw Error(ErrorCode::InvalidArgument, "a chain needs one delay interval per edge");
    }
    for (TypeId n : chain.neurons) {
      if (n >= neurons) throw Error(ErrorCode::InvalidArgument, "chain neuron id out of range");
    }
    if (!(chain.probability > 0.0 && chain.probability <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "chain probability must be in (0, 1]");
    }
  }
}

IntervalConstraint default_chain_delay() { return IntervalConstraint(0.001, 0.005); }

std::string neuron_label(std::size_t index, std::size_t neurons) {
  if (neurons <= 26) return std::string(1, static_cast<char>('A' + index));
  const std::size_t width = std::to_string(neurons - 1).size();
  std::string digits = std::to_string(index);
  return "N" + std::string(width - digits.size(), '0') + digits;
}

Episode chain_episode(const ChainSpec& chain) { return Episode(chain.neurons, chain.delays); }

GeneratedStream generate(const GeneratorConfig& config) {
  config.validate();
  Uniform uniform(config.seed);
  std::vector<Event> events;

  // Homogeneous Poisson baseline, one neuron after another.
  std::vector<std::vector<Time>> basal(config.neurons);
  if (config.basal_rate > 0.0) {
    for (std::size_t n = 0; n < config.neurons; ++n) {
      Time t = 0.0;
      for (;;) {
        t += -std::log1p(-uniform()) / config.basal_rate;
        if (!(t < config.duration)) break;
        basal[n].push_back(t);
        events.push_back({static_cast<TypeId>(n), t});
      }
    }
  }

  std::vector<ChainLedger> ledger(config.chains.size());
  for (std::size_t c = 0; c < config.chains.size(); ++c) {
    const ChainSpec& chain = config.chains[c];
    ChainLedger& entry = ledger[c];
    Time last_end = -1.0;
    for (Time source : basal[chain.neurons.front()]) {
      ++entry.source_spikes;
      Time t = source;
      bool complete = true;
      for (std::size_t edge = 0; edge + 1 < chain.neurons.size(); ++edge) {
        if (!(uniform() < chain.probability)) {
          complete = false;
          break;
        }
        const auto& d = chain.delays[edge];
        t += d.high() - uniform() * (d.high() - d.low());  // uniform on (low, high]
        if (!(t < config.duration)) {
          complete = false;
          break;
        }
        events.push_back({chain.neurons[edge + 1], t});
        ++entry.injected_spikes;
      }
      if (!complete) continue;
      ++entry.complete;
      // Cascades are generated in source order, so their ends are increasing
      // and taking every one that starts after the last kept end is the
      // earliest-end greedy.
      if (source > last_end) {
        ++entry.non_overlapped;
        last_end = t;
      }
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
    return x.time < y.time || (x.time == y.time && x.type < y.type);
  });

  std::vector<std::string> labels;
  labels.reserve(config.neurons);
  for (std::size_t n = 0; n < config.neurons; ++n) labels.push_back(neuron_label(n, config.neurons));
  return {EventStream(Alphabet(std::move(labels)), std::move(events)), std::move(ledger)};
}

}  // namespace epm
