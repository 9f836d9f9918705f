#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "episode_miner/dispatch.hpp"
#include "episode_miner/model.hpp"

namespace epm {

struct CountingOptions {
  std::size_t workers = 0;   // 0 = hardware concurrency
  std::size_t segments = 0;  // power of two; 0 = derive from workers
  DispatchParams dispatch = DispatchParams::cpu_default();
  std::optional<Strategy> forced_strategy;  // bypasses choose_strategy
};

// Segment count used for segment-parallel counting.
std::size_t effective_segments(const CountingOptions& options);

enum class CounterKind { Serial, Relaxed };

// Counts every episode with the chosen counter and strategy. Results follow
// input order; the strategy only changes scheduling.
std::vector<EpisodeCount> count_with_strategy(std::span<const Episode> episodes, const EventStream& stream,
                                              CounterKind kind, Strategy strategy,
                                              const CountingOptions& options);

struct PassReport {
  std::size_t level = 0;
  std::size_t candidates_in = 0;
  std::size_t eliminated_first_pass = 0;
  std::size_t survivors = 0;
  std::size_t final_frequent = 0;
  double first_pass_seconds = 0.0;
  double second_pass_seconds = 0.0;
  bool two_pass = true;
  std::optional<Strategy> first_pass_strategy;
  Strategy second_pass_strategy = Strategy::EpisodeParallel;
};

struct PassResult {
  std::vector<EpisodeCount> frequent;  // input order, count >= threshold
  PassReport report;
};

// Relaxed pass over all candidates, elimination below `threshold`, exact pass
// over the survivors. Same output as one_pass_count.
PassResult two_pass_count(std::span<const Episode> candidates, const EventStream& stream, std::uint64_t threshold,
                          const CountingOptions& options = {});

// Exact counting of every candidate, then filtering.
PassResult one_pass_count(std::span<const Episode> candidates, const EventStream& stream, std::uint64_t threshold,
                          const CountingOptions& options = {});

}  // namespace epm
