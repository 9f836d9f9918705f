#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "episode_miner/dispatch.hpp"
#include "episode_miner/model.hpp"
#include "episode_miner/two_pass.hpp"

namespace epm {

struct MiningConfig {
  std::uint64_t threshold = 1;
  std::vector<IntervalConstraint> constraints;
  std::optional<std::size_t> max_level;
  DispatchParams dispatch = DispatchParams::cpu_default();
  std::size_t segments = 0;  // power of two, 0 = derive from workers
  std::size_t workers = 0;
  bool one_pass = false;
  std::optional<Strategy> forced_strategy;

  // Throws InvalidArgument.
  void validate() const;
};

struct LevelResult {
  std::size_t size = 0;
  std::vector<EpisodeCount> frequent;  // canonical episode order
  PassReport report;
};

struct MiningResult {
  std::vector<LevelResult> levels;  // every level that was counted, in order

  std::size_t total_frequent() const;
};

// Level-wise mining: seed, count, keep count >= threshold, grow, repeat until
// a level has no frequent episode or max_level is reached.
MiningResult mine(const EventStream& stream, const MiningConfig& config);

}  // namespace epm
