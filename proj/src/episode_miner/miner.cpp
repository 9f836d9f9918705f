#include "episode_miner/miner.hpp"

#include <algorithm>

#include "episode_miner/candidate_gen.hpp"
#include "episode_miner/segmented_counter.hpp"

namespace epm {

void MiningConfig::validate() const {
  if (threshold == 0) throw Error(ErrorCode::InvalidArgument, "support threshold must be at least 1");
  if (constraints.empty()) throw Error(ErrorCode::InvalidArgument, "at least one inter-event constraint is required");
  if (max_level && *max_level == 0) throw Error(ErrorCode::InvalidArgument, "max level must be at least 1");
  if (segments != 0 && !is_power_of_two(segments)) {
    throw Error(ErrorCode::InvalidArgument, "segment count must be a power of two");
  }
  dispatch.validate(max_level);
}

std::size_t MiningResult::total_frequent() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.frequent.size();
  return n;
}

MiningResult mine(const EventStream& stream, const MiningConfig& config) {
  config.validate();
  CountingOptions options;
  options.workers = config.workers;
  options.segments = config.segments;
  options.dispatch = config.dispatch;
  options.forced_strategy = config.forced_strategy;

  MiningResult result;
  std::vector<Episode> candidates = seed_level1(stream.alphabet());
  for (std::size_t size = 1; !candidates.empty(); ++size) {
    PassResult pass = config.one_pass ? one_pass_count(candidates, stream, config.threshold, options)
                                      : two_pass_count(candidates, stream, config.threshold, options);
    std::sort(pass.frequent.begin(), pass.frequent.end(),
              [](const EpisodeCount& x, const EpisodeCount& y) { return x.episode < y.episode; });
    pass.report.level = size;

    LevelResult& level = result.levels.emplace_back();
    level.size = size;
    level.frequent = std::move(pass.frequent);
    level.report = pass.report;

    if (level.frequent.empty() || (config.max_level && size >= *config.max_level)) break;
    std::vector<Episode> frequent;
    frequent.reserve(level.frequent.size());
    for (const auto& ec : level.frequent) frequent.push_back(ec.episode);
    candidates = grow(frequent, config.constraints);
  }
  return result;
}

}  // namespace epm
