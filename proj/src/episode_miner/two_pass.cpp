#include "episode_miner/two_pass.hpp"

#include <algorithm>
#include <bit>
#include <chrono>

#include "episode_miner/parallel.hpp"
#include "episode_miner/relaxed_counter.hpp"
#include "episode_miner/segmented_counter.hpp"
#include "episode_miner/serial_counter.hpp"

namespace epm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Strategy pick(std::size_t candidates, std::size_t episode_size, const CountingOptions& options) {
  if (options.forced_strategy) return *options.forced_strategy;
  return choose_strategy(candidates, episode_size, options.dispatch);
}

// All candidates of one level share a size; mixed batches dispatch on the largest.
std::size_t batch_size_hint(std::span<const Episode> episodes) {
  std::size_t n = 1;
  for (const auto& e : episodes) n = std::max(n, e.size());
  return n;
}

}  // namespace

std::size_t effective_segments(const CountingOptions& options) {
  if (options.segments != 0) {
    if (!is_power_of_two(options.segments)) {
      throw Error(ErrorCode::InvalidArgument, "segment count must be a power of two");
    }
    return options.segments;
  }
  return std::bit_ceil(4 * resolve_workers(options.workers));
}

std::vector<EpisodeCount> count_with_strategy(std::span<const Episode> episodes, const EventStream& stream,
                                              CounterKind kind, Strategy strategy,
                                              const CountingOptions& options) {
  if (strategy == Strategy::EpisodeParallel || stream.empty()) {
    return kind == CounterKind::Serial ? count_serial_batch(episodes, stream, options.workers)
                                       : count_relaxed_batch(episodes, stream, options.workers);
  }
  const std::size_t segments = effective_segments(options);
  std::vector<EpisodeCount> out;
  out.reserve(episodes.size());
  for (const auto& e : episodes) {
    out.push_back(kind == CounterKind::Serial ? count_segmented(e, stream, segments, options.workers)
                                              : count_segmented_relaxed(e, stream, segments, options.workers));
  }
  return out;
}

PassResult two_pass_count(std::span<const Episode> candidates, const EventStream& stream, std::uint64_t threshold,
                          const CountingOptions& options) {
  if (threshold == 0) throw Error(ErrorCode::InvalidArgument, "support threshold must be at least 1");
  PassResult result;
  PassReport& report = result.report;
  report.level = batch_size_hint(candidates);
  report.candidates_in = candidates.size();

  std::vector<Episode> relaxed;
  relaxed.reserve(candidates.size());
  for (const auto& c : candidates) relaxed.push_back(relax(c));

  auto start = Clock::now();
  const Strategy first = pick(relaxed.size(), report.level, options);
  report.first_pass_strategy = first;
  const auto bounds = count_with_strategy(relaxed, stream, CounterKind::Relaxed, first, options);
  std::vector<Episode> survivors;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (bounds[i].count >= threshold) survivors.push_back(candidates[i]);
  }
  report.first_pass_seconds = seconds_since(start);
  report.survivors = survivors.size();
  report.eliminated_first_pass = candidates.size() - survivors.size();

  start = Clock::now();
  report.second_pass_strategy = pick(survivors.size(), report.level, options);
  auto exact = count_with_strategy(survivors, stream, CounterKind::Serial, report.second_pass_strategy, options);
  for (auto& ec : exact) {
    if (ec.count >= threshold) result.frequent.push_back(std::move(ec));
  }
  report.second_pass_seconds = seconds_since(start);
  report.final_frequent = result.frequent.size();
  return result;
}

PassResult one_pass_count(std::span<const Episode> candidates, const EventStream& stream, std::uint64_t threshold,
                          const CountingOptions& options) {
  if (threshold == 0) throw Error(ErrorCode::InvalidArgument, "support threshold must be at least 1");
  PassResult result;
  PassReport& report = result.report;
  report.level = batch_size_hint(candidates);
  report.two_pass = false;
  report.candidates_in = candidates.size();
  report.survivors = candidates.size();

  const auto start = Clock::now();
  report.second_pass_strategy = pick(candidates.size(), report.level, options);
  auto exact = count_with_strategy(candidates, stream, CounterKind::Serial, report.second_pass_strategy, options);
  for (auto& ec : exact) {
    if (ec.count >= threshold) result.frequent.push_back(std::move(ec));
  }
  report.second_pass_seconds = seconds_since(start);
  report.final_frequent = result.frequent.size();
  return result;
}

}  // namespace epm
