#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "episode_miner/model.hpp"

namespace epm {

class SerialCounter;
class RelaxedCounter;

// P + 1 strictly increasing boundaries; segment p (0-based) holds the events
// with lower(p) < time <= upper(p). P is a power of two.
class SegmentPlan {
 public:
  explicit SegmentPlan(std::vector<Time> boundaries);

  std::size_t segments() const noexcept { return boundaries_.size() - 1; }
  Time lower(std::size_t p) const { return boundaries_[p]; }
  Time upper(std::size_t p) const { return boundaries_[p + 1]; }
  std::span<const Time> boundaries() const noexcept { return boundaries_; }

 private:
  std::vector<Time> boundaries_;
};

bool is_power_of_two(std::size_t n) noexcept;

// Equal-duration split of (begin, end].
SegmentPlan plan_segments(Time begin, Time end, std::size_t segments);
// Equal-duration split of the stream's time range; the first boundary sits
// just before the first event. Throws EmptyStream.
SegmentPlan plan_segments(const EventStream& stream, std::size_t segments);

// A tuple endpoint: the stream index of a completing event, or the segment
// boundary itself when there is no such completion.
struct Endpoint {
  std::optional<std::size_t> event;
  Time time = 0.0;

  static Endpoint boundary(Time t) { return {std::nullopt, t}; }
  static Endpoint completion(std::size_t index, Time t) { return {index, t}; }
  bool is_sentinel() const noexcept { return !event.has_value(); }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

// Where a Map-step machine started: an offset machine k begins at
// lower(p) - (t_high(1) + ... + t_high(k)); an anchored machine begins right
// after a completing-type event inside the lookback window.
struct MachineStart {
  enum class Kind { Offset, Anchor };
  Kind kind = Kind::Offset;
  std::size_t value = 0;  // k for Offset, event index for Anchor
};

// Result of one Map-step machine for segment p.
//   a     - first completion after lower(p), if it ends within max_span of
//           lower(p); otherwise the boundary sentinel lower(p).
//   count - completions in (lower(p), upper(p)], the one at `a` included.
//   b     - first completion after upper(p), within max_span of it, which is
//           not counted here; otherwise the sentinel upper(p).
// Two machines with equal `a` are in the same state from `a` on, so equality
// ignores `start`.
struct SegmentSummary {
  Endpoint a;
  std::uint64_t count = 0;
  Endpoint b;
  MachineStart start;

  friend bool operator==(const SegmentSummary& x, const SegmentSummary& y) {
    return x.a == y.a && x.count == y.count && x.b == y.b;
  }
};

// Offset machine k (0 <= k < N) for segment p, run literally under the Map
// rules. Throws InvalidArgument if the plan does not cover the stream.
SegmentSummary map_segment(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                           std::size_t segment, std::size_t offset);

// Machine started right after event `anchor`.
SegmentSummary map_segment_anchored(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                                    std::size_t segment, std::size_t anchor);

// Deduplicated summaries of every machine segment p needs: the N offset
// machines plus one anchored machine per completing-type event in
// (lower(p) - max_span, lower(p)]. Segment 0 runs only the k = 0 machine.
std::vector<SegmentSummary> map_segment_all(const Episode& episode, const EventStream& stream,
                                            const SegmentPlan& plan, std::size_t segment);

// Joins summaries of two adjacent runs: every pair with left.b == right.a
// yields (left.a, left.count + right.count, right.b). Throws NoJoin if no pair
// matches.
std::vector<SegmentSummary> concatenate(std::span<const SegmentSummary> left,
                                        std::span<const SegmentSummary> right);

struct SegmentedStats {
  std::size_t segments = 0;
  std::size_t offset_machines = 0;
  std::size_t anchored_machines = 0;
  std::size_t distinct_entries = 0;  // machines actually run past their entry key
  std::size_t concatenations = 0;
  std::size_t tree_levels = 0;
};

struct SegmentedCount {
  EpisodeCount result;
  SegmentedStats stats;
};

// Map over all segments in parallel, then a binary concatenation tree. Equals
// count_serial for every power-of-two P.
SegmentedCount count_segmented_detailed(const Episode& episode, const EventStream& stream, std::size_t segments,
                                        std::size_t workers = 0);
EpisodeCount count_segmented(const Episode& episode, const EventStream& stream, std::size_t segments,
                             std::size_t workers = 0);
// Same with explicit boundaries; the plan must cover the stream.
SegmentedCount count_segmented_detailed(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                                        std::size_t workers = 0);

// Same scheme driven by the single-slot relaxed machine.
EpisodeCount count_segmented_relaxed(const Episode& relaxed_episode, const EventStream& stream,
                                     std::size_t segments, std::size_t workers = 0);
EpisodeCount count_segmented_relaxed(const Episode& relaxed_episode, const EventStream& stream,
                                     const SegmentPlan& plan, std::size_t workers = 0);

}  // namespace epm
