#include "episode_miner/segmented_counter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "episode_miner/parallel.hpp"
#include "episode_miner/relaxed_counter.hpp"
#include "episode_miner/serial_counter.hpp"

namespace epm {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

SegmentPlan::SegmentPlan(std::vector<Time> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || !is_power_of_two(boundaries_.size() - 1)) {
    throw Error(ErrorCode::InvalidArgument, "segment plan needs 2^q + 1 boundaries");
  }
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (!std::isfinite(boundaries_[i]) || (i > 0 && !(boundaries_[i - 1] < boundaries_[i]))) {
      throw Error(ErrorCode::InvalidArgument, "segment boundaries must be finite and strictly increasing", i);
    }
  }
}

SegmentPlan plan_segments(Time begin, Time end, std::size_t segments) {
  if (!is_power_of_two(segments)) throw Error(ErrorCode::InvalidArgument, "segment count must be a power of two");
  if (!(begin < end)) throw Error(ErrorCode::InvalidArgument, "segment range must be non-empty");
  std::vector<Time> b(segments + 1);
  const Time width = end - begin;
  for (std::size_t i = 0; i < segments; ++i) {
    b[i] = begin + width * static_cast<Time>(i) / static_cast<Time>(segments);
  }
  b[segments] = end;
  return SegmentPlan(std::move(b));
}

SegmentPlan plan_segments(const EventStream& stream, std::size_t segments) {
  if (stream.empty()) throw Error(ErrorCode::EmptyStream, "cannot segment an empty stream");
  if (!is_power_of_two(segments)) throw Error(ErrorCode::InvalidArgument, "segment count must be a power of two");
  const Time first = stream.first_time();
  const Time last = stream.last_time();
  const Time width = last > first ? last - first : 1.0;
  const Time margin = width / (2.0 * static_cast<Time>(segments));
  Time begin = first - margin;
  if (!(begin < first)) begin = std::nextafter(first, -std::numeric_limits<Time>::infinity());
  const Time end = last > first ? last : first + margin;
  return plan_segments(begin, end, segments);
}

namespace {

// Slack added to every reach/lookback bound so that rounding in the per-edge
// delay checks can never let an occurrence outrun them.
Time guard(Time t, Time span) { return 1e-9 * (1.0 + std::abs(t) + span); }

bool summary_less(const SegmentSummary& x, const SegmentSummary& y) {
  auto key = [](const SegmentSummary& s) {
    return std::make_tuple(s.a.time, s.a.event.has_value(), s.a.event.value_or(0), s.count, s.b.time,
                           s.b.event.has_value(), s.b.event.value_or(0));
  };
  return key(x) < key(y);
}

void sort_unique(std::vector<SegmentSummary>& v) {
  std::stable_sort(v.begin(), v.end(), summary_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class Machine>
class SegmentMapper {
 public:
  SegmentMapper(const Episode& episode, const EventStream& stream, const SegmentPlan& plan)
      : episode_(episode), events_(stream.events()), plan_(plan), span_(episode.max_span()) {
    if (!events_.empty() &&
        (!(events_.front().time > plan.lower(0)) || events_.back().time > plan.upper(plan.segments() - 1))) {
      throw Error(ErrorCode::InvalidArgument, "segment plan does not cover the stream");
    }
  }

  std::size_t segments() const { return plan_.segments(); }

  // First event index with time > t.
  std::size_t first_after(Time t) const {
    auto it = std::upper_bound(events_.begin(), events_.end(), t,
                               [](Time value, const Event& e) { return value < e.time; });
    return static_cast<std::size_t>(it - events_.begin());
  }

  Time reach(Time boundary) const { return boundary + span_ + guard(boundary, span_); }
  Time lookback(Time boundary) const { return boundary - span_ - guard(boundary, span_); }

  std::size_t offset_start(std::size_t p, std::size_t k) const {
    if (p == 0) return 0;
    return first_after(plan_.lower(p) - episode_.high_prefix_sum(k));
  }

  // Applies the Map rules to a fresh machine fed from events[first].
  SegmentSummary run(std::size_t p, std::size_t first, MachineStart start) const {
    const Time lo = plan_.lower(p);
    const Time hi = plan_.upper(p);
    const Time lo_reach = reach(lo);
    const Time hi_reach = reach(hi);
    Machine machine(episode_);
    SegmentSummary out{Endpoint::boundary(lo), 0, Endpoint::boundary(hi), start};
    bool seen_first = false;
    for (std::size_t i = first; i < events_.size(); ++i) {
      const Time t = events_[i].time;
      if (t > hi_reach) break;
      if (!machine.feed(events_[i]) || t <= lo) continue;
      if (!seen_first) {
        seen_first = true;
        if (t <= lo_reach) out.a = Endpoint::completion(i, t);
      }
      if (t <= hi) {
        ++out.count;
      } else {
        out.b = Endpoint::completion(i, t);
        break;
      }
    }
    return out;
  }

  // The entry key of a machine: its first completion after lower(p) when that
  // lies within reach, the boundary sentinel otherwise.
  Endpoint entry_key(std::size_t p, std::size_t first) const {
    const Time lo = plan_.lower(p);
    const Time lo_reach = reach(lo);
    Machine machine(episode_);
    for (std::size_t i = first; i < events_.size(); ++i) {
      const Time t = events_[i].time;
      if (t > lo_reach) break;
      if (machine.feed(events_[i]) && t > lo) return Endpoint::completion(i, t);
    }
    return Endpoint::boundary(lo);
  }

  // Summary of the machine class identified by entry key `a`. After a
  // completion every machine is empty; a sentinel key behaves like a machine
  // started fresh at lower(p).
  SegmentSummary resume(std::size_t p, const Endpoint& a, MachineStart start) const {
    const Time lo = plan_.lower(p);
    const Time hi = plan_.upper(p);
    const Time hi_reach = reach(hi);
    SegmentSummary out{a, 0, Endpoint::boundary(hi), start};
    std::size_t i = 0;
    if (a.is_sentinel()) {
      i = first_after(lo);
    } else {
      if (a.time > hi) {
        out.b = a;
        return out;
      }
      out.count = 1;
      i = *a.event + 1;
    }
    Machine machine(episode_);
    for (; i < events_.size(); ++i) {
      const Time t = events_[i].time;
      if (t > hi_reach) break;
      if (!machine.feed(events_[i])) continue;
      if (t <= hi) {
        ++out.count;
      } else {
        out.b = Endpoint::completion(i, t);
        break;
      }
    }
    return out;
  }

  std::vector<MachineStart> starts(std::size_t p) const {
    std::vector<MachineStart> out;
    if (p == 0) {
      out.push_back({MachineStart::Kind::Offset, 0});
      return out;
    }
    for (std::size_t k = 0; k < episode_.size(); ++k) out.push_back({MachineStart::Kind::Offset, k});
    const TypeId final_type = episode_.type(episode_.size() - 1);
    const std::size_t end = first_after(plan_.lower(p));
    for (std::size_t i = first_after(lookback(plan_.lower(p))); i < end; ++i) {
      if (events_[i].type == final_type) out.push_back({MachineStart::Kind::Anchor, i});
    }
    return out;
  }

  std::size_t start_index(std::size_t p, const MachineStart& s) const {
    if (s.kind == MachineStart::Kind::Anchor) return s.value + 1;
    // The widest offset machine also has to cover every reset before the
    // anchored window, so it starts at the (guarded) lookback bound.
    if (p > 0 && s.value + 1 == episode_.size()) return first_after(lookback(plan_.lower(p)));
    return offset_start(p, s.value);
  }

  std::vector<SegmentSummary> map_all(std::size_t p, SegmentedStats* stats) const {
    const auto all = starts(p);
    std::vector<std::pair<Endpoint, MachineStart>> keys;
    keys.reserve(all.size());
    for (const auto& s : all) {
      const Endpoint key = entry_key(p, start_index(p, s));
      if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; })) {
        keys.emplace_back(key, s);
      }
    }
    std::vector<SegmentSummary> out;
    out.reserve(keys.size());
    for (const auto& [key, s] : keys) out.push_back(resume(p, key, s));
    sort_unique(out);
    if (stats) {
      stats->offset_machines += p == 0 ? 1 : episode_.size();
      stats->anchored_machines += all.size() - (p == 0 ? 1 : episode_.size());
      stats->distinct_entries += keys.size();
    }
    return out;
  }

 private:
  const Episode& episode_;
  std::span<const Event> events_;
  const SegmentPlan& plan_;
  Time span_;
};

void check_segment(const SegmentPlan& plan, std::size_t segment) {
  if (segment >= plan.segments()) throw Error(ErrorCode::InvalidArgument, "segment index out of range");
}

template <class Machine>
SegmentedCount run_segmented(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                             std::size_t workers) {
  const SegmentMapper<Machine> mapper(episode, stream, plan);
  const std::size_t p_count = plan.segments();

  std::vector<std::vector<SegmentSummary>> runs(p_count);
  std::vector<SegmentedStats> per_segment(p_count);
  parallel_for(p_count, workers, [&](std::size_t p) { runs[p] = mapper.map_all(p, &per_segment[p]); });

  SegmentedStats stats;
  stats.segments = p_count;
  for (const auto& s : per_segment) {
    stats.offset_machines += s.offset_machines;
    stats.anchored_machines += s.anchored_machines;
    stats.distinct_entries += s.distinct_entries;
  }

  while (runs.size() > 1) {
    std::vector<std::vector<SegmentSummary>> next(runs.size() / 2);
    parallel_for(next.size(), workers, [&](std::size_t j) { next[j] = concatenate(runs[2 * j], runs[2 * j + 1]); });
    stats.concatenations += next.size();
    ++stats.tree_levels;
    runs = std::move(next);
  }

  if (runs.front().size() != 1) {
    throw Error(ErrorCode::NoJoin, "segment concatenation did not reduce to a single chain");
  }
  return {{episode, runs.front().front().count}, stats};
}

}  // namespace

SegmentSummary map_segment(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                           std::size_t segment, std::size_t offset) {
  check_segment(plan, segment);
  if (offset >= episode.size()) throw Error(ErrorCode::InvalidArgument, "offset machine index must be < N");
  const SegmentMapper<SerialCounter> mapper(episode, stream, plan);
  return mapper.run(segment, mapper.offset_start(segment, offset), {MachineStart::Kind::Offset, offset});
}

SegmentSummary map_segment_anchored(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                                    std::size_t segment, std::size_t anchor) {
  check_segment(plan, segment);
  if (anchor >= stream.size()) throw Error(ErrorCode::InvalidArgument, "anchor event index out of range");
  const SegmentMapper<SerialCounter> mapper(episode, stream, plan);
  return mapper.run(segment, anchor + 1, {MachineStart::Kind::Anchor, anchor});
}

std::vector<SegmentSummary> map_segment_all(const Episode& episode, const EventStream& stream,
                                            const SegmentPlan& plan, std::size_t segment) {
  check_segment(plan, segment);
  const SegmentMapper<SerialCounter> mapper(episode, stream, plan);
  return mapper.map_all(segment, nullptr);
}

std::vector<SegmentSummary> concatenate(std::span<const SegmentSummary> left,
                                        std::span<const SegmentSummary> right) {
  std::vector<SegmentSummary> out;
  for (const auto& l : left) {
    auto match = std::find_if(right.begin(), right.end(), [&](const SegmentSummary& r) { return r.a == l.b; });
    if (match == right.end()) continue;
    out.push_back({l.a, l.count + match->count, match->b, l.start});
  }
  if (out.empty() && !(left.empty() && right.empty())) {
    throw Error(ErrorCode::NoJoin, "no summary pair joins across the boundary");
  }
  sort_unique(out);
  return out;
}

namespace {

template <class Machine>
SegmentedCount run_planned(const Episode& episode, const EventStream& stream, std::size_t segments,
                           std::size_t workers) {
  if (stream.empty()) {
    if (!is_power_of_two(segments)) throw Error(ErrorCode::InvalidArgument, "segment count must be a power of two");
    return {{episode, 0}, {}};
  }
  return run_segmented<Machine>(episode, stream, plan_segments(stream, segments), workers);
}

void require_relaxed(const Episode& episode) {
  if (!episode.is_relaxed()) {
    throw Error(ErrorCode::RelaxationRequired, "relaxed counting needs every lower bound to be 0");
  }
}

}  // namespace

SegmentedCount count_segmented_detailed(const Episode& episode, const EventStream& stream, std::size_t segments,
                                        std::size_t workers) {
  return run_planned<SerialCounter>(episode, stream, segments, workers);
}

SegmentedCount count_segmented_detailed(const Episode& episode, const EventStream& stream, const SegmentPlan& plan,
                                        std::size_t workers) {
  return run_segmented<SerialCounter>(episode, stream, plan, workers);
}

EpisodeCount count_segmented(const Episode& episode, const EventStream& stream, std::size_t segments,
                             std::size_t workers) {
  return run_planned<SerialCounter>(episode, stream, segments, workers).result;
}

EpisodeCount count_segmented_relaxed(const Episode& relaxed_episode, const EventStream& stream,
                                     std::size_t segments, std::size_t workers) {
  require_relaxed(relaxed_episode);
  return run_planned<RelaxedCounter>(relaxed_episode, stream, segments, workers).result;
}

EpisodeCount count_segmented_relaxed(const Episode& relaxed_episode, const EventStream& stream,
                                     const SegmentPlan& plan, std::size_t workers) {
  require_relaxed(relaxed_episode);
  return run_segmented<RelaxedCounter>(relaxed_episode, stream, plan, workers).result;
}

}  // namespace epm
