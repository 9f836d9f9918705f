#include "episode_miner/serial_counter.hpp"

#include <algorithm>

#include "episode_miner/parallel.hpp"

namespace epm {

LevelIndex::LevelIndex(const Episode& episode) {
  const auto types = episode.types();
  const TypeId max_type = *std::max_element(types.begin(), types.end());
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(max_type) + 1, 0);
  for (TypeId t : types) ++counts[t];

  offsets_.assign(counts.size() + 1, 0);
  for (std::size_t t = 0; t < counts.size(); ++t) offsets_[t + 1] = offsets_[t] + counts[t];

  levels_.resize(types.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t level = types.size(); level-- > 0;) {
    levels_[fill[types[level]]++] = static_cast<std::uint32_t>(level);
  }
}

SerialCounter::SerialCounter(const Episode& episode)
    : episode_(episode), index_(episode), lists_(episode.size()) {}

void SerialCounter::reset() noexcept {
  for (auto& list : lists_) {
    list.times.clear();
    list.head = 0;
  }
}

// Newest-first scan of the predecessor list. Entries are time-ordered, so once
// a delay exceeds the upper bound every older entry does too, for this and all
// later events; those are dropped.
bool SerialCounter::has_predecessor(std::size_t level, Time t) {
  List& prev = lists_[level - 1];
  const IntervalConstraint& c = episode_.constraint(level - 1);
  for (std::size_t j = prev.times.size(); j > prev.head; --j) {
    const Time delta = t - prev.times[j - 1];
    if (delta > c.high()) {
      prev.head = j;
      return false;
    }
    if (delta > c.low()) return true;
  }
  return false;
}

void SerialCounter::push(std::size_t level, Time t) {
  List& list = lists_[level];
  if (list.head > 64 && list.head * 2 > list.times.size()) {
    list.times.erase(list.times.begin(), list.times.begin() + static_cast<std::ptrdiff_t>(list.head));
    list.head = 0;
  }
  list.times.push_back(t);
}

bool SerialCounter::feed(const Event& event) {
  const std::size_t last = episode_.size() - 1;
  for (std::uint32_t level : index_.levels_of(event.type)) {
    if (level == 0) {
      if (last == 0) return true;
      push(0, event.time);
    } else if (has_predecessor(level, event.time)) {
      if (level == last) {
        reset();
        return true;
      }
      push(level, event.time);
    }
  }
  return false;
}

EpisodeCount count_serial(const Episode& episode, const EventStream& stream) {
  SerialCounter counter(episode);
  std::uint64_t count = 0;
  for (const Event& e : stream.events()) count += counter.feed(e) ? 1 : 0;
  return {episode, count};
}

std::vector<EpisodeCount> count_serial_batch(std::span<const Episode> episodes, const EventStream& stream,
                                             std::size_t workers) {
  std::vector<std::uint64_t> counts(episodes.size(), 0);
  parallel_for(episodes.size(), workers,
               [&](std::size_t i) { counts[i] = count_serial(episodes[i], stream).count; });
  std::vector<EpisodeCount> out;
  out.reserve(episodes.size());
  for (std::size_t i = 0; i < episodes.size(); ++i) out.push_back({episodes[i], counts[i]});
  return out;
}

}  // namespace epm
