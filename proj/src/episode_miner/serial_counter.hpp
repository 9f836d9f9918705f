#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "episode_miner/model.hpp"

namespace epm {

// Maps an event type to the episode levels that expect it, highest level
// first. Types outside the episode resolve to an empty range in O(1).
class LevelIndex {
 public:
  explicit LevelIndex(const Episode& episode);

  std::span<const std::uint32_t> levels_of(TypeId type) const noexcept {
    if (type + 1 >= offsets_.size()) return {};
    return std::span<const std::uint32_t>(levels_).subspan(offsets_[type], offsets_[type + 1] - offsets_[type]);
  }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> levels_;
};

// Non-overlapped occurrence counter for one episode under full (low, high]
// constraints. Keeps, per level, every timestamp that extends some entry of the
// level below; completing the last level resets all lists.
//
// Levels are visited from last to first for each event. A successful
// non-final extension stops the predecessor scan for that level only, so one
// event may be recorded at several levels when its type repeats in the episode.
class SerialCounter {
 public:
  explicit SerialCounter(const Episode& episode);

  // Returns true when `event` completes an occurrence; the state is then empty.
  bool feed(const Event& event);
  void reset() noexcept;

  const Episode& episode() const noexcept { return episode_; }
  // Entries currently held at `level` (live ones only).
  std::size_t list_size(std::size_t level) const noexcept { return lists_[level].times.size() - lists_[level].head; }

 private:
  struct List {
    std::vector<Time> times;
    std::size_t head = 0;  // entries before head can no longer satisfy any upper bound
  };

  bool has_predecessor(std::size_t level, Time t);
  void push(std::size_t level, Time t);

  Episode episode_;
  LevelIndex index_;
  std::vector<List> lists_;
};

EpisodeCount count_serial(const Episode& episode, const EventStream& stream);

// Counts each episode independently; results follow input order and do not
// depend on `workers` (0 = hardware concurrency).
std::vector<EpisodeCount> count_serial_batch(std::span<const Episode> episodes, const EventStream& stream,
                                             std::size_t workers = 0);

}  // namespace epm
