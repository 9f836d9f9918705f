#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "episode_miner/model.hpp"
#include "episode_miner/serial_counter.hpp"

namespace epm {

// Same event types, every constraint (low, high] replaced by (0, high].
Episode relax(const Episode& episode);

// Single-slot counter for relaxed episodes. With a zero lower bound the most
// recent admissible predecessor dominates every older one, so each level keeps
// one timestamp. The slot also remembers the latest strictly earlier
// timestamp: an event tied in time with the newest entry cannot use it (the
// delay must be positive) but may still use the one before.
class RelaxedCounter {
 public:
  // Throws RelaxationRequired if any constraint has a positive lower bound.
  explicit RelaxedCounter(const Episode& relaxed_episode);

  bool feed(const Event& event);
  void reset() noexcept;

  const Episode& episode() const noexcept { return episode_; }

 private:
  struct Slot {
    bool has_latest = false;
    bool has_earlier = false;
    Time latest = 0.0;
    Time earlier = 0.0;  // greatest stored time < latest
  };

  bool has_predecessor(std::size_t level, Time t) const noexcept;
  void store(std::size_t level, Time t) noexcept;

  Episode episode_;
  LevelIndex index_;
  std::vector<Slot> slots_;
};

// Upper bound on count_serial of any episode whose relaxation is `relaxed_episode`.
EpisodeCount count_relaxed(const Episode& relaxed_episode, const EventStream& stream);

std::vector<EpisodeCount> count_relaxed_batch(std::span<const Episode> relaxed_episodes, const EventStream& stream,
                                              std::size_t workers = 0);

}  // namespace epm
