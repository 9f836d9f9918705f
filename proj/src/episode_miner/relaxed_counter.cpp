#include "episode_miner/relaxed_counter.hpp"

#include "episode_miner/parallel.hpp"

namespace epm {

Episode relax(const Episode& episode) {
  std::vector<IntervalConstraint> relaxed;
  relaxed.reserve(episode.constraints().size());
  for (const auto& c : episode.constraints()) relaxed.emplace_back(0.0, c.high());
  return Episode({episode.types().begin(), episode.types().end()}, std::move(relaxed));
}

namespace {

const Episode& require_relaxed(const Episode& episode) {
  if (!episode.is_relaxed()) {
    throw Error(ErrorCode::RelaxationRequired, "relaxed counting needs every lower bound to be 0");
  }
  return episode;
}

}  // namespace

RelaxedCounter::RelaxedCounter(const Episode& relaxed_episode)
    : episode_(require_relaxed(relaxed_episode)), index_(episode_), slots_(episode_.size()) {}

void RelaxedCounter::reset() noexcept {
  for (auto& s : slots_) s = Slot{};
}

bool RelaxedCounter::has_predecessor(std::size_t level, Time t) const noexcept {
  const Slot& prev = slots_[level - 1];
  if (!prev.has_latest) return false;
  const Time high = episode_.constraint(level - 1).high();
  if (prev.latest < t) return t - prev.latest <= high;
  return prev.has_earlier && t - prev.earlier <= high;
}

void RelaxedCounter::store(std::size_t level, Time t) noexcept {
  Slot& s = slots_[level];
  if (s.has_latest && s.latest == t) return;
  if (s.has_latest) {
    s.earlier = s.latest;
    s.has_earlier = true;
  }
  s.latest = t;
  s.has_latest = true;
}

bool RelaxedCounter::feed(const Event& event) {
  const std::size_t last = episode_.size() - 1;
  for (std::uint32_t level : index_.levels_of(event.type)) {
    if (level == 0) {
      if (last == 0) return true;
      store(0, event.time);
    } else if (has_predecessor(level, event.time)) {
      if (level == last) {
        reset();
        return true;
      }
      store(level, event.time);
    }
  }
  return false;
}

EpisodeCount count_relaxed(const Episode& relaxed_episode, const EventStream& stream) {
  RelaxedCounter counter(relaxed_episode);
  std::uint64_t count = 0;
  for (const Event& e : stream.events()) count += counter.feed(e) ? 1 : 0;
  return {relaxed_episode, count};
}

std::vector<EpisodeCount> count_relaxed_batch(std::span<const Episode> relaxed_episodes, const EventStream& stream,
                                              std::size_t workers) {
  std::vector<std::uint64_t> counts(relaxed_episodes.size(), 0);
  parallel_for(relaxed_episodes.size(), workers,
               [&](std::size_t i) { counts[i] = count_relaxed(relaxed_episodes[i], stream).count; });
  std::vector<EpisodeCount> out;
  out.reserve(relaxed_episodes.size());
  for (std::size_t i = 0; i < relaxed_episodes.size(); ++i) out.push_back({relaxed_episodes[i], counts[i]});
  return out;
}

}  // namespace epm
