#include "episode_miner/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsortedStream: return "UnsortedStream";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::InvalidTimestamp: return "InvalidTimestamp";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::RelaxationRequired: return "RelaxationRequired";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::NoJoin: return "NoJoin";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> position)
    : std::runtime_error(std::move(message)), code_(code), position_(position) {}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  index_.reserve(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], static_cast<TypeId>(i)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate alphabet symbol '" + symbols_[i] + "'", i);
    }
  }
}

Alphabet Alphabet::from_labels(std::span<const std::string> labels) {
  std::vector<std::string> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return Alphabet(std::move(sorted));
}

std::optional<TypeId> Alphabet::find(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TypeId Alphabet::id(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw Error(ErrorCode::UnknownSymbol, "unknown event type '" + std::string(label) + "'");
}

void validate_events(const Alphabet& alphabet, std::span<const Event> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (!std::isfinite(e.time) || e.time < 0.0) {
      throw Error(ErrorCode::InvalidTimestamp,
                  "event " + std::to_string(i) + " has a negative or non-finite timestamp", i);
    }
    if (e.type >= alphabet.size()) {
      throw Error(ErrorCode::UnknownSymbol,
                  "event " + std::to_string(i) + " has a type outside the alphabet", i);
    }
    if (i > 0 && events[i - 1].time > e.time) {
      throw Error(ErrorCode::UnsortedStream,
                  "event " + std::to_string(i) + " is earlier than its predecessor", i);
    }
  }
}

EventStream::EventStream(Alphabet alphabet, std::vector<Event> events)
    : alphabet_(std::move(alphabet)), events_(std::move(events)) {
  validate_events(alphabet_, events_);
}

EventStream validate_stream(const Alphabet& alphabet, std::span<const LabeledEvent> events) {
  std::vector<Event> interned;
  interned.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto id = alphabet.find(events[i].label);
    if (!id) {
      throw Error(ErrorCode::UnknownSymbol,
                  "event " + std::to_string(i) + " has unknown type '" + events[i].label + "'", i);
    }
    interned.push_back({*id, events[i].time});
  }
  return EventStream(alphabet, std::move(interned));
}

EventStream validate_stream(std::span<const LabeledEvent> events) {
  std::vector<std::string> labels;
  labels.reserve(events.size());
  for (const auto& e : events) labels.push_back(e.label);
  return validate_stream(Alphabet::from_labels(labels), events);
}

IntervalConstraint::IntervalConstraint(Time low, Time high) : low_(low), high_(high) {
  if (!std::isfinite(low) || !std::isfinite(high) || low < 0.0 || !(low < high)) {
    throw Error(ErrorCode::InvalidArgument, "interval constraint requires 0 <= low < high");
  }
}

Episode::Episode(std::vector<TypeId> types, std::vector<IntervalConstraint> constraints)
    : types_(std::move(types)), constraints_(std::move(constraints)) {
  if (types_.empty()) throw Error(ErrorCode::InvalidArgument, "episode needs at least one event type");
  if (constraints_.size() + 1 != types_.size()) {
    throw Error(ErrorCode::InvalidArgument, "episode of N types needs exactly N-1 constraints");
  }
}

Time Episode::max_span() const noexcept { return high_prefix_sum(constraints_.size()); }

Time Episode::high_prefix_sum(std::size_t k) const noexcept {
  k = std::min(k, constraints_.size());
  return std::accumulate(constraints_.begin(), constraints_.begin() + static_cast<std::ptrdiff_t>(k), 0.0,
                         [](Time acc, const IntervalConstraint& c) { return acc + c.high(); });
}

bool Episode::is_relaxed() const noexcept {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [](const IntervalConstraint& c) { return c.low() == 0.0; });
}

}  // namespace epm
