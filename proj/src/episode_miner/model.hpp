#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace epm {

using TypeId = std::uint32_t;
using Time = double;

enum class ErrorCode {
  InvalidArgument,
  UnsortedStream,
  UnknownSymbol,
  InvalidTimestamp,
  MalformedLine,
  ParseError,
  EmptyStream,
  RelaxationRequired,
  DegenerateFit,
  NoJoin,
  InstanceTooLarge,
  Io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the engine. `position` is the offending event index,
// 1-based line number or character offset depending on the code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

struct Event {
  TypeId type = 0;
  Time time = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct LabeledEvent {
  std::string label;
  Time time = 0.0;
};

class Alphabet {
 public:
  Alphabet() = default;
  // Ids are assigned in the given order. Throws InvalidArgument on duplicates.
  explicit Alphabet(std::vector<std::string> symbols);

  // Sorted, de-duplicated alphabet of the given labels.
  static Alphabet from_labels(std::span<const std::string> labels);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::optional<TypeId> find(std::string_view label) const;
  // Throws UnknownSymbol.
  TypeId id(std::string_view label) const;
  const std::string& label(TypeId id) const { return symbols_.at(id); }
  std::span<const std::string> symbols() const noexcept { return symbols_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TypeId, Hash, std::equal_to<>> index_;
};

// Time-ordered event sequence over an alphabet. Immutable once built; the
// constructor runs validate_events.
class EventStream {
 public:
  EventStream() = default;
  EventStream(Alphabet alphabet, std::vector<Event> events);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  Time first_time() const { return events_.front().time; }
  Time last_time() const { return events_.back().time; }

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Event> events_;
};

// Throws UnsortedStream, UnknownSymbol or InvalidTimestamp naming the first
// offending index.
void validate_events(const Alphabet& alphabet, std::span<const Event> events);

// Interns labels against `alphabet`; throws UnknownSymbol(index) for a label
// outside it.
EventStream validate_stream(const Alphabet& alphabet, std::span<const LabeledEvent> events);
// Builds the alphabet from the labels present.
EventStream validate_stream(std::span<const LabeledEvent> events);

// Half-open delay bound (low, high].
class IntervalConstraint {
 public:
  // Throws InvalidArgument unless 0 <= low < high, both finite.
  IntervalConstraint(Time low, Time high);

  Time low() const noexcept { return low_; }
  Time high() const noexcept { return high_; }
  bool admits(Time delta) const noexcept { return low_ < delta && delta <= high_; }

  friend auto operator<=>(const IntervalConstraint&, const IntervalConstraint&) = default;

 private:
  Time low_;
  Time high_;
};

// Serial episode: N event types joined by N-1 delay constraints.
class Episode {
 public:
  // Throws InvalidArgument for an empty type list or a constraint count other
  // than types.size() - 1.
  Episode(std::vector<TypeId> types, std::vector<IntervalConstraint> constraints);
  explicit Episode(TypeId single) : types_{single} {}

  std::size_t size() const noexcept { return types_.size(); }
  TypeId type(std::size_t i) const { return types_[i]; }
  const IntervalConstraint& constraint(std::size_t i) const { return constraints_[i]; }
  std::span<const TypeId> types() const noexcept { return types_; }
  std::span<const IntervalConstraint> constraints() const noexcept { return constraints_; }

  // Upper bound on the time span of any occurrence: the sum of all t_high.
  Time max_span() const noexcept;
  // Sum of the first k upper bounds.
  Time high_prefix_sum(std::size_t k) const noexcept;
  bool is_relaxed() const noexcept;

  // Canonical order: types first, then constraints.
  friend auto operator<=>(const Episode&, const Episode&) = default;

 private:
  std::vector<TypeId> types_;
  std::vector<IntervalConstraint> constraints_;
};

struct EpisodeCount {
  Episode episode;
  std::uint64_t count = 0;

  friend bool operator==(const EpisodeCount&, const EpisodeCount&) = default;
};

}  // namespace epm
