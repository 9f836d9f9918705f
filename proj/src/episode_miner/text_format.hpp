#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "episode_miner/model.hpp"
#include "episode_miner/synth.hpp"

namespace epm {

// Event streams: one `<time>,<label>` per line, `#` starts a comment, blank
// lines are ignored. Labels are [A-Za-z0-9_.:]+. The alphabet is the sorted
// set of labels present.
struct ParseOptions {
  bool sort = false;  // stable sort by time instead of rejecting disorder
};

// Throws MalformedLine(1-based line), UnsortedStream(0-based event index) or
// InvalidTimestamp(event index).
EventStream parse_stream(std::string_view text, const ParseOptions& options = {});
// Shortest decimal that reads back to the same double.
std::string write_stream(const EventStream& stream);

// Throws Io on open/read/write failure.
EventStream load_stream(const std::filesystem::path& path, const ParseOptions& options = {});
void save_stream(const std::filesystem::path& path, const EventStream& stream);

std::string format_time(Time t);
bool is_label(std::string_view s) noexcept;

// `A -(5,10]-> B -(10,15]-> C`. Throws ParseError(character offset) or
// UnknownSymbol(character offset) for a label missing from the alphabet.
Episode parse_episode(std::string_view text, const Alphabet& alphabet);
std::string write_episode(const Episode& episode, const Alphabet& alphabet);

std::string write_constraint(const IntervalConstraint& c);
// `(5,10];(10,15]`. Throws ParseError.
std::vector<IntervalConstraint> parse_constraints(std::string_view text);
std::string write_constraints(std::span<const IntervalConstraint> cs);

// `A>B>C@(0.001,0.005]p0.9`. The delay part is one interval for every edge or
// one per edge separated by `;`; it defaults to default_chain_delay(). The
// probability defaults to 0.9. Labels are resolved with neuron_label against
// `neurons`. Throws ParseError.
ChainSpec parse_chain(std::string_view text, std::size_t neurons);
std::string write_chain(const ChainSpec& chain, std::size_t neurons);

}  // namespace epm
