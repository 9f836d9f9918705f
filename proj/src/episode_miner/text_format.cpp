#include "episode_miner/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace epm {

namespace {

bool label_char(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
         c == ':';
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Accepts plain decimal and exponent notation only; no inf, nan, hex or sign.
bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (!std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+';
      })) {
    return false;
  }
  if (s.front() == '-' || s.front() == '+') return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, std::chars_format::general);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Recursive-descent cursor for the episode, constraint and chain grammars.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

  std::size_t pos() const noexcept { return base_ + i_; }
  bool done() const noexcept { return i_ >= text_.size(); }
  char peek() const noexcept { return done() ? '\0' : text_[i_]; }

  void skip_space() {
    while (!done() && (text_[i_] == ' ' || text_[i_] == '\t')) ++i_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos()), pos());
  }

  bool accept(std::string_view token) {
    if (text_.substr(i_).starts_with(token)) {
      i_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string_view label() {
    const std::size_t start = i_;
    while (!done() && label_char(text_[i_])) ++i_;
    if (i_ == start) fail("expected a label");
    return text_.substr(start, i_ - start);
  }

  double number() {
    const std::size_t start = i_;
    while (!done() && (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.' ||
                       text_[i_] == 'e' || text_[i_] == 'E' ||
                       ((text_[i_] == '-' || text_[i_] == '+') && i_ > start &&
                        (text_[i_ - 1] == 'e' || text_[i_ - 1] == 'E')))) {
      ++i_;
    }
    double v = 0.0;
    if (!parse_number(text_.substr(start, i_ - start), v)) {
      i_ = start;
      fail("expected a non-negative number");
    }
    return v;
  }

  IntervalConstraint interval() {
    expect("(");
    skip_space();
    const std::size_t at = pos();
    const double low = number();
    skip_space();
    expect(",");
    skip_space();
    const double high = number();
    skip_space();
    expect("]");
    if (!(low < high)) {
      throw Error(ErrorCode::ParseError, "interval needs low < high at offset " + std::to_string(at), at);
    }
    return IntervalConstraint(low, high);
  }

 private:
  std::string_view text_;
  std::size_t base_;
  std::size_t i_ = 0;
};

}  // namespace

bool is_label(std::string_view s) noexcept { return !s.empty() && std::all_of(s.begin(), s.end(), label_char); }

std::string format_time(Time t) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, ptr);
}

EventStream parse_stream(std::string_view text, const ParseOptions& options) {
  std::vector<LabeledEvent> events;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": expected <time>,<label>", line_no);
    }
    const auto time_text = trim(line.substr(0, comma));
    const auto label = trim(line.substr(comma + 1));
    double t = 0.0;
    if (!parse_number(time_text, t)) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": bad timestamp", line_no);
    }
    if (!is_label(label)) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": bad label", line_no);
    }
    events.push_back({std::string(label), t});
  }
  if (options.sort) {
    std::stable_sort(events.begin(), events.end(),
                     [](const LabeledEvent& x, const LabeledEvent& y) { return x.time < y.time; });
  }
  return validate_stream(events);
}

std::string write_stream(const EventStream& stream) {
  std::string out;
  out.reserve(stream.size() * 16);
  for (const Event& e : stream.events()) {
    out += format_time(e.time);
    out += ',';
    out += stream.alphabet().label(e.type);
    out += '\n';
  }
  return out;
}

EventStream load_stream(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return parse_stream(buf.str(), options);
}

void save_stream(const std::filesystem::path& path, const EventStream& stream) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << write_stream(stream);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

std::string write_constraint(const IntervalConstraint& c) {
  return "(" + format_time(c.low()) + "," + format_time(c.high()) + "]";
}

Episode parse_episode(std::string_view text, const Alphabet& alphabet) {
  Cursor cur(text);
  auto resolve = [&](std::size_t at, std::string_view label) {
    const auto id = alphabet.find(label);
    if (!id) {
      throw Error(ErrorCode::UnknownSymbol,
                  "unknown label '" + std::string(label) + "' at offset " + std::to_string(at), at);
    }
    return *id;
  };

  std::vector<TypeId> types;
  std::vector<IntervalConstraint> constraints;
  cur.skip_space();
  std::size_t at = cur.pos();
  types.push_back(resolve(at, cur.label()));
  for (;;) {
    cur.skip_space();
    if (cur.done()) break;
    cur.expect("-");
    constraints.push_back(cur.interval());
    cur.expect("->");
    cur.skip_space();
    at = cur.pos();
    types.push_back(resolve(at, cur.label()));
  }
  return Episode(std::move(types), std::move(constraints));
}

std::string write_episode(const Episode& episode, const Alphabet& alphabet) {
  std::string out = alphabet.label(episode.type(0));
  for (std::size_t i = 1; i < episode.size(); ++i) {
    out += " -";
    out += write_constraint(episode.constraint(i - 1));
    out += "-> ";
    out += alphabet.label(episode.type(i));
  }
  return out;
}

std::vector<IntervalConstraint> parse_constraints(std::string_view text) {
  Cursor cur(text);
  std::vector<IntervalConstraint> out;
  cur.skip_space();
  out.push_back(cur.interval());
  for (;;) {
    cur.skip_space();
    if (cur.done()) break;
    cur.expect(";");
    cur.skip_space();
    out.push_back(cur.interval());
  }
  return out;
}

std::string write_constraints(std::span<const IntervalConstraint> cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ';';
    out += write_constraint(cs[i]);
  }
  return out;
}

ChainSpec parse_chain(std::string_view text, std::size_t neurons) {
  std::vector<std::string> labels;
  labels.reserve(neurons);
  for (std::size_t n = 0; n < neurons; ++n) labels.push_back(neuron_label(n, neurons));
  const Alphabet alphabet(std::move(labels));

  Cursor cur(text);
  ChainSpec chain;
  for (;;) {
    const auto label = cur.label();
    const auto id = alphabet.find(label);
    if (!id) cur.fail("unknown neuron '" + std::string(label) + "'");
    chain.neurons.push_back(*id);
    if (!cur.accept(">")) break;
  }
  if (chain.neurons.size() < 2) cur.fail("a chain needs at least two neurons");
  const std::size_t edges = chain.neurons.size() - 1;

  if (cur.accept("@")) {
    std::vector<IntervalConstraint> delays{cur.interval()};
    while (cur.accept(";")) delays.push_back(cur.interval());
    if (delays.size() == 1) {
      chain.delays.assign(edges, delays.front());
    } else if (delays.size() == edges) {
      chain.delays = std::move(delays);
    } else {
      cur.fail("expected one delay interval or one per edge");
    }
  } else {
    chain.delays.assign(edges, default_chain_delay());
  }
  if (cur.accept("p")) {
    chain.probability = cur.number();
    if (!(chain.probability > 0.0 && chain.probability <= 1.0)) cur.fail("probability must be in (0, 1]");
  }
  if (!cur.done()) cur.fail("unexpected trailing text");
  return chain;
}

std::string write_chain(const ChainSpec& chain, std::size_t neurons) {
  std::string out;
  for (std::size_t i = 0; i < chain.neurons.size(); ++i) {
    if (i) out += '>';
    out += neuron_label(chain.neurons[i], neurons);
  }
  out += '@';
  const bool uniform = std::all_of(chain.delays.begin(), chain.delays.end(),
                                   [&](const IntervalConstraint& c) { return c == chain.delays.front(); });
  out += uniform && !chain.delays.empty() ? write_constraint(chain.delays.front()) : write_constraints(chain.delays);
  out += 'p';
  out += format_time(chain.probability);
  return out;
}

}  // namespace epm
