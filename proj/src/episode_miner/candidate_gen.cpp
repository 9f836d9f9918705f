#include "episode_miner/candidate_gen.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace epm {

std::vector<Episode> seed_level1(const Alphabet& alphabet) {
  std::vector<Episode> out;
  out.reserve(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) out.emplace_back(static_cast<TypeId>(i));
  return out;
}

namespace {

using JoinKey = std::pair<std::vector<TypeId>, std::vector<IntervalConstraint>>;

JoinKey prefix_key(const Episode& e) {
  const auto t = e.types();
  const auto c = e.constraints();
  return {{t.begin(), t.end() - 1}, {c.begin(), c.end() - 1}};
}

JoinKey suffix_key(const Episode& e) {
  const auto t = e.types();
  const auto c = e.constraints();
  return {{t.begin() + 1, t.end()}, {c.begin() + 1, c.end()}};
}

}  // namespace

std::vector<Episode> grow(std::span<const Episode> frequent, std::span<const IntervalConstraint> constraints) {
  std::vector<Episode> out;
  if (frequent.empty()) return out;
  const std::size_t n = frequent.front().size();
  if (std::any_of(frequent.begin(), frequent.end(), [n](const Episode& e) { return e.size() != n; })) {
    throw Error(ErrorCode::InvalidArgument, "grow needs episodes of one size");
  }

  if (n == 1) {
    for (const auto& first : frequent) {
      for (const auto& second : frequent) {
        for (const auto& c : constraints) out.emplace_back(std::vector{first.type(0), second.type(0)}, std::vector{c});
      }
    }
  } else {
    std::map<JoinKey, std::vector<const Episode*>> by_prefix;
    for (const auto& beta : frequent) by_prefix[prefix_key(beta)].push_back(&beta);
    for (const auto& alpha : frequent) {
      auto it = by_prefix.find(suffix_key(alpha));
      if (it == by_prefix.end()) continue;
      for (const Episode* beta : it->second) {
        std::vector<TypeId> types(alpha.types().begin(), alpha.types().end());
        std::vector<IntervalConstraint> cons(alpha.constraints().begin(), alpha.constraints().end());
        types.push_back(beta->type(n - 1));
        cons.push_back(beta->constraint(n - 2));
        out.emplace_back(std::move(types), std::move(cons));
      }
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace epm
