#include <gtest/gtest.h>

#include <set>

#include "episode_miner/candidate_gen.hpp"
#include "episode_miner/serial_counter.hpp"
#include "support/expect_error.hpp"
#include "support/instances.hpp"

using namespace epm;

namespace {

const IntervalConstraint c5_10(5, 10);
const IntervalConstraint c10_15(10, 15);

std::vector<Episode> all_episodes(std::size_t symbols, std::span<const IntervalConstraint> cs, std::size_t size) {
  std::vector<Episode> out;
  std::vector<TypeId> types(size, 0);
  std::vector<std::size_t> cons(size - 1, 0);
  for (;;) {
    std::vector<IntervalConstraint> chosen;
    for (std::size_t c : cons) chosen.push_back(cs[c]);
    out.emplace_back(types, chosen);
    std::size_t i = 0;
    for (; i < size; ++i) {
      if (++types[i] < symbols) break;
      types[i] = 0;
    }
    if (i < size) continue;
    std::size_t j = 0;
    for (; j + 1 < size; ++j) {
      if (++cons[j] < cs.size()) break;
      cons[j] = 0;
    }
    if (j + 1 >= size) break;
  }
  return out;
}

}  // namespace

TEST(SeedLevel1, OneEpisodePerSymbol) {
  const auto seeds = seed_level1(inst::letters(3));
  EXPECT_EQ(seeds, (std::vector<Episode>{Episode(0), Episode(1), Episode(2)}));
  EXPECT_TRUE(seed_level1(Alphabet()).empty());
  EXPECT_EQ(seed_level1(inst::letters(26)).size(), 26u);
}

TEST(Grow, SingleNodesCrossWithEveryConstraint) {
  const std::vector<Episode> f{Episode(0), Episode(1)};
  const std::vector<IntervalConstraint> cs{c5_10};
  EXPECT_EQ(grow(f, cs), (std::vector<Episode>{Episode({0, 0}, {c5_10}), Episode({0, 1}, {c5_10}),
                                               Episode({1, 0}, {c5_10}), Episode({1, 1}, {c5_10})}));
}

TEST(Grow, SuffixPrefixJoin) {
  const std::vector<IntervalConstraint> cs{c5_10, c10_15};
  const std::vector<Episode> f{Episode({0, 1}, {c5_10}), Episode({1, 2}, {c5_10})};
  EXPECT_EQ(grow(f, cs), (std::vector<Episode>{Episode({0, 1, 2}, {c5_10, c5_10})}));
  const std::vector<Episode> g{Episode({0, 1}, {c5_10}), Episode({1, 2}, {c10_15})};
  EXPECT_EQ(grow(g, cs), (std::vector<Episode>{Episode({0, 1, 2}, {c5_10, c10_15})}));
}

TEST(Grow, JoinKeyIncludesConstraints) {
  const std::vector<IntervalConstraint> cs{c5_10, c10_15};
  const std::vector<Episode> f{Episode({0, 1, 2}, {c5_10, c5_10}), Episode({1, 2, 0}, {c10_15, c5_10})};
  EXPECT_TRUE(grow(f, cs).empty());
}

TEST(Grow, RejectsMixedSizes) {
  const std::vector<Episode> f{Episode(0), Episode({0, 1}, {c5_10})};
  expect_error([&] { grow(f, std::vector<IntervalConstraint>{c5_10}); }, ErrorCode::InvalidArgument);
  EXPECT_TRUE(grow({}, std::vector<IntervalConstraint>{c5_10}).empty());
}

TEST(GrowProperty, OutputIsSortedUniqueAndBounded) {
  inst::Rng rng(5001);
  const std::vector<IntervalConstraint> cs{c5_10, c10_15};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = inst::uniform(rng, 1, 3);
    auto universe = all_episodes(3, cs, n);
    std::vector<Episode> f;
    for (auto& e : universe) {
      if (inst::uniform(rng, 0, 2) == 0) f.push_back(e);
    }
    const auto out = grow(f, cs);
    EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
    EXPECT_EQ(std::set<Episode>(out.begin(), out.end()).size(), out.size());
    EXPECT_LE(out.size(), n == 1 ? f.size() * f.size() * cs.size() : f.size() * f.size());
    for (const auto& e : out) EXPECT_EQ(e.size(), n + 1);
  }
}

// Every episode of size N+1 whose count reaches the threshold is generated
// from the frequent episodes of size N.
TEST(GrowProperty, NeverMissesFrequentEpisode) {
  inst::Rng rng(5002);
  const std::vector<IntervalConstraint> cs{IntervalConstraint(0, 3), IntervalConstraint(2, 6)};
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = inst::random_stream(rng, 3, 40, 3);
    const std::uint64_t theta = inst::uniform(rng, 1, 4);
    for (std::size_t n = 1; n <= 2; ++n) {
      std::vector<Episode> frequent;
      for (const auto& e : all_episodes(3, cs, n)) {
        if (count_serial(e, s).count >= theta) frequent.push_back(e);
      }
      const auto candidates = grow(frequent, cs);
      const std::set<Episode> generated(candidates.begin(), candidates.end());
      for (const auto& e : all_episodes(3, cs, n + 1)) {
        if (count_serial(e, s).count >= theta) {
          ASSERT_TRUE(generated.contains(e)) << "trial " << trial;
        }
      }
    }
  }
}
