#include <gtest/gtest.h>

#include "episode_miner/relaxed_counter.hpp"
#include "episode_miner/segmented_counter.hpp"
#include "episode_miner/serial_counter.hpp"
#include "support/expect_error.hpp"
#include "support/instances.hpp"

using namespace epm;

namespace {

const Alphabet abc = inst::letters(3);
const Episode abc_5_10_15({0, 1, 2}, {IntervalConstraint(5, 10), IntervalConstraint(10, 15)});

EventStream worked_stream() {
  return inst::make_stream(abc, {{'A', 1}, {'B', 8}, {'C', 20}, {'A', 21}, {'B', 28}, {'C', 40}});
}

SegmentSummary summary(Endpoint a, std::uint64_t count, Endpoint b) { return {a, count, b, {}}; }

std::vector<SegmentSummary> fold(const std::vector<std::vector<SegmentSummary>>& runs) {
  std::vector<SegmentSummary> acc = runs.front();
  for (std::size_t i = 1; i < runs.size(); ++i) acc = concatenate(acc, runs[i]);
  return acc;
}

}  // namespace

TEST(SegmentPlan, EqualSplits) {
  const auto two = plan_segments(0, 44, 2);
  EXPECT_EQ(std::vector<Time>(two.boundaries().begin(), two.boundaries().end()), (std::vector<Time>{0, 22, 44}));
  const auto four = plan_segments(0, 100, 4);
  EXPECT_EQ(std::vector<Time>(four.boundaries().begin(), four.boundaries().end()),
            (std::vector<Time>{0, 25, 50, 75, 100}));
  const auto one = plan_segments(3, 9, 1);
  EXPECT_EQ(one.segments(), 1u);
  EXPECT_EQ(one.lower(0), 3);
  EXPECT_EQ(one.upper(0), 9);
}

TEST(SegmentPlan, StreamPlanCoversEveryEvent) {
  inst::Rng rng(9000);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = inst::random_stream(rng, 3, inst::uniform(rng, 1, 40));
    const std::size_t p = std::size_t{1} << inst::uniform(rng, 0, 4);
    const auto plan = plan_segments(s, p);
    ASSERT_EQ(plan.segments(), p);
    EXPECT_LT(plan.lower(0), s.first_time());
    EXPECT_GE(plan.upper(p - 1), s.last_time());
  }
}

TEST(SegmentPlan, RejectsInvalidPlans) {
  expect_error([] { plan_segments(0, 10, 3); }, ErrorCode::InvalidArgument);
  expect_error([] { plan_segments(0, 10, 0); }, ErrorCode::InvalidArgument);
  expect_error([] { SegmentPlan({0, 5, 5}); }, ErrorCode::InvalidArgument);
  expect_error([] { SegmentPlan({0, 5, 7, 9}); }, ErrorCode::InvalidArgument);
  expect_error([] { plan_segments(EventStream(abc, {}), 2); }, ErrorCode::EmptyStream);
}

TEST(MapSegment, FirstSegmentOfWorkedStream) {
  const auto s = worked_stream();
  const auto plan = plan_segments(0, 44, 2);
  const auto out = map_segment(abc_5_10_15, s, plan, 0, 0);
  EXPECT_EQ(out.a, Endpoint::completion(2, 20));
  EXPECT_EQ(out.count, 1u);
  EXPECT_EQ(out.b, Endpoint::completion(5, 40));
}

TEST(MapSegment, LastOffsetMachineSkipsCompletionBeforeBoundary) {
  const auto s = worked_stream();
  const auto plan = plan_segments(0, 44, 2);
  const auto out = map_segment(abc_5_10_15, s, plan, 1, 2);
  EXPECT_EQ(out.a, Endpoint::completion(5, 40));
  EXPECT_EQ(out.count, 1u);
  EXPECT_TRUE(out.b.is_sentinel());
  EXPECT_EQ(out.b.time, 44);
}

TEST(MapSegment, SegmentWithoutEpisodeTypesYieldsSentinels) {
  const Alphabet ad = inst::letters(4);
  const auto s = inst::make_stream(ad, {{'A', 1}, {'D', 30}, {'D', 31}});
  const auto plan = plan_segments(0, 44, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto out = map_segment(abc_5_10_15, s, plan, 1, k);
    EXPECT_EQ(out, summary(Endpoint::boundary(22), 0, Endpoint::boundary(44)));
  }
}

TEST(MapSegment, RejectsPlanNotCoveringStream) {
  const auto s = worked_stream();
  expect_error([&] { map_segment(abc_5_10_15, s, plan_segments(1, 44, 2), 0, 0); }, ErrorCode::InvalidArgument);
  expect_error([&] { map_segment(abc_5_10_15, s, plan_segments(0, 30, 2), 0, 0); }, ErrorCode::InvalidArgument);
  expect_error([&] { map_segment(abc_5_10_15, s, plan_segments(0, 44, 2), 0, 3); }, ErrorCode::InvalidArgument);
}

TEST(Concatenate, JoinsMatchingEndpoints) {
  const std::vector left{summary(Endpoint::completion(2, 20), 1, Endpoint::completion(5, 40))};
  const std::vector right{summary(Endpoint::completion(5, 40), 1, Endpoint::boundary(44))};
  const auto out = concatenate(left, right);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], summary(Endpoint::completion(2, 20), 2, Endpoint::boundary(44)));
}

TEST(Concatenate, EmptyRunsCompose) {
  const std::vector left{summary(Endpoint::boundary(0), 0, Endpoint::boundary(10))};
  const std::vector right{summary(Endpoint::boundary(10), 0, Endpoint::boundary(20))};
  const auto out = concatenate(left, right);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], summary(Endpoint::boundary(0), 0, Endpoint::boundary(20)));
}

TEST(Concatenate, SameTimeDifferentEventDoesNotJoin) {
  const std::vector left{summary(Endpoint::boundary(0), 0, Endpoint::completion(3, 12))};
  const std::vector right{summary(Endpoint::completion(4, 12), 1, Endpoint::boundary(20))};
  expect_error([&] { concatenate(left, right); }, ErrorCode::NoJoin);
}

TEST(CountSegmented, WorkedStream) {
  const auto s = worked_stream();
  EXPECT_EQ(count_serial(abc_5_10_15, s).count, 2u);
  for (std::size_t p : {1u, 2u, 4u, 8u}) EXPECT_EQ(count_segmented(abc_5_10_15, s, p).count, 2u) << p;
  const auto plan = plan_segments(0, 44, 2);
  std::vector<std::vector<SegmentSummary>> runs{map_segment_all(abc_5_10_15, s, plan, 0),
                                                map_segment_all(abc_5_10_15, s, plan, 1)};
  const auto root = fold(runs);
  ASSERT_EQ(root.size(), 1u);
  EXPECT_EQ(root[0].count, 2u);
}

// With a positive lower bound, the serial machine's state at the boundary can
// continue from a completion that none of the fixed offset machines reach.
TEST(CountSegmented, AnchoredMachineCoversLowerBoundGap) {
  const Alphabet ab = inst::letters(2);
  const Episode e({0, 1}, {IntervalConstraint(5, 10)});
  const auto s = inst::make_stream(ab, {{'A', 88}, {'A', 93}, {'B', 95}, {'A', 97}, {'B', 100}, {'B', 105},
                                        {'A', 110}, {'B', 117}});
  const SegmentPlan plan({80, 100, 120});
  EXPECT_EQ(count_serial(e, s).count, 3u);
  const auto first = map_segment(e, s, plan, 0, 0);
  EXPECT_EQ(first.b, Endpoint::completion(5, 105));
  bool offset_reaches = false;
  for (std::size_t k = 0; k < e.size(); ++k) offset_reaches |= map_segment(e, s, plan, 1, k).a == first.b;
  EXPECT_FALSE(offset_reaches);
  const auto detailed = count_segmented_detailed(e, s, plan);
  EXPECT_EQ(detailed.result.count, 3u);
  EXPECT_GT(detailed.stats.anchored_machines, 0u);
}

TEST(CountSegmented, EmptyStreamCountsZero) {
  EXPECT_EQ(count_segmented(abc_5_10_15, EventStream(abc, {}), 4).count, 0u);
  expect_error([&] { count_segmented(abc_5_10_15, EventStream(abc, {}), 3); }, ErrorCode::InvalidArgument);
}

TEST(CountSegmented, WorkAccounting) {
  inst::Rng rng(9001);
  const auto s = inst::random_stream(rng, 3, 200);
  const auto e = inst::random_episode(rng, 3, 3);
  for (std::size_t q = 0; q <= 4; ++q) {
    const std::size_t p = std::size_t{1} << q;
    const auto d = count_segmented_detailed(e, s, p);
    EXPECT_EQ(d.stats.segments, p);
    EXPECT_EQ(d.stats.offset_machines, 1 + (p - 1) * e.size());
    EXPECT_EQ(d.stats.concatenations, p - 1);
    EXPECT_EQ(d.stats.tree_levels, q);
  }
}

TEST(SegmentedProperty, SummariesRespectReachBounds) {
  inst::Rng rng(9002);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t symbols = inst::uniform(rng, 1, 4);
    const auto s = inst::random_stream(rng, symbols, inst::uniform(rng, 1, 80));
    const auto e = inst::random_episode(rng, symbols, inst::uniform(rng, 1, 4));
    const auto plan = plan_segments(s, 8);
    const double span = e.max_span();
    for (std::size_t p = 0; p < plan.segments(); ++p) {
      for (const auto& t : map_segment_all(e, s, plan, p)) {
        if (!t.a.is_sentinel()) {
          ASSERT_GT(t.a.time, plan.lower(p));
          ASSERT_LE(t.a.time, plan.lower(p) + span + 1e-6);
        }
        if (!t.b.is_sentinel()) {
          ASSERT_GT(t.b.time, plan.upper(p));
          ASSERT_LE(t.b.time, plan.upper(p) + span + 1e-6);
        }
      }
    }
  }
}

TEST(SegmentedProperty, MatchesSerialOnRandomStreams) {
  inst::Rng rng(9003);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t symbols = inst::uniform(rng, 1, 5);
    const auto s = inst::random_stream(rng, symbols, inst::uniform(rng, 0, 200));
    const auto e = inst::random_episode(rng, symbols, inst::uniform(rng, 1, 4));
    const auto expected = count_serial(e, s).count;
    for (std::size_t p : {1u, 2u, 4u, 8u}) {
      ASSERT_EQ(count_segmented(e, s, p, 2).count, expected) << "trial " << trial << " P=" << p;
    }
  }
}

TEST(SegmentedProperty, MatchesSerialOnStraddlingStreams) {
  inst::Rng rng(9004);
  std::size_t nonzero = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t symbols = inst::uniform(rng, 1, 4);
    const auto e = inst::random_episode(rng, symbols, inst::uniform(rng, 2, 4), 8);
    const std::size_t p = std::size_t{1} << inst::uniform(rng, 1, 3);
    const auto [s, plan] = inst::straddling_stream(rng, e, symbols, p, static_cast<double>(inst::uniform(rng, 3, 30)));
    const auto expected = count_serial(e, s).count;
    ASSERT_EQ(count_segmented_detailed(e, s, plan).result.count, expected) << "trial " << trial;
    nonzero += expected > 0;
  }
  EXPECT_GT(nonzero, 400u);
}

TEST(SegmentedProperty, TreeOrderDoesNotMatter) {
  inst::Rng rng(9005);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t symbols = inst::uniform(rng, 1, 3);
    const auto s = inst::random_stream(rng, symbols, inst::uniform(rng, 1, 100));
    const auto e = inst::random_episode(rng, symbols, inst::uniform(rng, 1, 4));
    const auto plan = plan_segments(s, 4);
    std::vector<std::vector<SegmentSummary>> runs;
    for (std::size_t p = 0; p < 4; ++p) runs.push_back(map_segment_all(e, s, plan, p));
    const auto tree = concatenate(concatenate(runs[0], runs[1]), concatenate(runs[2], runs[3]));
    ASSERT_EQ(tree, fold(runs)) << "trial " << trial;
    ASSERT_EQ(tree.size(), 1u);
    ASSERT_EQ(tree[0].count, count_serial(e, s).count);
  }
}

TEST(SegmentedProperty, IndependentOfWorkerCount) {
  inst::Rng rng(9006);
  const auto s = inst::random_stream(rng, 3, 3000);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = inst::random_episode(rng, 3, inst::uniform(rng, 1, 4));
    ASSERT_EQ(count_segmented(e, s, 16, 1), count_segmented(e, s, 16, 4));
  }
}

TEST(SegmentedProperty, RelaxedMachineMatchesRelaxedCounter) {
  inst::Rng rng(9007);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t symbols = inst::uniform(rng, 1, 4);
    const auto s = inst::random_stream(rng, symbols, inst::uniform(rng, 0, 150));
    const auto e = inst::random_relaxed_episode(rng, symbols, inst::uniform(rng, 1, 4));
    const auto expected = count_relaxed(e, s).count;
    for (std::size_t p : {2u, 8u}) ASSERT_EQ(count_segmented_relaxed(e, s, p).count, expected) << trial;
  }
  expect_error([] { count_segmented_relaxed(abc_5_10_15, worked_stream(), 2); }, ErrorCode::RelaxationRequired);
}
