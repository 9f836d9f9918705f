#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>

#include "episode_miner/synth.hpp"
#include "episode_miner/text_format.hpp"
#include "support/expect_error.hpp"
#include "support/instances.hpp"

using namespace epm;

TEST(ParseStream, ReadsTimeLabelLines) {
  const auto s = parse_stream("1,A\n8.5,B\n20,C\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.alphabet().label(s[1].type), "B");
  EXPECT_DOUBLE_EQ(s[1].time, 8.5);
}

TEST(ParseStream, SkipsCommentsBlankLinesAndWhitespace) {
  const auto s = parse_stream("# header\n\n  1 , A  # first\r\n\t2,B\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.alphabet().size(), 2u);
}

TEST(ParseStream, AlphabetIsSortedLabelsPresent) {
  const auto s = parse_stream("1,N2\n2,N10\n3,N2\n");
  ASSERT_EQ(s.alphabet().size(), 2u);
  EXPECT_EQ(s.alphabet().label(0), "N10");
  EXPECT_EQ(s.alphabet().label(1), "N2");
}

TEST(ParseStream, EmptyTextIsEmptyStream) {
  EXPECT_TRUE(parse_stream("").empty());
  EXPECT_TRUE(parse_stream("# nothing\n").empty());
}

TEST(ParseStream, RejectsDisorderWithIndex) {
  expect_error([] { parse_stream("2,A\n1,B\n"); }, ErrorCode::UnsortedStream, 1);
}

TEST(ParseStream, SortOptionOrdersStably) {
  const auto s = parse_stream("2,A\n1,B\n1,C\n", {.sort = true});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.alphabet().label(s[0].type), "B");
  EXPECT_EQ(s.alphabet().label(s[1].type), "C");
  EXPECT_EQ(s.alphabet().label(s[2].type), "A");
}

TEST(ParseStream, ReportsMalformedLineNumbers) {
  expect_error([] { parse_stream("1,A\n# c\nbogus\n"); }, ErrorCode::MalformedLine, 3);
  expect_error([] { parse_stream("x,A\n"); }, ErrorCode::MalformedLine, 1);
  expect_error([] { parse_stream("1,A\n-2,B\n"); }, ErrorCode::MalformedLine, 2);
  expect_error([] { parse_stream("1,A B\n"); }, ErrorCode::MalformedLine, 1);
  expect_error([] { parse_stream("1,\n"); }, ErrorCode::MalformedLine, 1);
  expect_error([] { parse_stream("inf,A\n"); }, ErrorCode::MalformedLine, 1);
  expect_error([] { parse_stream("nan,A\n"); }, ErrorCode::MalformedLine, 1);
}

TEST(WriteStream, UsesShortestRoundTripForm) {
  const auto s = parse_stream("5.0,A\n0.1,B\n", {.sort = true});
  EXPECT_EQ(write_stream(s), "0.1,B\n5,A\n");
}

TEST(StreamRoundTrip, GeneratedStreamIsBitExact) {
  GeneratorConfig c;
  c.duration = 3;
  c.chains.push_back({{0, 1, 2}, {default_chain_delay(), default_chain_delay()}, 0.9});
  const auto s = generate(c).stream;
  const auto back = parse_stream(write_stream(s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_EQ(std::bit_cast<std::uint64_t>(back[i].time), std::bit_cast<std::uint64_t>(s[i].time));
    ASSERT_EQ(back.alphabet().label(back[i].type), s.alphabet().label(s[i].type));
  }
}

TEST(StreamRoundTrip, RandomBitPatterns) {
  inst::Rng rng(6001);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabeledEvent> ev;
    double t = 0.0;
    const std::size_t n = inst::uniform(rng, 1, 40);
    for (std::size_t i = 0; i < n; ++i) {
      t += std::ldexp(static_cast<double>(rng() >> 11), -static_cast<int>(inst::uniform(rng, 40, 70)));
      ev.push_back({std::string(1, static_cast<char>('a' + inst::uniform(rng, 0, 3))), t});
    }
    const auto s = validate_stream(ev);
    const auto text = write_stream(s);
    const auto back = parse_stream(text);
    ASSERT_EQ(back, s) << text;
    ASSERT_EQ(write_stream(back), text);
  }
}

TEST(StreamFiles, SaveThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "epm_text_format_test.csv";
  const auto s = parse_stream("1,A\n2,B\n");
  save_stream(path, s);
  EXPECT_EQ(load_stream(path), s);
  std::filesystem::remove(path);
  expect_error([&] { load_stream(path); }, ErrorCode::Io);
}

TEST(ParseEpisode, ReadsArrowSyntax) {
  const Alphabet a = inst::letters(3);
  EXPECT_EQ(parse_episode("A -(5,10]-> B -(10,15]-> C", a),
            Episode({0, 1, 2}, {IntervalConstraint(5, 10), IntervalConstraint(10, 15)}));
  EXPECT_EQ(parse_episode("A-(0.5,1e1]->B", a), Episode({0, 1}, {IntervalConstraint(0.5, 10)}));
  EXPECT_EQ(parse_episode("  C  ", a), Episode(2));
}

TEST(ParseEpisode, ReportsOffsets) {
  const Alphabet a = inst::letters(3);
  expect_error([&] { parse_episode("A -(5,10]-> Z", a); }, ErrorCode::UnknownSymbol, 12);
  expect_error([&] { parse_episode("A -(5,10] B", a); }, ErrorCode::ParseError, 9);
  expect_error([&] { parse_episode("A -(10,5]-> B", a); }, ErrorCode::ParseError, 4);
  expect_error([&] { parse_episode("A -[5,10]-> B", a); }, ErrorCode::ParseError, 3);
  expect_error([&] { parse_episode("", a); }, ErrorCode::ParseError, 0);
}

TEST(EpisodeRoundTrip, RandomEpisodes) {
  inst::Rng rng(6002);
  const Alphabet a = inst::letters(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto e = inst::random_episode(rng, 5, inst::uniform(rng, 1, 5));
    const auto text = write_episode(e, a);
    ASSERT_EQ(parse_episode(text, a), e) << text;
  }
  EXPECT_EQ(write_episode(Episode({0, 1}, {IntervalConstraint(5, 10)}), a), "A -(5,10]-> B");
}

TEST(Constraints, ParseAndWrite) {
  const auto cs = parse_constraints("(5,10]; (10,15]");
  EXPECT_EQ(cs, (std::vector<IntervalConstraint>{IntervalConstraint(5, 10), IntervalConstraint(10, 15)}));
  EXPECT_EQ(write_constraints(cs), "(5,10];(10,15]");
  EXPECT_EQ(parse_constraints(write_constraints(cs)), cs);
  expect_error([] { parse_constraints(""); }, ErrorCode::ParseError, 0);
  expect_error([] { parse_constraints("(1,2],(3,4]"); }, ErrorCode::ParseError, 5);
}

TEST(Chain, ParseDefaultsAndOverrides) {
  const auto c = parse_chain("A>B>C", 26);
  EXPECT_EQ(c.neurons, (std::vector<TypeId>{0, 1, 2}));
  EXPECT_EQ(c.delays, std::vector<IntervalConstraint>(2, default_chain_delay()));
  EXPECT_DOUBLE_EQ(c.probability, 0.9);

  const auto d = parse_chain("D>E>F@(0.01,0.02];(0.02,0.03]p0.5", 26);
  EXPECT_EQ(d.neurons, (std::vector<TypeId>{3, 4, 5}));
  EXPECT_EQ(d.delays, (std::vector<IntervalConstraint>{IntervalConstraint(0.01, 0.02), IntervalConstraint(0.02, 0.03)}));
  EXPECT_DOUBLE_EQ(d.probability, 0.5);

  const auto text = write_chain(d, 26);
  const auto again = parse_chain(text, 26);
  EXPECT_EQ(again.neurons, d.neurons);
  EXPECT_EQ(again.delays, d.delays);
  EXPECT_EQ(again.probability, d.probability);
  EXPECT_EQ(write_chain(c, 26), "A>B>C@(0.001,0.005]p0.9");
  EXPECT_EQ(parse_chain("N01>N99", 100).neurons, (std::vector<TypeId>{1, 99}));
}

TEST(Chain, RejectsBadSpecs) {
  expect_error([] { parse_chain("A", 26); }, ErrorCode::ParseError);
  expect_error([] { parse_chain("A>Z", 20); }, ErrorCode::ParseError);
  expect_error([] { parse_chain("A>B>C@(0,1];(1,2];(2,3]", 26); }, ErrorCode::ParseError);
  expect_error([] { parse_chain("A>Bp1.5", 26); }, ErrorCode::ParseError);
  expect_error([] { parse_chain("A>B!", 26); }, ErrorCode::ParseError);
}
