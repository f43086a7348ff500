#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "sherd/errors.hpp"
#include "sherd/fixtures.hpp"
#include "sherd/match.hpp"

using namespace sherd;

namespace {

ThicknessProfile tp(std::vector<double> v, std::string id = "p") {
  ThicknessProfile p;
  p.samples = std::move(v);
  p.sherd_id = std::move(id);
  return p;
}

ThicknessProfile random_profile(std::mt19937_64& gen, std::size_t len, const std::string& id) {
  std::uniform_real_distribution<double> d(4.0, 8.0);
  ThicknessProfile p;
  p.sherd_id = id;
  for (std::size_t i = 0; i < len; ++i) p.samples.push_back(d(gen));
  return p;
}

void expect_same(const MatchResult& m, const oracle::Alignment& o) {
  EXPECT_EQ(m.offset, o.offset);
  EXPECT_EQ(m.overlap, o.overlap);
  EXPECT_EQ(m.sad, o.sad);
  EXPECT_EQ(m.score, o.score);
  EXPECT_EQ(m.reversed, o.reversed);
}

} // namespace

TEST(SadAtOffset, HandArithmetic) {
  const auto m = sad_at_offset(tp({5.0, 5.2, 5.4}), tp({5.1, 5.2, 5.3}), 0);
  EXPECT_NEAR(m.sad, 0.2, 1e-12);
  EXPECT_EQ(m.overlap, 3);
  EXPECT_NEAR(m.score, 0.0667, 5e-5);
  EXPECT_NEAR(m.score, m.sad / 3.0, 1e-12);
}

TEST(SadAtOffset, SelfIdentity) {
  for (const auto& p : reference_profiles()) {
    const auto m = sad_at_offset(p, p, 0);
    EXPECT_EQ(m.sad, 0.0);
    EXPECT_EQ(m.score, 0.0);
    EXPECT_EQ(m.overlap, static_cast<long>(p.size()));
  }
}

TEST(SadAtOffset, DisjointRangesHaveNoOverlap) {
  const auto a = tp(std::vector<double>(10, 5.0)), b = tp(std::vector<double>(4, 5.0));
  EXPECT_THROW(sad_at_offset(a, b, 12), NoOverlap);
  EXPECT_THROW(sad_at_offset(a, b, 10), NoOverlap);
  EXPECT_THROW(sad_at_offset(a, b, -4), NoOverlap);
  EXPECT_EQ(sad_at_offset(a, b, 9).overlap, 1);
  EXPECT_EQ(sad_at_offset(a, b, -3).overlap, 1);
}

TEST(SadAtOffset, StepMismatch) {
  auto a = tp({5.0, 5.0}), b = tp({5.0, 5.0});
  b.step = 0.5;
  EXPECT_THROW(sad_at_offset(a, b, 0), StepMismatch);
  EXPECT_THROW(best_matches(a, b, {.min_overlap = 1}), StepMismatch);
}

TEST(OverlapLength, Ranges) {
  EXPECT_EQ(overlap_length(10, 4, 0), 4);
  EXPECT_EQ(overlap_length(10, 4, 8), 2);
  EXPECT_EQ(overlap_length(10, 4, -2), 2);
  EXPECT_EQ(overlap_length(10, 4, 12), 0);
  EXPECT_EQ(overlap_length(4, 10, -3), 4);
}

TEST(BestMatches, SelfMatchC15) {
  const auto& c15 = reference_profiles()[4];
  ASSERT_EQ(c15.sherd_id, "C15");
  const auto r = best_matches(c15, c15);
  EXPECT_EQ(r.front().offset, 0);
  EXPECT_EQ(r.front().score, 0.0);
  EXPECT_EQ(r.front().overlap, 15);
}

TEST(BestMatches, ConstantProfilesTieBreakToSmallestAbsOffset) {
  const auto r = best_matches(tp(std::vector<double>(10, 5.0)), tp(std::vector<double>(4, 5.0)),
                              {.min_overlap = 4});
  EXPECT_EQ(r.front().offset, 0);
  EXPECT_EQ(r.front().overlap, 4);
  EXPECT_EQ(r.front().score, 0.0);
}

TEST(BestMatches, A4VersusA5MatchesExhaustiveScan) {
  const auto& fx = reference_profiles();
  const auto r = best_matches(fx[0], fx[1]);
  const auto o = oracle::scan(fx[0].samples, fx[1].samples, 8);
  ASSERT_EQ(r.size(), 5u);
  for (std::size_t i = 0; i < r.size(); ++i) expect_same(r[i], o[i]);
}

TEST(BestMatches, TooShortForMinOverlap) {
  const auto a = tp(std::vector<double>(20, 5.0)), b = tp(std::vector<double>(7, 5.0));
  EXPECT_THROW(best_matches(a, b), NoFeasibleOffset);
  EXPECT_THROW(best_matches(b, a), NoFeasibleOffset);
  EXPECT_NO_THROW(best_matches(a, b, {.min_overlap = 7}));
}

TEST(BestMatches, OffsetRangeIsExactlyTheFeasibleOne) {
  const auto a = tp({1, 2, 3, 4, 5, 6}), b = tp({9, 9, 9});
  const auto r = best_matches(a, b, {.min_overlap = 2, .top_k = 100});
  ASSERT_EQ(r.size(), 6u); // offsets -1 .. 4
  long lo = 100, hi = -100;
  for (const auto& m : r) {
    lo = std::min(lo, m.offset);
    hi = std::max(hi, m.offset);
    EXPECT_GE(m.overlap, 2);
  }
  EXPECT_EQ(lo, -1);
  EXPECT_EQ(hi, 4);
}

TEST(BestMatches, InvalidConfig) {
  const auto a = tp(std::vector<double>(20, 5.0));
  EXPECT_THROW(best_matches(a, a, {.min_overlap = 0}), ValidationError);
  EXPECT_THROW(best_matches(a, a, {.top_k = 0}), ValidationError);
  EXPECT_THROW(best_matches(a, a, {.accept_threshold = -1.0}), ValidationError);
}

TEST(IsAcceptable, Threshold) {
  EXPECT_TRUE(is_acceptable({0, 15, 0.0, 0.0, false}));
  EXPECT_FALSE(is_acceptable({0, 15, 4.5, 0.30, false}));
  EXPECT_TRUE(is_acceptable({0, 15, 2.25, 0.15, false}));
  EXPECT_FALSE(is_acceptable({0, 7, 0.0, 0.0, false}));
}

TEST(BestMatchesProperty, AgreesWithOracleOnRandomPairs) {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<std::size_t> len(8, 64);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_profile(gen, len(gen), "a"), b = random_profile(gen, len(gen), "b");
    const bool rev = trial % 3 == 0;
    const MatchConfig cfg{.min_overlap = 8, .allow_reversal = rev, .top_k = 4};
    const auto r = best_matches(a, b, cfg);
    const auto o = oracle::scan(a.samples, b.samples, 8, rev);
    ASSERT_EQ(r.size(), std::min<std::size_t>(4, o.size()));
    for (std::size_t i = 0; i < r.size(); ++i) expect_same(r[i], o[i]);
  }
}

TEST(BestMatchesProperty, OracleAgreementWithQuantizedValues) {
  // Values on a 0.1 mm grid produce many exact score ties.
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> v(50, 53), len(8, 30);
  for (int trial = 0; trial < 300; ++trial) {
    ThicknessProfile a, b;
    for (int i = len(gen); i > 0; --i) a.samples.push_back(v(gen) / 10.0);
    for (int i = len(gen); i > 0; --i) b.samples.push_back(v(gen) / 10.0);
    const auto r = best_matches(a, b, {.min_overlap = 4, .allow_reversal = trial % 2 == 1, .top_k = 6});
    const auto o = oracle::scan(a.samples, b.samples, 4, trial % 2 == 1);
    for (std::size_t i = 0; i < r.size(); ++i) expect_same(r[i], o[i]);
  }
}

TEST(BestMatchesProperty, Symmetry) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> len(8, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_profile(gen, len(gen), "a"), b = random_profile(gen, len(gen), "b");
    const auto ab = best_matches(a, b).front(), ba = best_matches(b, a).front();
    EXPECT_EQ(ab.offset, -ba.offset);
    EXPECT_EQ(ab.score, ba.score);
    EXPECT_EQ(ab.overlap, ba.overlap);
  }
}

TEST(BestMatchesProperty, ShiftInvarianceWithSentinels) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::size_t> len(8, 30), pad(1, 20);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    // b is a noisy window of a, so the best alignment lies inside a and the
    // sentinels can neither improve nor spoil it.
    const auto a = random_profile(gen, 60, "a");
    const std::size_t start = len(gen) - 8, n = len(gen);
    ThicknessProfile b;
    for (std::size_t i = 0; i < n; ++i) b.samples.push_back(a.samples[start + i] + noise(gen));
    const std::size_t j = pad(gen);
    ThicknessProfile shifted = a;
    shifted.samples.insert(shifted.samples.begin(), j, 100.0 + trial);
    const auto base = best_matches(a, b).front(), moved = best_matches(shifted, b).front();
    EXPECT_EQ(moved.offset, base.offset + static_cast<long>(j));
    EXPECT_EQ(moved.score, base.score);
  }
}

TEST(BestMatchesProperty, ScoreBounds) {
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<std::size_t> len(8, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_profile(gen, len(gen), "a"), b = random_profile(gen, len(gen), "b");
    for (const auto& m : best_matches(a, b, {.top_k = 1000})) {
      double worst = 0.0;
      for (long i = std::max(0L, m.offset); i < std::min<long>(a.size(), m.offset + b.size()); ++i)
        worst = std::max(worst, std::abs(a.samples[i] - b.samples[i - m.offset]));
      EXPECT_GE(m.score, 0.0);
      EXPECT_LE(m.score, worst + 1e-12);
      EXPECT_GT(m.score, 0.0); // continuous random values never coincide
      EXPECT_NEAR(m.score, m.sad / m.overlap, 1e-12);
    }
  }
  // score 0 iff the overlap is identical
  const auto a = tp({5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
  const auto b = tp({7, 8, 9, 10, 11, 12, 13, 14});
  EXPECT_EQ(best_matches(a, b).front().score, 0.0);
  EXPECT_EQ(best_matches(a, b).front().offset, 2);
}

TEST(BestMatchesProperty, ReversalConsistency) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<std::size_t> len(8, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_profile(gen, len(gen), "a"), b = random_profile(gen, len(gen), "b");
    const auto all = best_matches(a, b, {.allow_reversal = true, .top_k = 10000});
    const auto plain_rev = best_matches(a, reversed(b), {.top_k = 10000});
    std::vector<MatchResult> rev_entries;
    for (const auto& m : all)
      if (m.reversed) rev_entries.push_back(m);
    ASSERT_EQ(rev_entries.size(), plain_rev.size());
    for (std::size_t i = 0; i < rev_entries.size(); ++i) {
      MatchResult expect = plain_rev[i];
      expect.reversed = true;
      EXPECT_EQ(rev_entries[i], expect);
    }
  }
}

TEST(BestMatchesProperty, ReversedCopyIsFoundExactly) {
  std::mt19937_64 gen(19);
  const auto a = random_profile(gen, 50, "a");
  ThicknessProfile b;
  b.samples.assign(a.samples.begin() + 10, a.samples.begin() + 30);
  b = reversed(b);
  const auto m = best_matches(a, b, {.allow_reversal = true}).front();
  EXPECT_TRUE(m.reversed);
  EXPECT_EQ(m.offset, 10);
  EXPECT_EQ(m.score, 0.0);
  EXPECT_EQ(best_matches(a, b).front().reversed, false);
}

TEST(BestMatchesProperty, ResultsAreRankedAndTruncated) {
  std::mt19937_64 gen(23);
  const auto a = random_profile(gen, 40, "a"), b = random_profile(gen, 20, "b");
  const auto r = best_matches(a, b, {.top_k = 7});
  ASSERT_EQ(r.size(), 7u);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_TRUE(ranks_before(r[i - 1], r[i]));
}
