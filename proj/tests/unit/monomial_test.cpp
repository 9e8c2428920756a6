#include <gtest/gtest.h>

#include <compare>
#include <random>

#include "../oracles.hpp"
#include "germ/monomial.hpp"
#include "helpers.hpp"

using namespace germ;

TEST(Compare, Examples) {
  EXPECT_EQ(compare({1, 0}, {0, 1}), std::strong_ordering::less);
  EXPECT_EQ(compare({1, 0}, {0, 2}), std::strong_ordering::less);
  // |a| and a_3 tie, then a_2: 1 < 2, so (2,1,0) is the smaller one.
  EXPECT_EQ(compare({2, 1, 0}, {1, 2, 0}), std::strong_ordering::less);
  EXPECT_EQ(compare({1, 2, 0}, {2, 1, 0}), std::strong_ordering::greater);
  EXPECT_EQ(compare({3, 1}, {3, 1}), std::strong_ordering::equal);
}

TEST(Compare, DimensionMismatch) { EXPECT_THROW(compare({1, 0}, {1, 0, 0}), DimensionMismatch); }

TEST(Compare, ExhaustiveAgainstReversedTupleOracle) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = monomials_up_to(n, 4);
    for (const auto& a : all) {
      for (const auto& b : all) {
        const bool lib = compare(a, b) == std::strong_ordering::less;
        ASSERT_EQ(lib, oracle::less(oracle::exponent(a), oracle::exponent(b))) << a.to_string() << b.to_string();
        ASSERT_EQ(MonomialLess{}(a, b), lib);
      }
    }
  }
}

TEST(Compare, TotalOrderAndMultiplicative) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<unsigned> e(0, 4);
  for (int t = 0; t < 2000; ++t) {
    MultiIndex a{e(rng), e(rng), e(rng)}, b{e(rng), e(rng), e(rng)}, c{e(rng), e(rng), e(rng)};
    const auto ab = compare(a, b);
    EXPECT_EQ(compare(b, a), 0 <=> ab);
    EXPECT_EQ(compare(a + c, b + c), ab);
    if (ab == std::strong_ordering::less && compare(b, c) == std::strong_ordering::less) {
      EXPECT_EQ(compare(a, c), std::strong_ordering::less);
    }
    EXPECT_NE(compare(MultiIndex(3), a + MultiIndex::unit(3, t % 3)), std::strong_ordering::greater);
  }
}

TEST(MultiIndex, TextRoundTrip) {
  const MultiIndex a{1, 0, 2};
  EXPECT_EQ(a.to_string(), "(1,0,2)");
  EXPECT_EQ(MultiIndex::parse("(1,0,2)"), a);
  EXPECT_EQ(a.degree(), 3u);
  EXPECT_THROW(MultiIndex({1, 0}) - MultiIndex({0, 1}), std::invalid_argument);
}

TEST(Staircase, Contains) {
  const auto s = Staircase::from_points(2, std::vector<MultiIndex>{{1, 0}});
  EXPECT_TRUE(staircase_contains(s, {3, 2}));
  EXPECT_FALSE(staircase_contains(s, {0, 5}));
  const auto t = Staircase::from_points(2, std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 3}});
  EXPECT_TRUE(t.contains({1, 2}));
  EXPECT_EQ(t.covering_vertex({1, 2}), std::optional<std::size_t>(1));
}

TEST(Staircase, VertexExtraction) {
  const auto v = vertex_extraction(2, std::vector<MultiIndex>{{2, 0}, {1, 1}, {3, 0}});
  EXPECT_EQ(v.to_string(), "[(2,0),(1,1)]");
  EXPECT_TRUE(vertex_extraction(2, std::vector<MultiIndex>{}).empty());
  EXPECT_EQ(vertex_extraction(2, std::vector<MultiIndex>{}).to_string(), "[]");
}

TEST(Staircase, RandomPointsAgainstDominanceOracle) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<unsigned> e(0, 6);
  for (int t = 0; t < 50; ++t) {
    std::vector<MultiIndex> pts;
    std::vector<oracle::Exponent> raw;
    for (int i = 0; i < 50; ++i) {
      oracle::Exponent x{e(rng), e(rng), e(rng)};
      raw.push_back(x);
      pts.push_back(oracle::multi_index(x));
    }
    const auto s = vertex_extraction(3, pts);
    for (const auto& p : pts) EXPECT_TRUE(s.contains(p));
    for (const auto& a : s.vertices()) {
      for (const auto& b : s.vertices()) {
        if (!(a == b)) EXPECT_FALSE(a.divides(b));
      }
    }
    std::vector<oracle::Exponent> got;
    for (const auto& a : s.vertices()) got.push_back(oracle::exponent(a));
    EXPECT_EQ(got, oracle::minimal_points(raw));
  }
}

TEST(Staircase, Equality) {
  const auto a = Staircase::from_points(2, std::vector<MultiIndex>{{1, 0}});
  EXPECT_TRUE(staircase_equal(a, vertex_extraction(2, std::vector<MultiIndex>{{1, 0}, {2, 0}})));
  EXPECT_FALSE(staircase_equal(a, Staircase::from_points(2, std::vector<MultiIndex>{{0, 1}})));
  EXPECT_TRUE(staircase_equal(a, a));
}

TEST(ChainStabilization, Cases) {
  const auto a = Staircase::from_points(2, std::vector<MultiIndex>{{2, 0}});
  const auto b = Staircase::from_points(2, std::vector<MultiIndex>{{1, 0}});
  const auto c = Staircase::from_points(2, std::vector<MultiIndex>{{1, 0}, {0, 1}});
  const std::vector<Staircase> constant{b, b, b};
  EXPECT_TRUE(chain_stabilization(constant).stabilized);
  EXPECT_EQ(chain_stabilization(constant).index, 0u);
  const std::vector<Staircase> growing{a, b, c};
  EXPECT_FALSE(chain_stabilization(growing).stabilized);
  const std::vector<Staircase> settles{a, b, b, b};
  EXPECT_EQ(chain_stabilization(settles).index, 1u);
  const std::vector<Staircase> shrinking{c, b};
  EXPECT_THROW(chain_stabilization(shrinking), std::invalid_argument);
}
