#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "germ/ideal.hpp"
#include "germ/sampling.hpp"
#include "helpers.hpp"

using namespace germ;
using test::T;
using R = Rational;

namespace {
IdealPresentation<R> ideal(std::initializer_list<const char*> gens, std::size_t n, unsigned k) {
  std::vector<FormalSeries<R>> g;
  for (const char* s : gens) g.push_back(T(s, n, k));
  return IdealPresentation<R>(n, g);
}
}  // namespace

TEST(JetIdeal, MonomialIdeal) {
  const auto js = jet_ideal(ideal({"t1"}, 2, 4), 2);
  std::vector<FormalSeries<R>> expected{T("t1", 2, 2), T("t1^2", 2, 2), T("t1*t2", 2, 2)};
  EXPECT_EQ(js.basis(), expected);
}

TEST(JetIdeal, Cusp) {
  const auto js = jet_ideal(ideal({"t1 - t2^2"}, 2, 4), 2);
  std::vector<MultiIndex> pivots{{1, 0}, {2, 0}, {1, 1}};
  EXPECT_EQ(js.pivots(), pivots);
  EXPECT_FALSE(js.contains(T("t2^2", 2, 2)));
}

TEST(JetIdeal, ZeroIdeal) { EXPECT_EQ(jet_ideal(IdealPresentation<R>::zero(2), 3).rank(), 0u); }

TEST(JetIdeal, RankMatchesDenseOracle) {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const auto I = random_ideal<R>(rng, n, 6, 3, {0, 3, 3, 4, 3});
    std::vector<oracle::Poly> gens;
    for (const auto& g : I.generators()) gens.push_back(oracle::poly(g));
    for (unsigned d = 0; d <= 5; ++d) {
      const auto js = jet_ideal(I, d);
      const oracle::DenseJet dense(n, d, gens);
      EXPECT_EQ(js.rank(), dense.rank());
      std::set<oracle::Exponent> piv;
      for (const auto& p : js.pivots()) piv.insert(oracle::exponent(p));
      EXPECT_EQ(piv, dense.pivots());
    }
  }
}

TEST(JetIdeal, CanonicalForm) {
  // Two presentations of the same ideal give identical reduced jets.
  const auto a = ideal({"t1 - t2^2", "t2^3"}, 2, 6);
  const auto b = ideal({"t1 - t2^2 + t1*t2", "t2^3 + 5*t1*(t1 - t2^2)"}, 2, 6);
  for (unsigned d = 0; d <= 6; ++d) EXPECT_EQ(jet_ideal(a, d), jet_ideal(b, d));
}

TEST(Diagram, Examples) {
  // Frozen machine value: the ideal is principal with initial exponent (1,0).
  EXPECT_EQ(diagram(ideal({"t1 - t2^2"}, 2, 6), 4).to_string(), "[(1,0)]");
  for (unsigned d = 1; d <= 6; ++d) EXPECT_EQ(diagram(ideal({"t1"}, 2, 6), d).to_string(), "[(1,0)]");
  EXPECT_EQ(diagram(ideal({"1 + t1"}, 2, 6), 3).to_string(), "[(0,0)]");
  EXPECT_EQ(diagram(ideal({"t1^2", "t1*t2 + t2^3"}, 2, 6), 5).to_string(), "[(2,0),(1,1),(0,5)]");
}

TEST(Diagram, ChainOfCuspStabilizesImmediately) {
  const auto I = ideal({"t1 - t2^2"}, 2, 6);
  std::vector<Staircase> chain;
  for (unsigned d = 1; d <= 6; ++d) chain.push_back(diagram(I, d));
  const auto s = chain_stabilization(chain);
  EXPECT_TRUE(s.stabilized);
  EXPECT_EQ(s.index, 0u);
}

TEST(Diagram, PrecisionRequired) { EXPECT_THROW(diagram(ideal({"t1"}, 2, 3), 4), PrecisionError); }

TEST(JetMembership, Examples) {
  const auto cusp = ideal({"t1 - t2^2"}, 2, 6);
  EXPECT_FALSE(jet_membership(T("t2^2", 2, 6), cusp, 3));
  EXPECT_TRUE(jet_membership(T("t2^2", 2, 6), cusp, 2));
  for (unsigned k = 0; k <= 7; ++k) EXPECT_TRUE(jet_membership(T("t2*(t1 - t2^2)", 2, 6), cusp, k));
  EXPECT_THROW(jet_membership(T("t2^2", 2, 2), cusp, 5), PrecisionError);
}

TEST(MembershipUpTo, Examples) {
  const auto cusp = ideal({"t1 - t2^2"}, 2, 6);
  const auto v = membership_up_to(T("t1", 2, 6), cusp, 6);
  EXPECT_FALSE(v.member_up_to);
  EXPECT_EQ(v.witness, 3u);  // t1 = (t1 - t2^2) + t2^2 and t2^2 survives modulo m^3
  EXPECT_TRUE(membership_up_to(T("(t1 + t2)*(t1 - t2^2)", 2, 6), cusp, 6).member_up_to);
  EXPECT_TRUE(membership_up_to(FormalSeries<R>(2, 6), cusp, 6).member_up_to);
}

TEST(MembershipUpTo, MonotoneInK) {
  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    const auto I = random_ideal<R>(rng, 2, 6, 2, {1, 3, 3, 4, 3});
    const auto f = random_series<R>(rng, 2, 6, {1, 6, 4, 4, 3});
    bool prev = true;
    for (unsigned k = 0; k <= 7; ++k) {
      const bool now = jet_membership(f, I, k);
      if (!prev) EXPECT_FALSE(now);
      prev = now;
    }
  }
}
