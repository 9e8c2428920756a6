#include <gtest/gtest.h>

#include <cstdlib>

#include "../oracles.hpp"
#include "germ/counterexample.hpp"
#include "helpers.hpp"

using namespace germ;
using namespace germ::counterexample;
using test::Z;

namespace {

/// c_1..c_levels by scanning a window for the elements of S_m nearest 0.
std::vector<long long> brute_shifts(unsigned levels) {
  std::vector<long long> c{1};
  for (unsigned m = 1; m < levels; ++m) {
    long long a = 0, b = 0;
    const long long w = 1LL << (m + 1);
    for (long long t = -w; t <= w; ++t) {
      if (!oracle::in_coset(t, m, c.back())) continue;
      if (t < 0) a = t;
      if (t > 0 && b == 0) b = t;
    }
    c.push_back(-a > b ? a : b);
  }
  return c;
}

}  // namespace

TEST(Shifts, Values) {
  const std::vector<std::int64_t> expected{1, 1, -3, 5, -11, 21, -43, 85, -171, 341, -683, 1365, -2731};
  const auto seq = build_shift_sequence(13);
  ASSERT_EQ(seq.length(), 13u);
  for (unsigned m = 1; m <= 13; ++m) EXPECT_EQ(seq.shift(m), expected[m - 1]) << "m=" << m;
}

TEST(Shifts, AgreeWithBruteForce) {
  const auto seq = build_shift_sequence(20);
  const auto brute = brute_shifts(20);
  for (unsigned m = 1; m <= 20; ++m) EXPECT_EQ(seq.shift(m), brute[m - 1]) << "m=" << m;
}

TEST(Shifts, NearestElements) {
  const auto seq = build_shift_sequence(16);
  for (unsigned m = 1; m <= 16; ++m) {
    EXPECT_LT(seq.max_negative(m), 0);
    EXPECT_GT(seq.min_positive(m), 0);
    EXPECT_EQ(seq.min_positive(m) - seq.max_negative(m), ShiftSequence::modulus(m));
    EXPECT_TRUE(seq.contains(m, seq.max_negative(m)));
    EXPECT_TRUE(seq.contains(m, seq.min_positive(m)));
  }
}

TEST(Shifts, Nested) {
  const auto seq = build_shift_sequence(12);
  for (unsigned m = 1; m < 12; ++m) {
    for (long long t = -5000; t <= 5000; ++t) {
      if (seq.contains(m + 1, t)) ASSERT_TRUE(seq.contains(m, t)) << "m=" << m << " t=" << t;
      ASSERT_EQ(seq.contains(m, t), oracle::in_coset(t, m, seq.shift(m)));
    }
  }
}

TEST(Shifts, Bounds) {
  const auto seq = build_shift_sequence(30);
  for (unsigned m = 1; m < 30; ++m) {
    const auto c = std::llabs(seq.shift(m + 1));
    EXPECT_GE(c, 1LL << (m - 1));
    EXPECT_LT(c, 1LL << m);
  }
  EXPECT_THROW(build_shift_sequence(0), std::invalid_argument);
  EXPECT_THROW(build_shift_sequence(ShiftSequence::kMaxLevels + 1), std::invalid_argument);
}

TEST(Horizon, Values) {
  const auto seq = build_shift_sequence(13);
  EXPECT_EQ(membership_horizon(0, seq), std::optional<unsigned>(1));
  EXPECT_EQ(membership_horizon(1, seq), std::optional<unsigned>(3));
  EXPECT_EQ(membership_horizon(2, seq), std::optional<unsigned>(1));
  for (long long t = -2000; t <= 2000; ++t) {
    const auto h = membership_horizon(t, seq);
    ASSERT_TRUE(h.has_value()) << t;
    for (unsigned m = 1; m < *h; ++m) ASSERT_TRUE(oracle::in_coset(t, m, seq.shift(m)));
    ASSERT_FALSE(oracle::in_coset(t, *h, seq.shift(*h)));
  }
}

TEST(Sequence, ChecksPass) {
  const auto seq = build_shift_sequence(13);
  const auto checks = check_sequence(seq, 1 << 15);
  EXPECT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.holds) << c.name << ": " << c.detail;
}

TEST(Curves, Series) {
  const auto seq = build_shift_sequence(6);
  const auto phi = curve(CurveFamily::phi, 1, 1, 4, seq);
  EXPECT_EQ(phi.series, Z("w - 2*z - z^2", 2, 4));
  EXPECT_EQ(phi.tangent, 2);
  const auto psi = curve(CurveFamily::psi, 3, -2, 5, seq);
  EXPECT_EQ(psi.tangent, -16 - 3);
  EXPECT_EQ(psi.series, Z("w + 19*z - z^4", 2, 5));
  EXPECT_THROW(curve(CurveFamily::phi, 4, 0, 4, seq), PrecisionError);
  EXPECT_EQ(curve_jet(CurveFamily::phi, 4, 1, 4, seq).series, Z("w - 16*z", 2, 4));
  EXPECT_EQ(shear_map(3, 2), test::ZMap("(z, w + 3*z)", 2, 2));
}

TEST(Curves, ShearMovesPhiToPsi) {
  // psi_{m,n} o (z, w + c_m z) = phi_{m,n}.
  const auto seq = build_shift_sequence(6);
  for (unsigned m = 1; m <= 5; ++m) {
    for (std::int64_t n = -3; n <= 3; ++n) {
      const auto psi = curve(CurveFamily::psi, m, n, 7, seq).series;
      EXPECT_EQ(compose(psi, shear_map(seq.shift(m), 7)), curve(CurveFamily::phi, m, n, 7, seq).series);
    }
  }
}

TEST(Obstruction, Holds) {
  const auto seq = build_shift_sequence(13);
  const auto rep = verify_tangent_obstruction(12, seq, 1000);
  EXPECT_TRUE(rep.holds());
  EXPECT_LE(rep.max_horizon, 12u);
}

TEST(Verify, Regressions) {
  VerifyOptions o;
  o.shift_level = 2;
  o.m_max = 4;
  o.n_max = 8;
  o.truncation = 10;
  const auto fails = verify_finite_order_equivalence(o);
  EXPECT_EQ(fails.order, 4u);
  EXPECT_FALSE(fails.holds);
  EXPECT_FALSE(fails.failures.empty());
  for (const auto& f : fails.failures) EXPECT_EQ(f.kind, "genuine") << f.source;

  o.order = 3;
  EXPECT_TRUE(verify_finite_order_equivalence(o).holds);

  o.m_max = 2;
  o.order = 0;
  EXPECT_TRUE(verify_finite_order_equivalence(o).holds);

  o.shift_level = 4;
  o.m_max = 4;
  const auto ok = verify_finite_order_equivalence(o);
  EXPECT_EQ(ok.order, 6u);
  EXPECT_TRUE(ok.holds);
}

TEST(Verify, PrefilterAndRealifyAgree) {
  VerifyOptions o;
  o.shift_level = 2;
  o.m_max = 3;
  o.n_max = 3;
  o.truncation = 6;
  for (unsigned order : {3u, 4u}) {
    o.order = order;
    o.prefilter = true;
    o.realify = false;
    const bool base = verify_finite_order_equivalence(o).holds;
    o.prefilter = false;
    EXPECT_EQ(verify_finite_order_equivalence(o).holds, base);
    o.realify = true;
    o.prefilter = true;
    EXPECT_EQ(verify_finite_order_equivalence(o).holds, base);
  }
}
