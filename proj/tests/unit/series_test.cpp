#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "germ/formal_map.hpp"
#include "germ/sampling.hpp"
#include "helpers.hpp"

using namespace germ;
using test::T;
using test::TMap;
using test::Z;
using R = Rational;

TEST(Scalar, RationalText) {
  EXPECT_EQ(Rational(6, -4).to_string(), "-3/2");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational(0).to_string(), "0");
  EXPECT_THROW(Rational(1, 0), DomainError);
}

TEST(Scalar, GaussianArithmetic) {
  const GaussianRational a(Rational(1), Rational(2)), b(Rational(3), Rational(-1));
  EXPECT_EQ(a * b, GaussianRational(Rational(5), Rational(5)));
  EXPECT_EQ((a / b) * b, a);
  EXPECT_EQ(GaussianRational::i() * GaussianRational::i(), GaussianRational(-1));
  EXPECT_EQ(GaussianRational(Rational(0), Rational(-1)).to_string(), "-i");
  EXPECT_EQ(GaussianRational(Rational(1, 2), Rational(-3)).to_string(), "1/2 - 3*i");
}

TEST(Series, Arithmetic) {
  EXPECT_EQ(T("t1", 2, 4) * T("t1 - t2^2", 2, 4), T("t1^2 - t1*t2^2", 2, 4));
  EXPECT_TRUE((T("t1 + t2", 2, 4) * FormalSeries<R>(2, 4)).is_zero());
  // Binary operations keep the smaller truncation.
  EXPECT_EQ((T("t1", 2, 3) + T("t2^4", 2, 6)).truncation(), 3u);
  EXPECT_THROW(T("t1", 2, 3) + T("t1", 3, 3), DimensionMismatch);
}

TEST(Series, ProductAgainstOracle) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const unsigned k = static_cast<unsigned>(uniform_int(rng, 1, 6));
    const auto f = random_series<R>(rng, n, k, {0, k, 6, 5, 3});
    const auto g = random_series<R>(rng, n, k, {0, k, 6, 5, 3});
    EXPECT_EQ(oracle::poly(f * g), oracle::mul(oracle::poly(f), oracle::poly(g), k));
    EXPECT_EQ(f * g, g * f);
    EXPECT_EQ(oracle::poly(f - g), oracle::add(oracle::poly(f), oracle::poly(g), -1));
  }
}

TEST(Series, Truncate) {
  EXPECT_EQ(truncate(T("t1 + t1^3", 1, 5), 2), T("t1", 1, 2));
  const auto f = T("t1 + t1^3", 1, 5);
  EXPECT_EQ(truncate(f, 5), f);
  EXPECT_THROW(truncate(f, 6), PrecisionError);
}

TEST(Series, InitialExponent) {
  EXPECT_EQ(initial_exponent(T("t1 - t2^2", 2, 4)), std::optional<MultiIndex>(MultiIndex{1, 0}));
  EXPECT_EQ(initial_exponent(FormalSeries<R>(2, 4)), std::nullopt);
  EXPECT_EQ(initial_exponent(T("t2^2 + t1*t2", 2, 4)), std::optional<MultiIndex>(MultiIndex{1, 1}));
  EXPECT_EQ(initial_coefficient(T("3*t1*t2 - t2^2", 2, 4)), R(3));
}

TEST(Series, Partial) {
  const auto d = partial(T("t1^3*t2 + t2", 2, 5), 0);
  EXPECT_EQ(d, T("3*t1^2*t2", 2, 4));
  EXPECT_EQ(d.truncation(), 4u);
}

/// g o Phi by expanding every monomial with oracle products.
oracle::Poly oracle_compose(const FormalSeries<R>& g, const FormalMap<R>& phi, unsigned k) {
  oracle::Poly out;
  const std::size_t n = phi.dimension();
  for (const auto& [a, c] : g.terms()) {
    oracle::Poly term{{oracle::Exponent(n, 0), c.value()}};
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (unsigned p = 0; p < a[i]; ++p) term = oracle::mul(term, oracle::poly(phi[i]), k);
    }
    out = oracle::add(out, term);
  }
  return out;
}

TEST(Compose, AgainstOracle) {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const unsigned k = 5;
    const auto phi = random_invertible_map<R>(rng, n, k);
    const auto g = random_series<R>(rng, n, k, {0, k, 6, 4, 3});
    EXPECT_EQ(oracle::poly(compose(g, phi)), oracle_compose(g, phi, k));
  }
}

TEST(Compose, Associative) {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2;
    const auto phi = random_invertible_map<R>(rng, n, 5);
    const auto psi = random_invertible_map<R>(rng, n, 5);
    const auto g = random_series<R>(rng, n, 5, {0, 5, 6, 4, 3});
    EXPECT_EQ(compose(compose(g, phi), psi), compose(g, map_compose(phi, psi)));
  }
}

TEST(MapInvert, WorkedExample) {
  // w = 2z + z^2 gives z = -1 + sqrt(1 + w).
  const auto phi = TMap("(2*t1 + t1^2)", 1, 4);
  EXPECT_EQ(map_invert(phi)[0], T("t1/2 - t1^2/8 + t1^3/16 - 5*t1^4/128", 1, 4));
}

TEST(MapInvert, RoundTrip) {
  Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const unsigned k = static_cast<unsigned>(uniform_int(rng, 1, 6));
    const auto phi = random_invertible_map<R>(rng, n, k);
    const auto inv = map_invert(phi);
    EXPECT_EQ(map_compose(phi, inv), FormalMap<R>::identity(n, k));
    EXPECT_EQ(map_compose(inv, phi), FormalMap<R>::identity(n, k));
  }
}

TEST(MapInvert, Errors) {
  EXPECT_THROW(map_invert(TMap("(t1^2, t2)", 2, 4)), DomainError);
  EXPECT_THROW(map_invert(TMap("(t1, t2, t1 + t2)", 2, 4)), DimensionMismatch);
  EXPECT_THROW(TMap("(1 + t1)", 1, 3), std::exception);
}

TEST(Realify, Examples) {
  const auto lin = realify(Z("w - z", 2, 3));
  EXPECT_EQ(lin.real, T("t3 - t1", 4, 3));
  EXPECT_EQ(lin.imag, T("t4 - t2", 4, 3));
  const auto sq = realify(Z("z^2", 1, 3));
  EXPECT_EQ(sq.real, T("t1^2 - t2^2", 2, 3));
  EXPECT_EQ(sq.imag, T("2*t1*t2", 2, 3));
}

TEST(Realify, MultiplicativeOnRandomSeries) {
  Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const auto f = random_series<GaussianRational>(rng, 2, 4, {0, 4, 4, 3, 2});
    const auto g = random_series<GaussianRational>(rng, 2, 4, {0, 4, 4, 3, 2});
    const auto rf = realify(f), rg = realify(g), rfg = realify(f * g);
    EXPECT_EQ(rfg.real, rf.real * rg.real - rf.imag * rg.imag);
    EXPECT_EQ(rfg.imag, rf.real * rg.imag + rf.imag * rg.real);
  }
}
