#pragma once

// Seeded random series, maps and ideals for property drivers.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "germ/formal_map.hpp"
#include "germ/ideal.hpp"
#include "germ/series.hpp"

namespace germ {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// p/q with |p| <= max_num, 1 <= q <= max_den.
inline Rational random_rational(Rng& rng, long max_num, long max_den, bool nonzero = false) {
  while (true) {
    Rational r(uniform_int(rng, -max_num, max_num), uniform_int(rng, 1, max_den));
    if (!nonzero || !r.is_zero()) return r;
  }
}

template <ExactField S>
S random_scalar(Rng& rng, long max_num, long max_den, bool nonzero = false) {
  if constexpr (std::same_as<S, Rational>) {
    return random_rational(rng, max_num, max_den, nonzero);
  } else {
    while (true) {
      S c(random_rational(rng, max_num, max_den), uniform_int(rng, 0, 2) ? Rational(0)
                                                                          : random_rational(rng, max_num, max_den));
      if (!nonzero || !c.is_zero()) return c;
    }
  }
}

struct SeriesShape {
  unsigned min_degree = 0;
  unsigned max_degree = 3;
  std::size_t terms = 4;
  long max_num = 5;
  long max_den = 3;
};

/// Up to `shape.terms` random terms with degrees in [min_degree, max_degree].
template <ExactField S>
FormalSeries<S> random_series(Rng& rng, std::size_t n, unsigned truncation, const SeriesShape& shape) {
  FormalSeries<S> f(n, truncation);
  const unsigned top = std::min(shape.max_degree, truncation);
  if (shape.min_degree > top) return f;
  std::vector<MultiIndex> pool;
  for (const auto& a : monomials_up_to(n, top)) {
    if (a.degree() >= shape.min_degree) pool.push_back(a);
  }
  for (std::size_t t = 0; t < shape.terms; ++t) {
    const auto& a = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(pool.size()) - 1))];
    f.add_term(a, random_scalar<S>(rng, shape.max_num, shape.max_den, true));
  }
  return f;
}

/// Invertible map: random linear part with nonzero determinant plus random
/// terms of degree 2..max_degree.
template <ExactField S>
FormalMap<S> random_invertible_map(Rng& rng, std::size_t n, unsigned truncation, unsigned max_degree = 3,
                                   std::size_t terms = 2) {
  while (true) {
    std::vector<FormalSeries<S>> comps;
    for (std::size_t i = 0; i < n; ++i) {
      FormalSeries<S> c(n, truncation);
      for (std::size_t j = 0; j < n; ++j) {
        const long v = i == j ? uniform_int(rng, 1, 3) : uniform_int(rng, -1, 1);
        if (v) c.add_term(MultiIndex::unit(n, j), S(Rational(v, uniform_int(rng, 1, 2))));
      }
      c += random_series<S>(rng, n, truncation, {2, max_degree, terms, 3, 2});
      comps.push_back(std::move(c));
    }
    FormalMap<S> phi(std::move(comps));
    if (phi.is_invertible()) return phi;
  }
}

template <ExactField S>
IdealPresentation<S> random_ideal(Rng& rng, std::size_t n, unsigned truncation, std::size_t max_generators,
                                  const SeriesShape& shape) {
  const auto count = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_generators)));
  std::vector<FormalSeries<S>> gens;
  for (std::size_t i = 0; i < count; ++i) gens.push_back(random_series<S>(rng, n, truncation, shape));
  return IdealPresentation<S>(n, std::move(gens));
}

}  // namespace germ
