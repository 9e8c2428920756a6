#pragma once

// Formal division f = sum_j q_j g_j + r modulo m^{K+1}, where r has no term
// in the region  union_j (alpha_j + N^n)  spanned by the initial exponents of
// the divisors, and normal forms modulo an ideal.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "germ/ideal.hpp"
#include "germ/monomial.hpp"
#include "germ/series.hpp"

namespace germ {

template <ExactField S>
struct DivisionResult {
  std::vector<FormalSeries<S>> quotients;
  FormalSeries<S> remainder;
  Staircase staircase;
};

/// Repeatedly cancels the smallest remaining term that lies in the region,
/// using the lowest-indexed divisor whose initial exponent divides it. Each
/// cancellation only creates larger terms, and there are finitely many
/// exponents of degree <= K, so the loop terminates.
template <ExactField S>
DivisionResult<S> formal_division(const FormalSeries<S>& f, const std::vector<FormalSeries<S>>& divisors,
                                  unsigned K) {
  if (divisors.empty()) throw std::invalid_argument("division needs at least one divisor");
  const std::size_t n = f.dimension();
  if (f.truncation() < K) throw PrecisionError("dividend known below the working truncation");
  std::vector<MultiIndex> alphas;
  std::vector<S> leads;
  for (std::size_t j = 0; j < divisors.size(); ++j) {
    const auto& g = divisors[j];
    if (g.dimension() != n) throw DimensionMismatch("divisor " + std::to_string(j + 1));
    if (g.is_zero()) throw DomainError("divisor " + std::to_string(j + 1) + " is zero");
    if (g.truncation() < K) {
      throw PrecisionError("divisor " + std::to_string(j + 1) + " known below the working truncation");
    }
    alphas.push_back(*initial_exponent(g));
    leads.push_back(initial_coefficient(g));
  }

  DivisionResult<S> out{std::vector<FormalSeries<S>>(divisors.size(), FormalSeries<S>(n, K)),
                        FormalSeries<S>(n, K), vertex_extraction(n, alphas)};
  auto work = f.truncated(K).terms();
  typename FormalSeries<S>::Terms rem;
  while (!work.empty()) {
    auto it = work.begin();
    const MultiIndex beta = it->first;
    const S c = it->second;
    std::optional<std::size_t> hit;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (alphas[j].divides(beta)) {
        hit = j;
        break;
      }
    }
    if (!hit) {
      rem.emplace_hint(rem.end(), beta, c);
      work.erase(it);
      continue;
    }
    const std::size_t j = *hit;
    const MultiIndex shift = beta - alphas[j];
    const S factor = c / leads[j];
    out.quotients[j].add_term(shift, factor);
    for (const auto& [a, ca] : divisors[j].terms()) {
      if (a.degree() + shift.degree() > K) break;
      auto [jt, inserted] = work.try_emplace(a + shift, S(0));
      jt->second -= factor * ca;
      if (is_zero(jt->second)) work.erase(jt);
    }
  }
  out.remainder = FormalSeries<S>::from_terms(n, K, std::move(rem));
  return out;
}

/// Normal form of f modulo j^K I: the unique r with f - r in j^K I + m^{K+1}
/// and no term of r in the degree-K diagram of I. Divides by ideal elements
/// whose initial exponents are the vertices of that diagram.
template <ExactField S>
FormalSeries<S> reduce_mod_ideal(const FormalSeries<S>& f, const IdealPresentation<S>& ideal, unsigned K) {
  if (f.dimension() != ideal.dimension()) throw DimensionMismatch("series against ideal");
  const JetSpace<S> js = jet_ideal(ideal, K);
  const Staircase stairs = vertex_extraction(ideal.dimension(), js.pivots());
  std::vector<FormalSeries<S>> divisors;
  for (const auto& row : js.basis()) {
    const MultiIndex& p = row.terms().begin()->first;
    for (const auto& v : stairs.vertices()) {
      if (v == p) divisors.push_back(row);
    }
  }
  if (divisors.empty()) return f.truncated(K);
  return formal_division(f, divisors, K).remainder;
}

}  // namespace germ
