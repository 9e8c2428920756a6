#pragma once

// Truncated multivariate formal power series over an exact field. A series
// carries the degree K up to which its coefficients are known; every stored
// term has degree <= K and every binary operation yields the smaller K.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "germ/errors.hpp"
#include "germ/monomial.hpp"
#include "germ/scalar.hpp"

namespace germ {

template <ExactField S>
class FormalSeries {
 public:
  using Scalar = S;
  using Terms = std::map<MultiIndex, S, MonomialLess>;

  FormalSeries() = default;
  /// The zero series in `dimension` variables, known up to degree `truncation`.
  FormalSeries(std::size_t dimension, unsigned truncation)
      : dim_(dimension), trunc_(truncation) {
    if (dimension > MultiIndex::kMaxVariables) throw std::invalid_argument("too many variables");
  }

  static FormalSeries constant(std::size_t dimension, unsigned truncation, const S& c) {
    return monomial(dimension, truncation, MultiIndex(dimension), c);
  }
  static FormalSeries variable(std::size_t dimension, unsigned truncation, std::size_t i) {
    return monomial(dimension, truncation, MultiIndex::unit(dimension, i), S(1));
  }
  static FormalSeries monomial(std::size_t dimension, unsigned truncation, const MultiIndex& a,
                               const S& c) {
    FormalSeries f(dimension, truncation);
    f.add_term(a, c);
    return f;
  }

  /// Adopts a term map; terms above the truncation and zero coefficients are dropped.
  static FormalSeries from_terms(std::size_t dimension, unsigned truncation, Terms terms) {
    FormalSeries f(dimension, truncation);
    for (auto it = terms.begin(); it != terms.end();) {
      if (it->first.size() != dimension) throw DimensionMismatch("term dimension");
      if (it->first.degree() > truncation || is_zero_scalar(it->second)) {
        it = terms.erase(it);
      } else {
        ++it;
      }
    }
    f.terms_ = std::move(terms);
    return f;
  }

  /// t^m * f, known to degree d (d <= K + |m|).
  FormalSeries shifted(const MultiIndex& m, unsigned d) const {
    if (d > trunc_ + m.degree()) throw PrecisionError("monomial multiple beyond known degree");
    FormalSeries out(dim_, d);
    for (const auto& [a, c] : terms_) {
      if (a.degree() + m.degree() > d) break;
      out.terms_.emplace_hint(out.terms_.end(), a + m, c);
    }
    return out;
  }

  std::size_t dimension() const { return dim_; }
  unsigned truncation() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? S(0) : it->second;
  }

  /// Lowest degree present; nullopt for the zero series.
  std::optional<unsigned> order() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
  }

  /// Every term has degree >= k (membership in m^k, up to truncation).
  bool vanishes_to_order(unsigned k) const { return terms_.empty() || terms_.begin()->first.degree() >= k; }
  bool has_constant_term() const { return !vanishes_to_order(1); }

  /// Accumulates c*t^a; terms above the truncation are dropped.
  void add_term(const MultiIndex& a, const S& c) {
    if (a.size() != dim_) throw DimensionMismatch("term in " + std::to_string(a.size()) +
                                                  " variables added to series in " +
                                                  std::to_string(dim_));
    if (a.degree() > trunc_ || is_zero_scalar(c)) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_scalar(it->second)) terms_.erase(it);
    }
  }

  FormalSeries& operator+=(const FormalSeries& g) { return accumulate(g, false); }
  FormalSeries& operator-=(const FormalSeries& g) { return accumulate(g, true); }
  FormalSeries& operator*=(const S& c) {
    if (is_zero_scalar(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, v] : terms_) v *= c;
    return *this;
  }

  friend FormalSeries operator+(FormalSeries f, const FormalSeries& g) { return f += g; }
  friend FormalSeries operator-(FormalSeries f, const FormalSeries& g) { return f -= g; }
  friend FormalSeries operator-(FormalSeries f) {
    for (auto& [a, v] : f.terms_) v = -v;
    return f;
  }
  friend FormalSeries operator*(FormalSeries f, const S& c) { return f *= c; }
  friend FormalSeries operator*(const S& c, FormalSeries f) { return f *= c; }
  friend FormalSeries operator*(const FormalSeries& f, const FormalSeries& g) {
    check_dims(f, g, "product");
    return multiply_to(f, g, std::min(f.trunc_, g.trunc_));
  }

  friend bool operator==(const FormalSeries& f, const FormalSeries& g) {
    return f.dim_ == g.dim_ && f.trunc_ == g.trunc_ && f.terms_ == g.terms_;
  }

  /// Product truncated at `degree`. The caller vouches that every coefficient
  /// up to `degree` is determined by the known coefficients of f and g.
  static FormalSeries multiply_to(const FormalSeries& f, const FormalSeries& g, unsigned degree) {
    FormalSeries out(f.dim_, degree);
    for (const auto& [a, ca] : f.terms_) {
      if (a.degree() > degree) break;
      for (const auto& [b, cb] : g.terms_) {
        if (a.degree() + b.degree() > degree) break;
        out.add_term(a + b, ca * cb);
      }
    }
    return out;
  }

  /// Same coefficients, truncation reset to d (d <= truncation()).
  FormalSeries truncated(unsigned d) const {
    if (d > trunc_) {
      throw PrecisionError("cannot truncate a series known to degree " + std::to_string(trunc_) +
                           " at degree " + std::to_string(d));
    }
    FormalSeries out(dim_, d);
    for (const auto& [a, c] : terms_) {
      if (a.degree() > d) break;
      out.terms_.emplace_hint(out.terms_.end(), a, c);
    }
    return out;
  }

  static void check_dims(const FormalSeries& f, const FormalSeries& g, const char* what) {
    if (f.dim_ != g.dim_) {
      throw DimensionMismatch(std::string(what) + " of series in " + std::to_string(f.dim_) +
                              " and " + std::to_string(g.dim_) + " variables");
    }
  }

 private:
  static bool is_zero_scalar(const S& c) { return germ::is_zero(c); }

  FormalSeries& accumulate(const FormalSeries& g, bool negate) {
    check_dims(*this, g, negate ? "difference" : "sum");
    if (g.trunc_ < trunc_) *this = truncated(g.trunc_);
    for (const auto& [a, c] : g.terms_) {
      if (a.degree() > trunc_) break;
      add_term(a, negate ? S(-c) : c);
    }
    return *this;
  }

  std::size_t dim_ = 0;
  unsigned trunc_ = 0;
  Terms terms_;
};

/// Keeps the terms of degree <= d; the result is known to degree d.
template <ExactField S>
FormalSeries<S> truncate(const FormalSeries<S>& f, unsigned d) {
  return f.truncated(d);
}

/// Exponent of the smallest nonzero monomial, nullopt for the zero series.
template <ExactField S>
std::optional<MultiIndex> initial_exponent(const FormalSeries<S>& f) {
  if (f.is_zero()) return std::nullopt;
  return f.terms().begin()->first;
}

template <ExactField S>
S initial_coefficient(const FormalSeries<S>& f) {
  if (f.is_zero()) throw DomainError("zero series has no initial coefficient");
  return f.terms().begin()->second;
}

/// The homogeneous component of degree d.
template <ExactField S>
FormalSeries<S> homogeneous_part(const FormalSeries<S>& f, unsigned d) {
  FormalSeries<S> out(f.dimension(), f.truncation());
  for (const auto& [a, c] : f.terms()) {
    if (a.degree() == d) out.add_term(a, c);
  }
  return out;
}

/// Formal partial derivative in variable j; known to degree K - 1.
template <ExactField S>
FormalSeries<S> partial(const FormalSeries<S>& f, std::size_t j) {
  if (f.truncation() == 0) throw PrecisionError("derivative of a series known only to degree 0");
  if (j >= f.dimension()) throw std::out_of_range("variable index out of range");
  FormalSeries<S> out(f.dimension(), f.truncation() - 1);
  for (const auto& [a, c] : f.terms()) {
    if (a[j] == 0) continue;
    out.add_term(a.with(j, a[j] - 1), c * S(static_cast<long>(a[j])));
  }
  return out;
}

template <ExactField To, ExactField From>
FormalSeries<To> convert(const FormalSeries<From>& f) {
  if constexpr (std::same_as<To, From>) {
    return f;
  } else {
    FormalSeries<To> out(f.dimension(), f.truncation());
    for (const auto& [a, c] : f.terms()) {
      if constexpr (std::same_as<To, Rational>) {
        if (!c.is_real()) throw DomainError("series has non-real coefficients");
        out.add_term(a, c.real());
      } else {
        out.add_term(a, GaussianRational(c));
      }
    }
    return out;
  }
}

}  // namespace germ
