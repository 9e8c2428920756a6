#pragma once

// Formal maps t -> (Phi_1(t), ..., Phi_m(t)) with Phi(0) = 0: substitution,
// composition, degree-by-degree inversion, and the real/imaginary splitting
// z_j = x_j + i*y_j.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "germ/linalg.hpp"
#include "germ/series.hpp"

namespace germ {

template <ExactField S>
class FormalMap {
 public:
  FormalMap() = default;

  /// Components must share a dimension and have no constant term. All
  /// components are truncated to the smallest truncation among them.
  explicit FormalMap(std::vector<FormalSeries<S>> components) : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("formal map needs at least one component");
    dim_ = components_.front().dimension();
    trunc_ = components_.front().truncation();
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& c = components_[i];
      if (c.dimension() != dim_) throw DimensionMismatch("map components in different dimensions");
      if (c.has_constant_term()) {
        throw DomainError("map component " + std::to_string(i + 1) + " does not vanish at 0");
      }
      trunc_ = std::min(trunc_, c.truncation());
    }
    for (auto& c : components_) {
      if (c.truncation() != trunc_) c = c.truncated(trunc_);
    }
  }

  static FormalMap identity(std::size_t n, unsigned truncation) {
    std::vector<FormalSeries<S>> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(FormalSeries<S>::variable(n, truncation, i));
    return FormalMap(std::move(comps));
  }

  /// t -> A t.
  static FormalMap linear(const Matrix<S>& a, unsigned truncation) {
    std::vector<FormalSeries<S>> comps;
    const auto n = static_cast<std::size_t>(a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      FormalSeries<S> c(n, truncation);
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        c.add_term(MultiIndex::unit(n, static_cast<std::size_t>(j)), a(i, j));
      }
      comps.push_back(std::move(c));
    }
    return FormalMap(std::move(comps));
  }

  /// Number of variables the components are written in.
  std::size_t dimension() const { return dim_; }
  /// Number of components.
  std::size_t size() const { return components_.size(); }
  unsigned truncation() const { return trunc_; }
  const std::vector<FormalSeries<S>>& components() const { return components_; }
  const FormalSeries<S>& operator[](std::size_t i) const { return components_[i]; }
  bool is_square() const { return components_.size() == dim_; }

  /// Jacobian at 0: entry (i, j) is the coefficient of t_j in Phi_i.
  Matrix<S> linear_part() const {
    Matrix<S> a = Matrix<S>::Zero(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
    if (trunc_ == 0) throw PrecisionError("linear part of a map known only to degree 0");
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            components_[i].coefficient(MultiIndex::unit(dim_, j));
      }
    }
    return a;
  }

  bool is_invertible() const {
    return is_square() && trunc_ > 0 && exact_inverse(linear_part()).has_value();
  }

  FormalMap truncated(unsigned d) const {
    std::vector<FormalSeries<S>> comps;
    for (const auto& c : components_) comps.push_back(c.truncated(d));
    return FormalMap(std::move(comps));
  }

  friend bool operator==(const FormalMap& a, const FormalMap& b) { return a.components_ == b.components_; }

 private:
  std::vector<FormalSeries<S>> components_;
  std::size_t dim_ = 0;
  unsigned trunc_ = 0;
};

template <ExactField S>
FormalMap<S> truncate(const FormalMap<S>& phi, unsigned d) {
  return phi.truncated(d);
}

/// Substitutes a fixed map into many series, caching the images of
/// monomials. Holds a reference: the map must outlive the composer.
template <ExactField S>
class Composer {
 public:
  explicit Composer(const FormalMap<S>& phi) : phi_(phi) {}

  /// g(Phi_1, ..., Phi_m), known to degree min(K_g, K_Phi).
  FormalSeries<S> operator()(const FormalSeries<S>& g) {
    if (g.dimension() != phi_.size()) {
      throw DimensionMismatch("series in " + std::to_string(g.dimension()) +
                              " variables composed with a map of " + std::to_string(phi_.size()) +
                              " components");
    }
    const unsigned k = std::min(g.truncation(), phi_.truncation());
    FormalSeries<S> out(phi_.dimension(), k);
    for (const auto& [a, c] : g.terms()) {
      if (a.degree() > k) break;
      const FormalSeries<S>& img = image(a);
      for (const auto& [b, cb] : img.terms()) {
        if (b.degree() > k) break;
        out.add_term(b, c * cb);
      }
    }
    return out;
  }

  /// Phi^a, known to degree K_Phi.
  const FormalSeries<S>& image(const MultiIndex& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    FormalSeries<S> value;
    if (a.degree() == 0) {
      value = FormalSeries<S>::constant(phi_.dimension(), phi_.truncation(), S(1));
    } else {
      std::size_t j = a.size();
      while (a[--j] == 0) {
      }
      const FormalSeries<S> rest = image(a.with(j, a[j] - 1));
      value = rest * phi_[j];
    }
    return cache_.emplace(a, std::move(value)).first->second;
  }

 private:
  const FormalMap<S>& phi_;
  std::map<MultiIndex, FormalSeries<S>, MonomialLess> cache_;
};

/// g o Phi. The map must vanish at 0 (enforced by FormalMap).
template <ExactField S>
FormalSeries<S> compose(const FormalSeries<S>& g, const FormalMap<S>& phi) {
  return Composer<S>(phi)(g);
}

/// Phi o Psi, componentwise.
template <ExactField S>
FormalMap<S> map_compose(const FormalMap<S>& phi, const FormalMap<S>& psi) {
  Composer<S> sub(psi);
  std::vector<FormalSeries<S>> comps;
  comps.reserve(phi.size());
  for (const auto& c : phi.components()) comps.push_back(sub(c));
  return FormalMap<S>(std::move(comps));
}

/// Two-sided inverse up to the truncation degree. The linear part is
/// inverted exactly; each further homogeneous degree d of the inverse is
/// solved from the degree-d defect of Phi o Psi.
template <ExactField S>
FormalMap<S> map_invert(const FormalMap<S>& phi) {
  if (!phi.is_square()) throw DimensionMismatch("only square maps can be inverted");
  if (phi.truncation() == 0) throw PrecisionError("map known only to degree 0");
  const auto a_inv = exact_inverse(phi.linear_part());
  if (!a_inv) throw DomainError("map has a singular linear part");
  const std::size_t n = phi.size();
  const unsigned k = phi.truncation();
  std::vector<FormalSeries<S>> psi = FormalMap<S>::linear(*a_inv, k).components();
  for (unsigned d = 2; d <= k; ++d) {
    const FormalMap<S> lower = FormalMap<S>(psi).truncated(d);
    const FormalMap<S> defect = map_compose(phi.truncated(d), lower);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const S& factor = (*a_inv)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (is_zero(factor)) continue;
        for (const auto& [b, c] : defect[j].terms()) {
          if (b.degree() == d) psi[i].add_term(b, -(factor * c));
        }
      }
    }
  }
  return FormalMap<S>(std::move(psi));
}

/// z_j = x_j + i*y_j, in the variables (x_1, y_1, ..., x_n, y_n).
inline FormalMap<GaussianRational> complex_coordinates(std::size_t n, unsigned truncation) {
  std::vector<FormalSeries<GaussianRational>> comps;
  for (std::size_t j = 0; j < n; ++j) {
    FormalSeries<GaussianRational> z(2 * n, truncation);
    z.add_term(MultiIndex::unit(2 * n, 2 * j), GaussianRational(1));
    z.add_term(MultiIndex::unit(2 * n, 2 * j + 1), GaussianRational::i());
    comps.push_back(std::move(z));
  }
  return FormalMap<GaussianRational>(std::move(comps));
}

struct RealImag {
  FormalSeries<Rational> real;
  FormalSeries<Rational> imag;
};

/// Real and imaginary parts of p(x + i*y) in R[[x, y]].
inline RealImag realify(const FormalSeries<GaussianRational>& p) {
  const auto z = complex_coordinates(p.dimension(), p.truncation());
  const auto expanded = compose(p, z);
  RealImag out{FormalSeries<Rational>(2 * p.dimension(), p.truncation()),
               FormalSeries<Rational>(2 * p.dimension(), p.truncation())};
  for (const auto& [a, c] : expanded.terms()) {
    out.real.add_term(a, c.real());
    out.imag.add_term(a, c.imag());
  }
  return out;
}

/// The real map (Re Phi_1, Im Phi_1, ..., Re Phi_n, Im Phi_n) of a
/// holomorphic map, in the variables (x_1, y_1, ..., x_n, y_n).
inline FormalMap<Rational> realify(const FormalMap<GaussianRational>& phi) {
  std::vector<FormalSeries<Rational>> comps;
  for (const auto& c : phi.components()) {
    auto parts = realify(c);
    comps.push_back(std::move(parts.real));
    comps.push_back(std::move(parts.imag));
  }
  return FormalMap<Rational>(std::move(comps));
}

template <ExactField To, ExactField From>
FormalMap<To> convert(const FormalMap<From>& phi) {
  std::vector<FormalSeries<To>> comps;
  for (const auto& c : phi.components()) comps.push_back(convert<To>(c));
  return FormalMap<To>(std::move(comps));
}

}  // namespace germ
