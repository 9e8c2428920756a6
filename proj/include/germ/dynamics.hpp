#pragma once

// Conjugacy of self-map germs and pushforward of singular vector fields
// under a formal change of coordinates.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germ/formal_map.hpp"

namespace germ {

/// Germ of a self-map F with F(0) = 0; F need not be invertible.
template <ExactField S>
using SelfMapGerm = FormalMap<S>;

/// Germ of a vector field xi = sum_j xi_j d/dt_j with xi(0) = 0.
template <ExactField S>
class VectorFieldGerm {
 public:
  VectorFieldGerm() = default;
  explicit VectorFieldGerm(std::vector<FormalSeries<S>> components) : map_(std::move(components)) {
    if (!map_.is_square()) throw DimensionMismatch("vector field needs one component per variable");
  }
  explicit VectorFieldGerm(FormalMap<S> m) : map_(std::move(m)) {
    if (!map_.is_square()) throw DimensionMismatch("vector field needs one component per variable");
  }

  std::size_t dimension() const { return map_.dimension(); }
  unsigned truncation() const { return map_.truncation(); }
  const std::vector<FormalSeries<S>>& components() const { return map_.components(); }
  const FormalSeries<S>& operator[](std::size_t i) const { return map_[i]; }
  const FormalMap<S>& as_map() const { return map_; }

  friend bool operator==(const VectorFieldGerm& a, const VectorFieldGerm& b) { return a.map_ == b.map_; }

 private:
  FormalMap<S> map_;
};

/// Phi o F o Phi^{-1}.
template <ExactField S>
SelfMapGerm<S> conjugate(const SelfMapGerm<S>& f, const FormalMap<S>& phi) {
  if (f.size() != phi.size() || !f.is_square()) throw DimensionMismatch("self-map and conjugating map");
  return map_compose(phi, map_compose(f, map_invert(phi)));
}

/// (D Phi . xi) o Phi^{-1}. D Phi is known one degree less than Phi, but
/// xi vanishes at 0, so the product is still exact to min(K_Phi, K_xi).
template <ExactField S>
VectorFieldGerm<S> pushforward_field(const VectorFieldGerm<S>& xi, const FormalMap<S>& phi) {
  const std::size_t n = xi.dimension();
  if (phi.size() != n || !phi.is_square()) throw DimensionMismatch("vector field and map");
  const FormalMap<S> inverse = map_invert(phi);
  const unsigned k = std::min(phi.truncation(), xi.truncation());
  std::vector<FormalSeries<S>> transported;
  for (std::size_t i = 0; i < n; ++i) {
    FormalSeries<S> acc(n, k);
    for (std::size_t j = 0; j < n; ++j) {
      acc += FormalSeries<S>::multiply_to(partial(phi[i], j), xi[j], k);
    }
    transported.push_back(std::move(acc));
  }
  Composer<S> sub(inverse);
  std::vector<FormalSeries<S>> out;
  for (const auto& c : transported) out.push_back(sub(c));
  return VectorFieldGerm<S>(std::move(out));
}

struct ConjugacyFailure {
  std::size_t index;
  std::size_t component;
  /// Degree of the lowest surviving term of the difference.
  unsigned degree;
};

struct ConjugacyReport {
  bool holds = true;
  unsigned order = 0;
  std::vector<bool> indices;
  std::optional<ConjugacyFailure> first_failure;
};

namespace detail {

template <ExactField S, class Transport>
ConjugacyReport order_k_agreement(const std::vector<FormalMap<S>>& left, const std::vector<FormalMap<S>>& right,
                                  const FormalMap<S>& phi, unsigned k, Transport transport) {
  if (left.size() != right.size()) throw std::invalid_argument("families have different index sets");
  if (!phi.is_invertible()) throw DomainError("conjugating map has a singular linear part");
  if (phi.truncation() < k) throw PrecisionError("map known below the requested order");
  ConjugacyReport report;
  report.order = k;
  for (std::size_t a = 0; a < left.size(); ++a) {
    if (left[a].truncation() < k || right[a].truncation() < k) {
      throw PrecisionError("member " + std::to_string(a + 1) + " known below the requested order");
    }
    const FormalMap<S> moved = transport(left[a]);
    if (moved.size() != right[a].size()) throw DimensionMismatch("member " + std::to_string(a + 1));
    bool ok = true;
    for (std::size_t c = 0; c < moved.size() && ok; ++c) {
      const auto diff = right[a][c] - moved[c];
      if (!diff.vanishes_to_order(k)) {
        ok = false;
        if (!report.first_failure) report.first_failure = ConjugacyFailure{a, c, *diff.order()};
      }
    }
    report.indices.push_back(ok);
    if (!ok) report.holds = false;
  }
  return report;
}

}  // namespace detail

/// For every index, G_a - Phi o F_a o Phi^{-1} has no term of degree < k.
template <ExactField S>
ConjugacyReport is_order_k_conjugacy(const FormalMap<S>& phi, const std::vector<SelfMapGerm<S>>& left,
                                     const std::vector<SelfMapGerm<S>>& right, unsigned k) {
  return detail::order_k_agreement(left, right, phi, k,
                                   [&](const FormalMap<S>& f) { return conjugate(f, phi); });
}

/// For every index, xi'_a - Phi_*(xi_a o Phi^{-1}) has no term of degree < k.
template <ExactField S>
ConjugacyReport is_order_k_field_equivalence(const FormalMap<S>& phi, const std::vector<VectorFieldGerm<S>>& left,
                                             const std::vector<VectorFieldGerm<S>>& right, unsigned k) {
  std::vector<FormalMap<S>> l, r;
  for (const auto& x : left) l.push_back(x.as_map());
  for (const auto& x : right) r.push_back(x.as_map());
  return detail::order_k_agreement(l, r, phi, k, [&](const FormalMap<S>& f) {
    return pushforward_field(VectorFieldGerm<S>(f), phi).as_map();
  });
}

}  // namespace germ
