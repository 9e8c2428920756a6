#pragma once

// Ideals given by finitely many generators, and their jet ideals
// j^d I = { j^d g : g in I } as exact linear subspaces of the polynomials of
// degree <= d. A jet space is kept in reduced row echelon form with pivots at
// the smallest exponent of each row, which makes it canonical: two jet spaces
// are equal iff their rows are.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "germ/formal_map.hpp"
#include "germ/monomial.hpp"
#include "germ/series.hpp"

namespace germ {

template <ExactField S>
class IdealPresentation {
 public:
  static constexpr unsigned kExact = std::numeric_limits<unsigned>::max();

  IdealPresentation() = default;

  /// Zero generators are dropped; an empty list presents the zero ideal.
  IdealPresentation(std::size_t dimension, std::vector<FormalSeries<S>> generators)
      : dim_(dimension) {
    for (auto& g : generators) {
      if (g.dimension() != dim_) throw DimensionMismatch("generator dimension");
      trunc_ = std::min(trunc_, g.truncation());
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  static IdealPresentation zero(std::size_t dimension) { return IdealPresentation(dimension, {}); }

  std::size_t dimension() const { return dim_; }
  const std::vector<FormalSeries<S>>& generators() const { return gens_; }
  bool is_zero_ideal() const { return gens_.empty(); }
  /// Smallest truncation among the given generators (kExact when there are none).
  unsigned truncation() const { return trunc_; }

 private:
  std::size_t dim_ = 0;
  std::vector<FormalSeries<S>> gens_;
  unsigned trunc_ = kExact;
};

template <ExactField S>
class JetSpace {
 public:
  using Terms = typename FormalSeries<S>::Terms;

  JetSpace() = default;
  JetSpace(std::size_t dimension, unsigned degree) : dim_(dimension), degree_(degree) {}

  std::size_t dimension() const { return dim_; }
  unsigned degree() const { return degree_; }
  /// Rows with strictly increasing pivots, leading coefficient 1, and no
  /// row containing another row's pivot.
  const std::vector<FormalSeries<S>>& basis() const { return rows_; }
  std::size_t rank() const { return rows_.size(); }

  std::vector<MultiIndex> pivots() const {
    std::vector<MultiIndex> out;
    for (const auto& r : rows_) out.push_back(r.terms().begin()->first);
    return out;
  }

  /// Remainder of j^d f after eliminating every pivot term; zero iff
  /// j^d f lies in the span.
  FormalSeries<S> reduce(const FormalSeries<S>& f) const {
    check(f);
    Terms t = f.truncated(degree_).terms();
    eliminate(t, 0);
    return FormalSeries<S>::from_terms(dim_, degree_, std::move(t));
  }

  bool contains(const FormalSeries<S>& f) const { return reduce(f).is_zero(); }

  /// Adds a polynomial of degree <= d to the spanning set.
  void insert(const FormalSeries<S>& f) {
    check(f);
    Terms t = f.truncated(degree_).terms();
    eliminate(t, 0);
    finalized_ = false;
    if (t.empty()) return;
    const S inv = S(1) / t.begin()->second;
    for (auto& [a, c] : t) c *= inv;
    const MultiIndex lead = t.begin()->first;
    pivot_.emplace(lead, rows_.size());
    rows_.push_back(FormalSeries<S>::from_terms(dim_, degree_, std::move(t)));
  }

  /// Back-substitution into reduced row echelon form, rows sorted by pivot.
  void finalize() {
    if (finalized_) return;
    std::vector<FormalSeries<S>> sorted;
    sorted.reserve(rows_.size());
    std::map<MultiIndex, std::size_t, MonomialLess> order;
    for (const auto& [p, idx] : pivot_) order.emplace(p, idx);
    for (const auto& [p, idx] : order) sorted.push_back(std::move(rows_[idx]));
    rows_ = std::move(sorted);
    pivot_.clear();
    for (std::size_t i = 0; i < rows_.size(); ++i) pivot_.emplace(rows_[i].terms().begin()->first, i);
    for (std::size_t i = rows_.size(); i-- > 0;) {
      Terms t = rows_[i].terms();
      eliminate(t, 1);
      rows_[i] = FormalSeries<S>::from_terms(dim_, degree_, std::move(t));
    }
    finalized_ = true;
  }

  friend bool operator==(const JetSpace& a, const JetSpace& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.rows_ == b.rows_;
  }

 private:
  void check(const FormalSeries<S>& f) const {
    if (f.dimension() != dim_) throw DimensionMismatch("series against jet space");
    if (f.truncation() < degree_) {
      throw PrecisionError("series known to degree " + std::to_string(f.truncation()) +
                           " tested against a degree-" + std::to_string(degree_) + " jet space");
    }
  }

  // Eliminates pivot terms of t in ascending order, skipping the first
  // `skip` terms. Subtracting a row only creates terms above its pivot.
  void eliminate(Terms& t, std::size_t skip) const {
    auto it = t.begin();
    for (std::size_t s = 0; s < skip && it != t.end(); ++s) ++it;
    while (it != t.end()) {
      auto p = pivot_.find(it->first);
      if (p == pivot_.end()) {
        ++it;
        continue;
      }
      const MultiIndex key = it->first;
      const S factor = it->second;
      for (const auto& [a, c] : rows_[p->second].terms()) {
        auto [jt, inserted] = t.try_emplace(a, S(0));
        jt->second -= factor * c;
        if (is_zero(jt->second)) t.erase(jt);
      }
      it = t.upper_bound(key);
    }
  }

  std::size_t dim_ = 0;
  unsigned degree_ = 0;
  std::vector<FormalSeries<S>> rows_;
  std::map<MultiIndex, std::size_t, MonomialLess> pivot_;
  bool finalized_ = true;
};

template <ExactField S>
void require_truncation(const IdealPresentation<S>& ideal, unsigned d, const char* what) {
  if (ideal.truncation() < d) {
    throw PrecisionError(std::string(what) + ": generators known to degree " +
                         std::to_string(ideal.truncation()) + ", need " + std::to_string(d));
  }
}

/// j^d I, spanned by the truncations j^d(t^m g) over generators g and |m| <= d.
template <ExactField S>
JetSpace<S> jet_ideal(const IdealPresentation<S>& ideal, unsigned d) {
  require_truncation(ideal, d, "jet ideal");
  JetSpace<S> js(ideal.dimension(), d);
  const auto monos = monomials_up_to(ideal.dimension(), d);
  for (const auto& g : ideal.generators()) {
    const unsigned ord = *g.order();
    for (const auto& m : monos) {
      if (m.degree() + ord > d) break;
      js.insert(g.shifted(m, d));
    }
  }
  js.finalize();
  return js;
}

/// Diagram of initial exponents, exact in degrees <= d.
template <ExactField S>
Staircase diagram(const IdealPresentation<S>& ideal, unsigned d) {
  const auto js = jet_ideal(ideal, d);
  const auto p = js.pivots();
  return vertex_extraction(ideal.dimension(), p);
}

/// f in I + m^k, decided on degrees <= k - 1.
template <ExactField S>
bool jet_membership(const FormalSeries<S>& f, const IdealPresentation<S>& ideal, unsigned k) {
  if (f.dimension() != ideal.dimension()) throw DimensionMismatch("series against ideal");
  if (k == 0) return true;
  if (f.truncation() < k - 1) {
    throw PrecisionError("series known to degree " + std::to_string(f.truncation()) +
                         ", membership modulo m^" + std::to_string(k) + " needs " +
                         std::to_string(k - 1));
  }
  return jet_ideal(ideal, k - 1).contains(f);
}

struct MembershipVerdict {
  /// Passed every jet test k = 1..K. Evidence only, never a proof of f in I.
  bool member_up_to = true;
  /// First k with f not in I + m^k; certifies f not in I.
  unsigned witness = 0;
  unsigned bound = 0;
};

template <ExactField S>
MembershipVerdict membership_up_to(const FormalSeries<S>& f, const IdealPresentation<S>& ideal,
                                   unsigned bound) {
  if (f.dimension() != ideal.dimension()) throw DimensionMismatch("series against ideal");
  if (f.truncation() < bound) throw PrecisionError("series truncation below membership bound");
  require_truncation(ideal, bound, "membership");
  for (unsigned k = 1; k <= bound; ++k) {
    if (!jet_ideal(ideal, k - 1).contains(f)) return {false, k, bound};
  }
  return {true, 0, bound};
}

}  // namespace germ
