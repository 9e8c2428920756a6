#pragma once

// Finite-order equivalence of families and sets of ideals under a given
// formal invertible map Phi. Phi is an equivalence of order k between I and J
// when g o Phi lies in I + m^k for every g in J and f o Phi^{-1} lies in
// J + m^k for every f in I. Family mode matches members by index; set mode
// asks every member on either side for some partner on the other.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "germ/formal_map.hpp"
#include "germ/ideal.hpp"

namespace germ {

enum class FamilyMode { family, set };

inline const char* to_string(FamilyMode m) { return m == FamilyMode::family ? "family" : "set"; }

template <ExactField S>
class GermFamily {
 public:
  GermFamily() = default;
  GermFamily(FamilyMode mode, std::vector<std::string> labels, std::vector<IdealPresentation<S>> members)
      : mode_(mode), labels_(std::move(labels)), members_(std::move(members)) {
    if (labels_.size() != members_.size()) throw std::invalid_argument("one label per family member");
    if (members_.empty()) return;
    dim_ = members_.front().dimension();
    for (const auto& m : members_) {
      if (m.dimension() != dim_) throw DimensionMismatch("family members in different dimensions");
      trunc_ = std::min(trunc_, m.truncation());
    }
  }

  FamilyMode mode() const { return mode_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<IdealPresentation<S>>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t dimension() const { return dim_; }
  unsigned truncation() const { return trunc_; }

 private:
  FamilyMode mode_ = FamilyMode::family;
  std::vector<std::string> labels_;
  std::vector<IdealPresentation<S>> members_;
  std::size_t dim_ = 0;
  unsigned trunc_ = IdealPresentation<S>::kExact;
};

/// Phi^* I: the generators composed with Phi.
template <ExactField S>
IdealPresentation<S> pullback(const IdealPresentation<S>& ideal, const FormalMap<S>& phi) {
  if (phi.size() != ideal.dimension()) throw DimensionMismatch("pullback map");
  Composer<S> sub(phi);
  std::vector<FormalSeries<S>> gens;
  for (const auto& g : ideal.generators()) gens.push_back(sub(g));
  return IdealPresentation<S>(phi.dimension(), std::move(gens));
}

/// Ideal in R[[x, y]] generated by the real and imaginary parts of the generators.
inline IdealPresentation<Rational> realify(const IdealPresentation<GaussianRational>& ideal) {
  std::vector<FormalSeries<Rational>> gens;
  for (const auto& g : ideal.generators()) {
    auto parts = realify(g);
    gens.push_back(std::move(parts.real));
    gens.push_back(std::move(parts.imag));
  }
  return IdealPresentation<Rational>(2 * ideal.dimension(), std::move(gens));
}

inline GermFamily<Rational> realify(const GermFamily<GaussianRational>& family) {
  std::vector<IdealPresentation<Rational>> members;
  for (const auto& m : family.members()) members.push_back(realify(m));
  return GermFamily<Rational>(family.mode(), family.labels(), std::move(members));
}

/// Which generator test failed for a (left, right) pair.
struct GeneratorFailure {
  enum class Direction {
    pullback,     // right generator o Phi not in left + m^k
    pushforward,  // left generator o Phi^{-1} not in right + m^k
  };
  Direction direction;
  std::size_t generator;
};

inline const char* to_string(GeneratorFailure::Direction d) {
  return d == GeneratorFailure::Direction::pullback ? "pullback" : "pushforward";
}

struct IndexVerdict {
  std::size_t index;
  bool holds;
  std::optional<GeneratorFailure> failure;
};

enum class Coverage { both, left_to_right, right_to_left };

struct MatchEntry {
  enum class Side { left, right };
  Side source_side;
  std::size_t source;
  /// Partner on the other side, or nullopt when none exists.
  std::optional<std::size_t> target;
};

struct EquivalenceReport {
  bool holds = true;
  unsigned order = 0;
  FamilyMode mode = FamilyMode::family;
  /// Family mode: one verdict per index.
  std::vector<IndexVerdict> indices;
  /// Set mode: one entry per member that had to find a partner.
  std::vector<MatchEntry> matching;
  /// Number of exact pairwise verdicts evaluated (set mode).
  std::size_t pair_checks = 0;
};

namespace detail {

template <ExactField S>
void require_order_precision(const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right,
                             unsigned k) {
  if (phi.truncation() < k || left.truncation() < k || right.truncation() < k) {
    throw PrecisionError("order-" + std::to_string(k) + " check needs map and generators known to degree " +
                         std::to_string(k));
  }
}

template <ExactField S>
void require_dimensions(const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right) {
  if (left.size() && right.size() && left.dimension() != right.dimension()) {
    throw DimensionMismatch("families in different dimensions");
  }
  if (!phi.is_square()) throw DimensionMismatch("equivalence map must have one component per variable");
  for (const auto* f : {&left, &right}) {
    if (f->size() && f->dimension() != phi.size()) throw DimensionMismatch("map and family dimensions differ");
  }
}

template <ExactField S>
std::string jet_key(const JetSpace<S>& js) {
  std::string key;
  for (const auto& row : js.basis()) {
    for (const auto& [a, c] : row.terms()) {
      key += a.to_string();
      key += c.to_string();
      key += ';';
    }
    key += '|';
  }
  return key;
}

/// Exact pairwise order-k verdicts between members of two families, with
/// every intermediate (transported generators, jet spaces) cached.
template <ExactField S>
class PairChecker {
 public:
  PairChecker(const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right, unsigned k)
      : phi_(phi),
        inverse_(map_invert(phi)),
        left_(left),
        right_(right),
        k_(k),
        pull_(phi_),
        push_(inverse_),
        left_jets_(left.size()),
        right_jets_(right.size()),
        pulled_(right.size()),
        pushed_(left.size()) {}

  unsigned order() const { return k_; }

  std::optional<GeneratorFailure> verdict(std::size_t alpha, std::size_t beta) {
    auto key = std::make_pair(alpha, beta);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ++checks_;
    std::optional<GeneratorFailure> out;
    if (k_ > 0) {
      const auto& pulled = pulled_generators(beta);
      const auto& lj = left_jet(alpha);
      for (std::size_t g = 0; g < pulled.size() && !out; ++g) {
        if (!lj.contains(pulled[g])) out = GeneratorFailure{GeneratorFailure::Direction::pullback, g};
      }
      if (!out) {
        const auto& pushed = pushed_generators(alpha);
        const auto& rj = right_jet(beta);
        for (std::size_t g = 0; g < pushed.size() && !out; ++g) {
          if (!rj.contains(pushed[g])) out = GeneratorFailure{GeneratorFailure::Direction::pushforward, g};
        }
      }
    }
    memo_.emplace(key, out);
    return out;
  }

  std::size_t checks() const { return checks_; }

  /// Low-degree invariant of (Phi^{-1})^* left_alpha + m^k; equal keys are
  /// necessary for a passing pair.
  std::string left_transported_key(std::size_t alpha) {
    return key_of(pushed_generators(alpha), left_.dimension());
  }
  std::string right_key(std::size_t beta) { return key_of(right_.members()[beta].generators(), right_.dimension()); }
  std::string right_transported_key(std::size_t beta) {
    return key_of(pulled_generators(beta), right_.dimension());
  }
  std::string left_key(std::size_t alpha) { return key_of(left_.members()[alpha].generators(), left_.dimension()); }

 private:
  unsigned key_degree() const { return std::min(1u, k_ - 1); }

  std::string key_of(const std::vector<FormalSeries<S>>& gens, std::size_t dim) const {
    JetSpace<S> js(dim, key_degree());
    const auto monos = monomials_up_to(dim, key_degree());
    for (const auto& g : gens) {
      for (const auto& m : monos) {
        if (m.degree() + *g.order() > key_degree()) break;
        js.insert(g.shifted(m, key_degree()));
      }
    }
    js.finalize();
    return jet_key(js);
  }

  const std::vector<FormalSeries<S>>& pulled_generators(std::size_t beta) {
    if (!pulled_[beta]) {
      std::vector<FormalSeries<S>> gens;
      for (const auto& g : right_.members()[beta].generators()) gens.push_back(pull_(g));
      pulled_[beta] = std::move(gens);
    }
    return *pulled_[beta];
  }
  const std::vector<FormalSeries<S>>& pushed_generators(std::size_t alpha) {
    if (!pushed_[alpha]) {
      std::vector<FormalSeries<S>> gens;
      for (const auto& g : left_.members()[alpha].generators()) gens.push_back(push_(g));
      pushed_[alpha] = std::move(gens);
    }
    return *pushed_[alpha];
  }
  const JetSpace<S>& left_jet(std::size_t alpha) {
    if (!left_jets_[alpha]) left_jets_[alpha] = jet_ideal(left_.members()[alpha], k_ - 1);
    return *left_jets_[alpha];
  }
  const JetSpace<S>& right_jet(std::size_t beta) {
    if (!right_jets_[beta]) right_jets_[beta] = jet_ideal(right_.members()[beta], k_ - 1);
    return *right_jets_[beta];
  }

  FormalMap<S> phi_;
  FormalMap<S> inverse_;
  const GermFamily<S>& left_;
  const GermFamily<S>& right_;
  unsigned k_;
  Composer<S> pull_;
  Composer<S> push_;
  std::vector<std::optional<JetSpace<S>>> left_jets_;
  std::vector<std::optional<JetSpace<S>>> right_jets_;
  std::vector<std::optional<std::vector<FormalSeries<S>>>> pulled_;
  std::vector<std::optional<std::vector<FormalSeries<S>>>> pushed_;
  std::map<std::pair<std::size_t, std::size_t>, std::optional<GeneratorFailure>> memo_;
  std::size_t checks_ = 0;
};

}  // namespace detail

/// Set-mode matching. Each source member is paired with the lowest-indexed
/// member on the other side passing the exact pairwise order-k test. With
/// `prefilter`, candidates are first bucketed by the reduced jet space of
/// degree min(1, k-1), an invariant every passing pair shares; the verdict
/// itself is always the exact pairwise test.
template <ExactField S>
EquivalenceReport match_sets(const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right,
                             unsigned k, Coverage coverage = Coverage::both, bool prefilter = true) {
  detail::require_dimensions(phi, left, right);
  if (!phi.is_invertible()) throw DomainError("equivalence map has a singular linear part");
  detail::require_order_precision(phi, left, right, k);
  EquivalenceReport report;
  report.order = k;
  report.mode = FamilyMode::set;
  detail::PairChecker<S> checker(phi, left, right, k);
  const bool filter = prefilter && k > 0;

  auto search = [&](MatchEntry::Side side, std::size_t n_sources, std::size_t n_targets, auto source_key,
                    auto target_key, auto pair_verdict) {
    std::unordered_map<std::string, std::vector<std::size_t>> buckets;
    if (filter) {
      for (std::size_t t = 0; t < n_targets; ++t) buckets[target_key(t)].push_back(t);
    }
    for (std::size_t s = 0; s < n_sources; ++s) {
      MatchEntry entry{side, s, std::nullopt};
      auto try_target = [&](std::size_t t) {
        if (!pair_verdict(s, t)) {
          entry.target = t;
          return true;
        }
        return false;
      };
      if (filter) {
        auto it = buckets.find(source_key(s));
        if (it != buckets.end()) {
          for (std::size_t t : it->second) {
            if (try_target(t)) break;
          }
        }
      } else {
        for (std::size_t t = 0; t < n_targets; ++t) {
          if (try_target(t)) break;
        }
      }
      if (!entry.target) report.holds = false;
      report.matching.push_back(entry);
    }
  };

  if (coverage != Coverage::right_to_left) {
    search(
        MatchEntry::Side::left, left.size(), right.size(),
        [&](std::size_t a) { return checker.left_transported_key(a); },
        [&](std::size_t b) { return checker.right_key(b); },
        [&](std::size_t a, std::size_t b) { return checker.verdict(a, b); });
  }
  if (coverage != Coverage::left_to_right) {
    search(
        MatchEntry::Side::right, right.size(), left.size(),
        [&](std::size_t b) { return checker.right_transported_key(b); },
        [&](std::size_t a) { return checker.left_key(a); },
        [&](std::size_t b, std::size_t a) { return checker.verdict(a, b); });
  }
  report.pair_checks = checker.checks();
  return report;
}

/// Order-k equivalence of two families (index-matched) or two sets.
template <ExactField S>
EquivalenceReport is_order_k_equivalence(const FormalMap<S>& phi, const GermFamily<S>& left,
                                         const GermFamily<S>& right, unsigned k) {
  if (left.mode() != right.mode()) throw std::invalid_argument("mode mismatch between families");
  if (left.mode() == FamilyMode::set) return match_sets(phi, left, right, k);
  if (left.size() != right.size()) throw std::invalid_argument("families have different index sets");
  detail::require_dimensions(phi, left, right);
  if (!phi.is_invertible()) throw DomainError("equivalence map has a singular linear part");
  detail::require_order_precision(phi, left, right, k);
  EquivalenceReport report;
  report.order = k;
  report.mode = FamilyMode::family;
  detail::PairChecker<S> checker(phi, left, right, k);
  for (std::size_t a = 0; a < left.size(); ++a) {
    auto failure = checker.verdict(a, a);
    report.indices.push_back({a, !failure.has_value(), failure});
    if (failure) report.holds = false;
  }
  report.pair_checks = checker.checks();
  return report;
}

/// True iff for every index the pullback by the k-jet Lambda maps
/// j^k right_alpha onto j^k left_alpha (equality of reduced jet spaces).
template <ExactField S>
bool jet_coset_membership(const FormalMap<S>& lambda, const GermFamily<S>& left, const GermFamily<S>& right) {
  const unsigned k = lambda.truncation();
  if (left.mode() != FamilyMode::family || right.mode() != FamilyMode::family) {
    throw std::invalid_argument("jet coset membership is defined for index-matched families");
  }
  if (left.size() != right.size()) throw std::invalid_argument("families have different index sets");
  if (!lambda.is_invertible()) throw DomainError("jet is not invertible");
  if (left.truncation() < k || right.truncation() < k) throw PrecisionError("families known below the jet order");
  for (std::size_t a = 0; a < left.size(); ++a) {
    if (!(jet_ideal(pullback(right.members()[a], lambda), k) == jet_ideal(left.members()[a], k))) return false;
  }
  return true;
}

struct HorizonReport {
  unsigned bound = 0;
  /// verdicts[k - 1] is the order-k verdict.
  std::vector<bool> verdicts;
  std::optional<unsigned> first_failure;
};

/// Order-k verdicts for k = 1..K, reported individually.
template <ExactField S>
HorizonReport equivalence_horizon(const GermFamily<S>& left, const GermFamily<S>& right, const FormalMap<S>& phi,
                                  unsigned bound) {
  HorizonReport report;
  report.bound = bound;
  for (unsigned k = 1; k <= bound; ++k) {
    const bool ok = is_order_k_equivalence(phi, left, right, k).holds;
    report.verdicts.push_back(ok);
    if (!ok && !report.first_failure) report.first_failure = k;
  }
  return report;
}

}  // namespace germ
