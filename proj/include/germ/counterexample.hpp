#pragma once

// Two sets of plane curves {w = phi_{m,n}(z)} and {w = psi_{m,n}(z)} that
// agree to any finite order under explicit maps, yet share no tangent
// pattern that a formal equivalence would need.
//
//   S_m = 2^m Z + c_m,  c_1 = 1,  c_{m+1} = a_m if |a_m| > b_m else b_m,
//   where a_m < 0 < b_m are the elements of S_m closest to 0;
//   phi_{m,n}(z) = 2^m n z + z^{m+1},  psi_{m,n}(z) = (2^m n + c_m) z + z^{m+1}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "germ/equivalence.hpp"
#include "germ/formal_map.hpp"
#include "germ/series.hpp"

namespace germ::counterexample {

class ShiftSequence {
 public:
  static constexpr unsigned kMaxLevels = 48;

  unsigned length() const { return static_cast<unsigned>(c_.size()); }
  /// c_m, 1 <= m <= length().
  std::int64_t shift(unsigned m) const { return c_.at(m - 1); }
  /// a_m: the largest negative element of S_m.
  std::int64_t max_negative(unsigned m) const { return a_.at(m - 1); }
  /// b_m: the smallest positive element of S_m.
  std::int64_t min_positive(unsigned m) const { return b_.at(m - 1); }
  static std::int64_t modulus(unsigned m) { return std::int64_t{1} << m; }
  /// t in S_m.
  bool contains(unsigned m, std::int64_t t) const;

 private:
  friend ShiftSequence build_shift_sequence(unsigned levels);
  std::vector<std::int64_t> c_, a_, b_;
};

/// c_1..c_M by the nearest-to-zero induction. Throws for M = 0 or M > kMaxLevels.
ShiftSequence build_shift_sequence(unsigned levels);

/// Least m <= length() with t not in S_m; nullopt if t lies in every computed level.
std::optional<unsigned> membership_horizon(std::int64_t t, const ShiftSequence& seq);

struct SequenceCheck {
  std::string name;
  bool holds;
  std::string detail;
};

/// c_1 = 1, b_m - a_m = 2^m, 2^{m-1} <= |c_{m+1}| < 2^m, and on the integer
/// window |l| <= window: S_{m+1} inside S_m and |l| >= 2^{m-2} on S_m.
std::vector<SequenceCheck> check_sequence(const ShiftSequence& seq, std::int64_t window);

enum class CurveFamily { phi, psi };

inline const char* to_string(CurveFamily f) { return f == CurveFamily::phi ? "phi" : "psi"; }

struct CurveSpec {
  CurveFamily family;
  unsigned level;
  std::int64_t index;
  /// Coefficient of z in the graph function.
  std::int64_t tangent;
  /// w - phi_{m,n}(z) or w - psi_{m,n}(z) in the variables (z, w).
  FormalSeries<GaussianRational> series;

  std::string label() const;
};

/// Exact defining series; requires K >= m + 1. The sequence supplies c_m.
CurveSpec curve(CurveFamily family, unsigned level, std::int64_t index, unsigned truncation,
                const ShiftSequence& seq);

/// Same curve known only to degree K (drops z^{m+1} when K <= m).
CurveSpec curve_jet(CurveFamily family, unsigned level, std::int64_t index, unsigned truncation,
                    const ShiftSequence& seq);

/// (z, w) -> (z, w + c z).
FormalMap<GaussianRational> shear_map(std::int64_t c, unsigned truncation);

struct VerifyOptions {
  /// c_k of the map (z, w) -> (z, w + c_k z).
  unsigned shift_level = 1;
  unsigned m_max = 1;
  std::int64_t n_max = 1;
  unsigned truncation = 3;
  /// Equivalence order tested; 0 means shift_level + 2.
  unsigned order = 0;
  /// Work with the real ideals generated by Re and Im in R[[x1, y1, x2, y2]].
  bool realify = false;
  /// Bucket candidates by their low-degree jet before the exact pairwise test.
  bool prefilter = true;
};

struct CurveMatch {
  std::string source;
  std::string target;
};

struct CurveFailure {
  std::string source;
  /// "boundary": a partner exists beyond the searched window;
  /// "genuine": no curve of any computed level is a partner.
  std::string kind;
  std::string partner_outside_window;
};

struct VerifyReport {
  VerifyOptions options;
  std::int64_t shift = 0;
  unsigned order = 0;
  bool holds = false;
  std::size_t left_members = 0;
  std::size_t right_members = 0;
  std::size_t target_window_members = 0;
  std::size_t pair_checks = 0;
  /// phi-curves of the base window and their psi partners.
  std::vector<CurveMatch> forward;
  /// psi-curves of the base window and their phi partners.
  std::vector<CurveMatch> backward;
  std::vector<CurveFailure> failures;
};

/// Half-width of the partner window searched at level m: at least
/// n_max + 2^{m_max}, and wide enough that any curve of the base window whose
/// transported tangent equals a level-m tangent finds that index inside.
std::int64_t target_window(unsigned level, unsigned m_max, std::int64_t n_max);

/// Applies the general set-mode checker in both directions: each phi-curve
/// with m <= m_max, |n| <= n_max needs a psi-partner, and each such psi-curve
/// needs a phi-partner, partners searched on the inflated window.
VerifyReport verify_finite_order_equivalence(const VerifyOptions& options);

struct ObstructionReport {
  unsigned m_max = 0;
  std::int64_t window = 0;
  /// psi_{m,n} has tangent 2^m n + c_m in S_m (checked on the window of n).
  bool psi_tangents_in_levels = true;
  /// phi_{m,0} are all tangent to w = 0.
  bool phi_tangents_zero = true;
  /// 0 is in no S_m, m <= m_max.
  bool zero_excluded = true;
  /// Every |t| <= window leaves some S_m with m <= m_max.
  bool horizons_bounded = true;
  unsigned max_horizon = 0;
  std::int64_t max_horizon_at = 0;
  bool holds() const { return psi_tangents_in_levels && phi_tangents_zero && zero_excluded && horizons_bounded; }
};

ObstructionReport verify_tangent_obstruction(unsigned m_max, const ShiftSequence& seq, std::int64_t window = 1000);

}  // namespace germ::counterexample
