#include "germ/counterexample.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace germ::counterexample {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t checked_tangent(unsigned level, std::int64_t index, std::int64_t shift) {
  std::int64_t scaled = 0;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(ShiftSequence::modulus(level), index, &scaled) ||
      __builtin_add_overflow(scaled, shift, &out)) {
    throw std::overflow_error("curve tangent coefficient overflows 64 bits");
  }
  return out;
}

std::string curve_label(CurveFamily family, unsigned level, std::int64_t index) {
  return std::string(to_string(family)) + "(" + std::to_string(level) + "," + std::to_string(index) + ")";
}

}  // namespace

bool ShiftSequence::contains(unsigned m, std::int64_t t) const {
  return floor_mod(t - shift(m), modulus(m)) == 0;
}

ShiftSequence build_shift_sequence(unsigned levels) {
  if (levels == 0) throw std::invalid_argument("shift sequence needs at least one level");
  if (levels > ShiftSequence::kMaxLevels) {
    throw std::invalid_argument("at most " + std::to_string(ShiftSequence::kMaxLevels) + " levels");
  }
  ShiftSequence seq;
  seq.c_.push_back(1);
  for (unsigned m = 1; m <= levels; ++m) {
    const std::int64_t mod = ShiftSequence::modulus(m);
    const std::int64_t r = floor_mod(seq.c_.back(), mod);
    if (r == 0) throw std::logic_error("0 entered S_" + std::to_string(m));
    seq.b_.push_back(r);
    seq.a_.push_back(r - mod);
    if (m < levels) {
      const std::int64_t a = r - mod;
      seq.c_.push_back(-a > r ? a : r);
    }
  }
  return seq;
}

std::optional<unsigned> membership_horizon(std::int64_t t, const ShiftSequence& seq) {
  for (unsigned m = 1; m <= seq.length(); ++m) {
    if (!seq.contains(m, t)) return m;
  }
  return std::nullopt;
}

std::vector<SequenceCheck> check_sequence(const ShiftSequence& seq, std::int64_t window) {
  std::vector<SequenceCheck> out;
  const unsigned len = seq.length();

  out.push_back({"c_1 = 1", seq.shift(1) == 1, "c_1 = " + std::to_string(seq.shift(1))});

  {
    bool ok = true;
    std::string detail = "all levels";
    for (unsigned m = 1; m <= len; ++m) {
      if (seq.min_positive(m) - seq.max_negative(m) != ShiftSequence::modulus(m) || seq.max_negative(m) >= 0 ||
          seq.min_positive(m) <= 0) {
        ok = false;
        detail = "fails at m = " + std::to_string(m);
        break;
      }
    }
    out.push_back({"b_m - a_m = 2^m", ok, detail});
  }

  {
    bool ok = true;
    std::string detail = "all levels";
    for (unsigned m = 1; m < len; ++m) {
      const std::int64_t c = std::llabs(seq.shift(m + 1));
      if (c < ShiftSequence::modulus(m - 1) || c >= ShiftSequence::modulus(m)) {
        ok = false;
        detail = "fails at m = " + std::to_string(m);
        break;
      }
    }
    out.push_back({"2^(m-1) <= |c_(m+1)| < 2^m", ok, detail});
  }

  auto for_each_in_level = [&](unsigned m, auto&& fn) {
    const std::int64_t mod = ShiftSequence::modulus(m);
    std::int64_t l = -window + floor_mod(seq.shift(m) + window, mod);
    for (; l <= window; l += mod) {
      if (!fn(l)) return false;
    }
    return true;
  };

  {
    bool ok = true;
    std::string detail = "|l| <= " + std::to_string(window);
    for (unsigned m = 1; m < len && ok; ++m) {
      ok = for_each_in_level(m + 1, [&](std::int64_t l) { return seq.contains(m, l); });
      if (!ok) detail = "S_" + std::to_string(m + 1) + " not inside S_" + std::to_string(m);
    }
    out.push_back({"S_(m+1) inside S_m", ok, detail});
  }

  {
    bool ok = true;
    std::string detail = "|l| <= " + std::to_string(window);
    for (unsigned m = 1; m <= len && ok; ++m) {
      ok = for_each_in_level(m, [&](std::int64_t l) { return 4 * std::llabs(l) >= ShiftSequence::modulus(m); });
      if (!ok) detail = "fails at m = " + std::to_string(m);
    }
    out.push_back({"|l| >= 2^(m-2) on S_m", ok, detail});
  }
  return out;
}

std::string CurveSpec::label() const { return curve_label(family, level, index); }

CurveSpec curve(CurveFamily family, unsigned level, std::int64_t index, unsigned truncation,
                const ShiftSequence& seq) {
  if (level == 0) throw std::invalid_argument("curve level starts at 1");
  if (truncation < level + 1) {
    throw PrecisionError("curve of level " + std::to_string(level) + " needs truncation >= " +
                         std::to_string(level + 1));
  }
  const std::int64_t shift = family == CurveFamily::psi ? seq.shift(level) : 0;
  CurveSpec spec{family, level, index, checked_tangent(level, index, shift), FormalSeries<GaussianRational>(2, truncation)};
  spec.series.add_term(MultiIndex{0, 1}, GaussianRational(1));
  spec.series.add_term(MultiIndex{1, 0}, GaussianRational(Rational(-spec.tangent)));
  spec.series.add_term(MultiIndex{level + 1, 0}, GaussianRational(-1));
  return spec;
}

CurveSpec curve_jet(CurveFamily family, unsigned level, std::int64_t index, unsigned truncation,
                    const ShiftSequence& seq) {
  CurveSpec spec = curve(family, level, index, std::max(truncation, level + 1), seq);
  spec.series = spec.series.truncated(truncation);
  return spec;
}

FormalMap<GaussianRational> shear_map(std::int64_t c, unsigned truncation) {
  auto z = FormalSeries<GaussianRational>::variable(2, truncation, 0);
  auto w = FormalSeries<GaussianRational>::variable(2, truncation, 1);
  return FormalMap<GaussianRational>({z, w + z * GaussianRational(Rational(c))});
}

std::int64_t target_window(unsigned level, unsigned top_level, std::int64_t n_max) {
  const unsigned spread = top_level > level ? top_level - level : 0;
  return std::max(n_max + ShiftSequence::modulus(top_level), (n_max + 1) * ShiftSequence::modulus(spread) + 1);
}

namespace {

template <ExactField S>
IdealPresentation<S> curve_ideal(const CurveSpec& spec) {
  IdealPresentation<GaussianRational> holo(2, {spec.series});
  if constexpr (std::same_as<S, GaussianRational>) {
    return holo;
  } else {
    return realify(holo);
  }
}

template <ExactField S>
FormalMap<S> field_map(const FormalMap<GaussianRational>& phi) {
  if constexpr (std::same_as<S, GaussianRational>) {
    return phi;
  } else {
    return realify(phi);
  }
}

struct CurveSet {
  std::vector<CurveSpec> curves;
  std::vector<std::string> labels;
};

CurveSet build_set(CurveFamily family, unsigned m_max, unsigned truncation, const ShiftSequence& seq,
                   auto&& half_width) {
  CurveSet set;
  for (unsigned m = 1; m <= m_max; ++m) {
    const std::int64_t w = half_width(m);
    for (std::int64_t n = -w; n <= w; ++n) {
      set.curves.push_back(curve_jet(family, m, n, truncation, seq));
      set.labels.push_back(set.curves.back().label());
    }
  }
  return set;
}

template <ExactField S>
GermFamily<S> to_family(const CurveSet& set) {
  std::vector<IdealPresentation<S>> members;
  members.reserve(set.curves.size());
  for (const auto& c : set.curves) members.push_back(curve_ideal<S>(c));
  return GermFamily<S>(FamilyMode::set, set.labels, std::move(members));
}

template <ExactField S>
bool pair_passes(const FormalMap<S>& phi, const CurveSpec& left, const CurveSpec& right, unsigned order) {
  GermFamily<S> l(FamilyMode::family, {left.label()}, {curve_ideal<S>(left)});
  GermFamily<S> r(FamilyMode::family, {right.label()}, {curve_ideal<S>(right)});
  return is_order_k_equivalence(phi, l, r, order).holds;
}

template <ExactField S>
void run_verification(VerifyReport& report, const ShiftSequence& seq, const CurveSet& phi_base,
                      const CurveSet& psi_base, const CurveSet& phi_wide, const CurveSet& psi_wide) {
  const auto& opt = report.options;
  const FormalMap<S> phi = field_map<S>(shear_map(report.shift, opt.truncation));
  const auto phi_base_f = to_family<S>(phi_base);
  const auto psi_base_f = to_family<S>(psi_base);
  const auto phi_wide_f = to_family<S>(phi_wide);
  const auto psi_wide_f = to_family<S>(psi_wide);

  const auto fwd = match_sets(phi, phi_base_f, psi_wide_f, report.order, Coverage::left_to_right, opt.prefilter);
  const auto bwd = match_sets(phi, phi_wide_f, psi_base_f, report.order, Coverage::right_to_left, opt.prefilter);
  report.pair_checks = fwd.pair_checks + bwd.pair_checks;
  report.holds = fwd.holds && bwd.holds;

  // Partner search for a failing curve over every computed level, solving
  // the tangent equation for the index. Diagnostic only.
  auto classify = [&](const CurveSpec& source, bool forward) {
    CurveFailure failure{source.label(), "genuine", ""};
    const std::int64_t moved = forward ? source.tangent + report.shift : source.tangent - report.shift;
    const CurveFamily other = forward ? CurveFamily::psi : CurveFamily::phi;
    for (unsigned m = 1; m <= seq.length(); ++m) {
      const std::int64_t base = other == CurveFamily::psi ? seq.shift(m) : 0;
      if (floor_mod(moved - base, ShiftSequence::modulus(m)) != 0) continue;
      const std::int64_t n = (moved - base) / ShiftSequence::modulus(m);
      const CurveSpec candidate = curve_jet(other, m, n, opt.truncation, seq);
      const bool ok = forward ? pair_passes<S>(phi, source, candidate, report.order)
                              : pair_passes<S>(phi, candidate, source, report.order);
      if (ok) {
        failure.kind = "boundary";
        failure.partner_outside_window = candidate.label();
        break;
      }
    }
    return failure;
  };

  for (const auto& e : fwd.matching) {
    const auto& src = phi_base.curves[e.source];
    if (e.target) {
      report.forward.push_back({src.label(), psi_wide.labels[*e.target]});
    } else {
      report.forward.push_back({src.label(), ""});
      report.failures.push_back(classify(src, true));
    }
  }
  for (const auto& e : bwd.matching) {
    const auto& src = psi_base.curves[e.source];
    if (e.target) {
      report.backward.push_back({src.label(), phi_wide.labels[*e.target]});
    } else {
      report.backward.push_back({src.label(), ""});
      report.failures.push_back(classify(src, false));
    }
  }
}

}  // namespace

VerifyReport verify_finite_order_equivalence(const VerifyOptions& options) {
  if (options.shift_level == 0 || options.m_max == 0) throw std::invalid_argument("levels start at 1");
  if (options.n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  const unsigned top = std::max(options.m_max, options.shift_level);
  if (top + 24 > ShiftSequence::kMaxLevels) throw std::invalid_argument("too many levels requested");

  VerifyReport report;
  report.options = options;
  report.order = options.order ? options.order : options.shift_level + 2;
  const ShiftSequence seq = build_shift_sequence(top + 24);
  report.shift = seq.shift(options.shift_level);

  const auto base = [&](unsigned) { return options.n_max; };
  const auto wide = [&](unsigned m) { return target_window(m, top, options.n_max); };
  const CurveSet phi_base = build_set(CurveFamily::phi, options.m_max, options.truncation, seq, base);
  const CurveSet psi_base = build_set(CurveFamily::psi, options.m_max, options.truncation, seq, base);
  const CurveSet phi_wide = build_set(CurveFamily::phi, options.m_max, options.truncation, seq, wide);
  const CurveSet psi_wide = build_set(CurveFamily::psi, options.m_max, options.truncation, seq, wide);
  report.left_members = phi_base.curves.size();
  report.right_members = psi_base.curves.size();
  report.target_window_members = psi_wide.curves.size();

  if (options.realify) {
    run_verification<Rational>(report, seq, phi_base, psi_base, phi_wide, psi_wide);
  } else {
    run_verification<GaussianRational>(report, seq, phi_base, psi_base, phi_wide, psi_wide);
  }
  return report;
}

ObstructionReport verify_tangent_obstruction(unsigned m_max, const ShiftSequence& seq, std::int64_t window) {
  if (seq.length() < m_max) throw std::invalid_argument("sequence shorter than m_max");
  ObstructionReport report;
  report.m_max = m_max;
  report.window = window;
  constexpr std::int64_t kIndexWindow = 32;
  const MultiIndex z{1, 0};
  for (unsigned m = 1; m <= m_max; ++m) {
    for (std::int64_t n = -kIndexWindow; n <= kIndexWindow; ++n) {
      const CurveSpec c = curve(CurveFamily::psi, m, n, m + 1, seq);
      const GaussianRational coef = -c.series.coefficient(z);
      if (coef != GaussianRational(Rational(c.tangent)) || !seq.contains(m, c.tangent)) {
        report.psi_tangents_in_levels = false;
      }
    }
    if (!curve(CurveFamily::phi, m, 0, m + 1, seq).series.coefficient(z).is_zero()) report.phi_tangents_zero = false;
    if (seq.contains(m, 0)) report.zero_excluded = false;
  }
  for (std::int64_t t = -window; t <= window; ++t) {
    const auto h = membership_horizon(t, seq);
    if (!h || *h > m_max) {
      report.horizons_bounded = false;
      continue;
    }
    if (*h > report.max_horizon) {
      report.max_horizon = *h;
      report.max_horizon_at = t;
    }
  }
  return report;
}

}  // namespace germ::counterexample
