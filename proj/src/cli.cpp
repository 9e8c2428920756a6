#include "germ/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "germ/counterexample.hpp"
#include "germ/division.hpp"
#include "germ/dynamics.hpp"
#include "germ/equivalence.hpp"
#include "germ/expression.hpp"
#include "germ/ideal.hpp"
#include "germ/sampling.hpp"

namespace germ::cli {

namespace {

using Json = nlohmann::ordered_json;
using Scalar = GaussianRational;
using Series = FormalSeries<Scalar>;
using Map = FormalMap<Scalar>;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Result {
  Json report;
  int code = kOk;
};

struct Globals {
  std::string manifest_path;
  std::string vars;
  unsigned trunc = 10;
  unsigned order = 0;
  std::string mode = "family";
  std::string format = "text";
  std::uint64_t seed = 0;
  unsigned k_cap = 64;
  CLI::Option* vars_opt = nullptr;
  CLI::Option* trunc_opt = nullptr;
  CLI::Option* order_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* k_cap_opt = nullptr;
  Json manifest = Json::object();
};

/// Flag value when given on the command line, else the manifest entry, else the flag default.
template <class T>
T pick(const Globals& g, const char* key, const CLI::Option* opt, const T& flag) {
  if ((opt && opt->count()) || !g.manifest.contains(key)) return flag;
  return g.manifest.at(key).get<T>();
}

unsigned truncation(const Globals& g) {
  const unsigned k = pick(g, "truncation", g.trunc_opt, g.trunc);
  const unsigned cap = pick(g, "k_cap", g.k_cap_opt, g.k_cap);
  if (k > cap) {
    throw UsageError("truncation " + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
  }
  return k;
}

unsigned order(const Globals& g) { return pick(g, "order", g.order_opt, g.order); }

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void check_names(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& v : names) {
    const bool ident = !v.empty() && (std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') &&
                       std::all_of(v.begin(), v.end(), [](char c) {
                         return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                       });
    if (!ident || v == "i") throw UsageError("invalid variable name '" + v + "'");
    if (!seen.insert(v).second) throw UsageError("variable '" + v + "' declared twice");
  }
}

Series series(const std::string& text, const ParseContext& ctx) {
  try {
    return parse_series(text, ctx);
  } catch (const ParseError& e) {
    throw ExpressionError(std::string(e.what()) + " in \"" + text + "\"");
  }
}

Map map_expr(const std::string& text, const ParseContext& ctx) {
  try {
    return parse_map(text, ctx);
  } catch (const ParseError& e) {
    throw ExpressionError(std::string(e.what()) + " in \"" + text + "\"");
  }
}

/// "(g1, g2)" or a single expression.
std::vector<Series> generators(const std::string& text, const ParseContext& ctx) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '(') {
    try {
      return parse_tuple(text, ctx);
    } catch (const ParseError&) {
    }
  }
  return {series(text, ctx)};
}

ParseContext context(const Globals& g, const std::vector<std::string>& texts) {
  ParseContext ctx;
  ctx.truncation = truncation(g);
  ctx.exponent_cap = pick(g, "k_cap", g.k_cap_opt, g.k_cap);
  std::vector<std::pair<std::string, std::string>> defs;
  if (g.manifest.contains("definitions")) {
    for (const auto& [name, text] : g.manifest.at("definitions").items()) defs.emplace_back(name, text.get<std::string>());
  }
  if (g.vars_opt->count()) {
    ctx.variables = split_names(g.vars);
  } else if (g.manifest.contains("variables")) {
    ctx.variables = g.manifest.at("variables").get<std::vector<std::string>>();
  } else {
    std::vector<std::string> all = texts;
    std::set<std::string> reserved;
    for (const auto& [name, text] : defs) {
      all.push_back(text);
      reserved.insert(name);
    }
    ctx.variables = infer_variables(all, reserved);
    if (ctx.variables.empty()) ctx.variables = {"t1"};
  }
  check_names(ctx.variables);
  if (ctx.variables.size() > MultiIndex::kMaxVariables) throw UsageError("too many variables");
  for (const auto& [name, text] : defs) {
    if (std::find(ctx.variables.begin(), ctx.variables.end(), name) != ctx.variables.end()) {
      throw UsageError("definition '" + name + "' shadows a variable");
    }
    ctx.definitions[name] = series(text, ctx);
  }
  return ctx;
}

Json strings(const std::vector<Series>& fs, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(to_string(f, vars));
  return out;
}

Json header(const std::string& command, const ParseContext& ctx) {
  Json r;
  r["command"] = command;
  r["variables"] = ctx.variables;
  r["truncation"] = ctx.truncation;
  return r;
}

// ---------------------------------------------------------------- divide

struct DivideArgs {
  std::string f;
  std::vector<std::string> divisors;
  unsigned random = 0;
  CLI::Option* f_opt = nullptr;
  CLI::Option* g_opt = nullptr;
  CLI::Option* random_opt = nullptr;
};

Result random_division(const Globals& g, unsigned count) {
  const unsigned k = truncation(g);
  const auto seed = pick(g, "seed", g.seed_opt, g.seed);
  Rng rng(seed);
  std::size_t identity_failures = 0, support_failures = 0;
  for (unsigned t = 0; t < count; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const auto d = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    std::vector<FormalSeries<Rational>> divs;
    while (divs.size() < d) {
      auto h = random_series<Rational>(rng, n, k, {0, 3, 3, 5, 3});
      if (!h.is_zero()) divs.push_back(std::move(h));
    }
    const auto f = random_series<Rational>(rng, n, k, {0, k, 8, 5, 3});
    const auto res = formal_division(f, divs, k);
    auto check = f - res.remainder;
    for (std::size_t j = 0; j < d; ++j) check -= res.quotients[j] * divs[j];
    if (!check.is_zero()) ++identity_failures;
    for (const auto& [a, c] : res.remainder.terms()) {
      if (res.staircase.contains(a)) {
        ++support_failures;
        break;
      }
    }
  }
  Result r;
  r.report["command"] = "divide";
  r.report["seed"] = seed;
  r.report["truncation"] = k;
  r.report["instances"] = count;
  r.report["identity_failures"] = identity_failures;
  r.report["support_failures"] = support_failures;
  const bool ok = identity_failures == 0 && support_failures == 0;
  r.report["verdict"] = ok;
  r.code = ok ? kOk : kFalse;
  return r;
}

Result cmd_divide(const Globals& g, const DivideArgs& a) {
  const unsigned random = pick(g, "random", a.random_opt, a.random);
  if (random) return random_division(g, random);
  const std::string f_text = pick(g, "f", a.f_opt, a.f);
  const auto d_text = pick(g, "divisors", a.g_opt, a.divisors);
  if (f_text.empty()) throw UsageError("divide needs a dividend (-f)");
  if (d_text.empty()) throw UsageError("divide needs at least one divisor (-g)");
  std::vector<std::string> texts = d_text;
  texts.push_back(f_text);
  const auto ctx = context(g, texts);
  const Series f = series(f_text, ctx);
  std::vector<Series> divs;
  for (const auto& t : d_text) divs.push_back(series(t, ctx));
  const auto res = formal_division(f, divs, ctx.truncation);
  Result r{header("divide", ctx)};
  r.report["f"] = to_string(f, ctx.variables);
  r.report["divisors"] = strings(divs, ctx.variables);
  r.report["quotients"] = strings(res.quotients, ctx.variables);
  r.report["remainder"] = to_string(res.remainder, ctx.variables);
  r.report["staircase"] = res.staircase.to_string();
  return r;
}

// ---------------------------------------------------------------- ideals

struct IdealArgs {
  std::string f;
  std::vector<std::string> ideal;
  unsigned degree = 0;
  unsigned up_to = 0;
  std::string compare;
  CLI::Option* f_opt = nullptr;
  CLI::Option* ideal_opt = nullptr;
  CLI::Option* degree_opt = nullptr;
  CLI::Option* up_to_opt = nullptr;
  CLI::Option* compare_opt = nullptr;
};

struct IdealInputs {
  ParseContext ctx;
  IdealPresentation<Scalar> ideal;
  std::optional<Series> f;
  std::optional<Series> compare;
};

IdealInputs ideal_inputs(const Globals& g, const IdealArgs& a, bool with_compare) {
  const auto gens = pick(g, "ideal", a.ideal_opt, a.ideal);
  const std::string f_text = pick(g, "f", a.f_opt, a.f);
  const std::string c_text = with_compare ? pick(g, "compare", a.compare_opt, a.compare) : std::string();
  std::vector<std::string> texts = gens;
  if (!f_text.empty()) texts.push_back(f_text);
  if (!c_text.empty()) texts.push_back(c_text);
  IdealInputs in{context(g, texts), {}, {}, {}};
  std::vector<Series> list;
  for (const auto& t : gens) {
    for (auto& s : generators(t, in.ctx)) list.push_back(std::move(s));
  }
  in.ideal = IdealPresentation<Scalar>(in.ctx.variables.size(), std::move(list));
  if (!f_text.empty()) in.f = series(f_text, in.ctx);
  if (!c_text.empty()) in.compare = series(c_text, in.ctx);
  return in;
}

Result cmd_diagram(const Globals& g, const IdealArgs& a) {
  const auto in = ideal_inputs(g, a, false);
  const unsigned d = pick(g, "degree", a.degree_opt, a.degree_opt->count() ? a.degree : in.ctx.truncation);
  std::vector<Staircase> chain;
  Json steps = Json::array();
  for (unsigned e = 0; e <= d; ++e) {
    chain.push_back(diagram(in.ideal, e));
    steps.push_back(Json{{"degree", e}, {"diagram", chain.back().to_string()}});
  }
  const auto stab = chain_stabilization(chain);
  Result r{header("diagram", in.ctx)};
  r.report["ideal"] = strings(in.ideal.generators(), in.ctx.variables);
  r.report["degree"] = d;
  r.report["diagram"] = chain.back().to_string();
  r.report["chain"] = std::move(steps);
  r.report["stabilized"] = stab.stabilized;
  r.report["stabilization_index"] = stab.stabilized ? Json(stab.index) : Json(nullptr);
  return r;
}

Result cmd_jet(const Globals& g, const IdealArgs& a) {
  const auto in = ideal_inputs(g, a, false);
  const unsigned k = order(g);
  const unsigned d = a.degree_opt->count() || g.manifest.contains("degree")
                         ? pick(g, "degree", a.degree_opt, a.degree)
                         : (k ? k - 1 : in.ctx.truncation);
  const auto js = jet_ideal(in.ideal, d);
  Result r{header("jet", in.ctx)};
  r.report["ideal"] = strings(in.ideal.generators(), in.ctx.variables);
  r.report["degree"] = d;
  r.report["rank"] = js.rank();
  r.report["basis"] = strings(js.basis(), in.ctx.variables);
  Json piv = Json::array();
  for (const auto& p : js.pivots()) piv.push_back(p.to_string());
  r.report["pivots"] = std::move(piv);
  bool verdict = true;
  if (in.f) {
    r.report["f"] = to_string(*in.f, in.ctx.variables);
    const unsigned kk = k ? k : d + 1;
    const bool member = jet_membership(*in.f, in.ideal, kk);
    r.report["membership"] = Json{{"order", kk}, {"member", member}};
    verdict = verdict && member;
    const unsigned up_to = pick(g, "up_to", a.up_to_opt, a.up_to);
    if (up_to) {
      const auto mv = membership_up_to(*in.f, in.ideal, up_to);
      r.report["membership_up_to"] = Json{{"bound", mv.bound},
                                          {"member_up_to", mv.member_up_to},
                                          {"witness", mv.member_up_to ? Json(nullptr) : Json(mv.witness)}};
      verdict = verdict && mv.member_up_to;
    }
    r.report["verdict"] = verdict;
  }
  r.code = verdict ? kOk : kFalse;
  return r;
}

Result cmd_reduce(const Globals& g, const IdealArgs& a) {
  const auto in = ideal_inputs(g, a, true);
  if (!in.f) throw UsageError("reduce needs a series (-f)");
  const unsigned d = a.degree_opt->count() || g.manifest.contains("degree")
                         ? pick(g, "degree", a.degree_opt, a.degree)
                         : in.ctx.truncation;
  const auto nf = reduce_mod_ideal(*in.f, in.ideal, d);
  Result r{header("reduce", in.ctx)};
  r.report["ideal"] = strings(in.ideal.generators(), in.ctx.variables);
  r.report["degree"] = d;
  r.report["f"] = to_string(*in.f, in.ctx.variables);
  r.report["normal_form"] = to_string(nf, in.ctx.variables);
  if (in.compare) {
    const auto other = reduce_mod_ideal(*in.compare, in.ideal, d);
    const bool agree = nf == other;
    r.report["compare"] = to_string(*in.compare, in.ctx.variables);
    r.report["compare_normal_form"] = to_string(other, in.ctx.variables);
    r.report["verdict"] = agree;
    r.code = agree ? kOk : kFalse;
  }
  return r;
}

// ---------------------------------------------------------------- equivalence

struct FamilyText {
  std::optional<std::string> mode;
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> members;
};

FamilyText family_text(const Json& j, const std::string& prefix) {
  FamilyText ft;
  const Json* list = &j;
  if (j.is_object()) {
    if (j.contains("mode")) ft.mode = j.at("mode").get<std::string>();
    list = &j.at("members");
  }
  if (!list->is_array()) throw UsageError("family members must be a list");
  for (const auto& m : *list) {
    std::string label = prefix + std::to_string(ft.members.size() + 1);
    std::vector<std::string> gens;
    if (m.is_string()) {
      gens.push_back(m.get<std::string>());
    } else if (m.is_array()) {
      gens = m.get<std::vector<std::string>>();
    } else if (m.is_object()) {
      if (m.contains("label")) label = m.at("label").get<std::string>();
      gens = m.at("generators").get<std::vector<std::string>>();
    } else {
      throw UsageError("family member must be a string, a list or an object");
    }
    ft.labels.push_back(std::move(label));
    ft.members.push_back(std::move(gens));
  }
  return ft;
}

FamilyText family_from_flags(const std::vector<std::string>& items, const std::string& prefix) {
  FamilyText ft;
  for (const auto& t : items) {
    ft.labels.push_back(prefix + std::to_string(ft.labels.size() + 1));
    ft.members.push_back({t});
  }
  return ft;
}

FamilyMode parse_mode(const std::string& m) {
  if (m == "family") return FamilyMode::family;
  if (m == "set") return FamilyMode::set;
  throw UsageError("mode must be 'family' or 'set', got '" + m + "'");
}

GermFamily<Scalar> build_family(const FamilyText& ft, FamilyMode fallback, const ParseContext& ctx) {
  std::vector<IdealPresentation<Scalar>> members;
  for (const auto& texts : ft.members) {
    std::vector<Series> gens;
    for (const auto& t : texts) {
      for (auto& s : generators(t, ctx)) gens.push_back(std::move(s));
    }
    members.emplace_back(ctx.variables.size(), std::move(gens));
  }
  return GermFamily<Scalar>(ft.mode ? parse_mode(*ft.mode) : fallback, ft.labels, std::move(members));
}

struct EquivalenceArgs {
  std::string map;
  std::vector<std::string> left, right;
  unsigned horizon = 0;
  bool realify = false;
  CLI::Option* map_opt = nullptr;
  CLI::Option* left_opt = nullptr;
  CLI::Option* right_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* realify_opt = nullptr;
};

template <ExactField S>
Json failure_jet(const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right, std::size_t a,
                 const GeneratorFailure& f, unsigned k, const std::vector<std::string>& vars) {
  const bool pull = f.direction == GeneratorFailure::Direction::pullback;
  const auto& source = pull ? right.members()[a] : left.members()[a];
  const auto& target = pull ? left.members()[a] : right.members()[a];
  const FormalMap<S> transport = pull ? phi : map_invert(phi);
  const auto moved = Composer<S>(transport)(source.generators()[f.generator]);
  const auto residue = jet_ideal(target, k - 1).reduce(truncate(moved, k - 1));
  return Json{{"direction", to_string(f.direction)},
              {"generator", f.generator + 1},
              {"residue", to_string(residue, vars)}};
}

template <ExactField S>
void equivalence_body(Json& report, const FormalMap<S>& phi, const GermFamily<S>& left, const GermFamily<S>& right,
                      unsigned k, unsigned horizon, const std::vector<std::string>& vars, int& code) {
  report["mode"] = to_string(left.mode());
  if (horizon) {
    const auto h = equivalence_horizon(left, right, phi, horizon);
    Json v = Json::array();
    for (unsigned j = 0; j < h.verdicts.size(); ++j) v.push_back(Json{{"order", j + 1}, {"holds", bool(h.verdicts[j])}});
    report["horizon"] = horizon;
    report["verdicts"] = std::move(v);
    report["first_failure"] = h.first_failure ? Json(*h.first_failure) : Json(nullptr);
    report["verdict"] = !h.first_failure.has_value();
    code = h.first_failure ? kFalse : kOk;
    return;
  }
  const auto rep = is_order_k_equivalence(phi, left, right, k);
  report["order"] = k;
  if (left.mode() == FamilyMode::family) {
    Json idx = Json::array();
    for (const auto& v : rep.indices) {
      Json e{{"label", left.labels()[v.index]}, {"holds", v.holds}};
      if (v.failure) e["failure"] = failure_jet(phi, left, right, v.index, *v.failure, k, vars);
      idx.push_back(std::move(e));
    }
    report["indices"] = std::move(idx);
  } else {
    Json m = Json::array();
    for (const auto& e : rep.matching) {
      const bool from_left = e.source_side == MatchEntry::Side::left;
      const auto& src = from_left ? left.labels() : right.labels();
      const auto& dst = from_left ? right.labels() : left.labels();
      m.push_back(Json{{"side", from_left ? "left" : "right"},
                       {"source", src[e.source]},
                       {"target", e.target ? Json(dst[*e.target]) : Json(nullptr)}});
    }
    report["matching"] = std::move(m);
    report["pair_checks"] = rep.pair_checks;
  }
  report["verdict"] = rep.holds;
  code = rep.holds ? kOk : kFalse;
}

std::vector<std::string> real_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= n; ++j) {
    out.push_back("x" + std::to_string(j));
    out.push_back("y" + std::to_string(j));
  }
  return out;
}

Result cmd_check_equivalence(const Globals& g, const EquivalenceArgs& a) {
  const std::string map_text = pick(g, "map", a.map_opt, a.map);
  if (map_text.empty()) throw UsageError("check-equivalence needs a map (--map)");
  const FamilyText lt = (a.left_opt->count() || !g.manifest.contains("left"))
                            ? family_from_flags(a.left, "L")
                            : family_text(g.manifest.at("left"), "L");
  const FamilyText rt = (a.right_opt->count() || !g.manifest.contains("right"))
                            ? family_from_flags(a.right, "R")
                            : family_text(g.manifest.at("right"), "R");
  const FamilyMode mode = parse_mode(pick(g, "mode", g.mode_opt, g.mode));
  const unsigned k = order(g);
  const unsigned horizon = pick(g, "horizon", a.horizon_opt, a.horizon);
  const bool real = pick(g, "realify", a.realify_opt, a.realify);
  if (!k && !horizon) throw UsageError("check-equivalence needs --order or --horizon");
  std::vector<std::string> texts{map_text};
  for (const auto* ft : {&lt, &rt}) {
    for (const auto& m : ft->members) texts.insert(texts.end(), m.begin(), m.end());
  }
  const auto ctx = context(g, texts);
  const Map phi = map_expr(map_text, ctx);
  const auto left = build_family(lt, mode, ctx);
  const auto right = build_family(rt, mode, ctx);
  Result r{header("check-equivalence", ctx)};
  r.report["map"] = to_string(phi, ctx.variables);
  r.report["realify"] = real;
  if (real) {
    equivalence_body(r.report, realify(phi), realify(left), realify(right), k, horizon,
                     real_names(ctx.variables.size()), r.code);
  } else {
    equivalence_body(r.report, phi, left, right, k, horizon, ctx.variables, r.code);
  }
  return r;
}

// ---------------------------------------------------------------- dynamics

struct DynamicsArgs {
  std::string map;
  std::vector<std::string> left, right;
  CLI::Option* map_opt = nullptr;
  CLI::Option* left_opt = nullptr;
  CLI::Option* right_opt = nullptr;
};

Result cmd_dynamics(const Globals& g, const DynamicsArgs& a, bool fields) {
  const std::string command = fields ? "check-field-equivalence" : "check-conjugacy";
  const std::string map_text = pick(g, "map", a.map_opt, a.map);
  const auto left_text = pick(g, "left", a.left_opt, a.left);
  const auto right_text = pick(g, "right", a.right_opt, a.right);
  const unsigned k = order(g);
  if (map_text.empty()) throw UsageError(command + " needs a map (--map)");
  if (!k) throw UsageError(command + " needs --order");
  std::vector<std::string> texts{map_text};
  texts.insert(texts.end(), left_text.begin(), left_text.end());
  texts.insert(texts.end(), right_text.begin(), right_text.end());
  const auto ctx = context(g, texts);
  const Map phi = map_expr(map_text, ctx);
  std::vector<Map> left, right;
  for (const auto& t : left_text) left.push_back(map_expr(t, ctx));
  for (const auto& t : right_text) right.push_back(map_expr(t, ctx));
  ConjugacyReport rep;
  if (fields) {
    std::vector<VectorFieldGerm<Scalar>> lf, rf;
    for (auto& m : left) lf.emplace_back(m);
    for (auto& m : right) rf.emplace_back(m);
    rep = is_order_k_field_equivalence(phi, lf, rf, k);
  } else {
    rep = is_order_k_conjugacy(phi, left, right, k);
  }
  Result r{header(command, ctx)};
  r.report["map"] = to_string(phi, ctx.variables);
  r.report["order"] = k;
  Json idx = Json::array();
  for (std::size_t i = 0; i < rep.indices.size(); ++i) {
    const auto moved = fields ? pushforward_field(VectorFieldGerm<Scalar>(left[i]), phi).as_map()
                              : conjugate(left[i], phi);
    idx.push_back(Json{{"member", i + 1},
                       {"transported", to_string(moved, ctx.variables)},
                       {"holds", bool(rep.indices[i])}});
  }
  r.report["indices"] = std::move(idx);
  if (rep.first_failure) {
    r.report["first_failure"] = Json{{"member", rep.first_failure->index + 1},
                                     {"component", rep.first_failure->component + 1},
                                     {"degree", rep.first_failure->degree}};
  } else {
    r.report["first_failure"] = nullptr;
  }
  r.report["verdict"] = rep.holds;
  r.code = rep.holds ? kOk : kFalse;
  return r;
}

// ---------------------------------------------------------------- counterexample

struct CounterexampleArgs {
  unsigned levels = 13;
  std::int64_t window = std::int64_t{1} << 15;
  unsigned k = 1;
  unsigned m_max = 4;
  std::int64_t n_max = 8;
  bool realify = false;
  bool no_prefilter = false;
  std::string t_range = "1000";
  CLI::Option* levels_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* m_max_opt = nullptr;
  CLI::Option* n_max_opt = nullptr;
  CLI::Option* realify_opt = nullptr;
  CLI::Option* no_prefilter_opt = nullptr;
  CLI::Option* t_range_opt = nullptr;
};

Result cmd_sequence(const Globals& g, const CounterexampleArgs& a) {
  const unsigned levels = pick(g, "levels", a.levels_opt, a.levels);
  const std::int64_t window = pick(g, "window", a.window_opt, a.window);
  const auto seq = counterexample::build_shift_sequence(levels);
  Result r;
  r.report["command"] = "counterexample sequence";
  r.report["levels"] = levels;
  r.report["window"] = window;
  Json rows = Json::array();
  for (unsigned m = 1; m <= levels; ++m) {
    rows.push_back(Json{{"m", m},
                        {"c", seq.shift(m)},
                        {"a", seq.max_negative(m)},
                        {"b", seq.min_positive(m)},
                        {"modulus", counterexample::ShiftSequence::modulus(m)}});
  }
  r.report["sequence"] = std::move(rows);
  bool ok = true;
  Json checks = Json::array();
  for (const auto& c : counterexample::check_sequence(seq, window)) {
    checks.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
    ok = ok && c.holds;
  }
  r.report["checks"] = std::move(checks);
  r.report["verdict"] = ok;
  r.code = ok ? kOk : kFalse;
  return r;
}

Result cmd_verify(const Globals& g, const CounterexampleArgs& a) {
  counterexample::VerifyOptions o;
  o.shift_level = pick(g, "k", a.k_opt, a.k);
  o.m_max = pick(g, "m_max", a.m_max_opt, a.m_max);
  o.n_max = pick(g, "n_max", a.n_max_opt, a.n_max);
  o.truncation = truncation(g);
  o.order = order(g);
  o.realify = pick(g, "realify", a.realify_opt, a.realify);
  o.prefilter = !pick(g, "no_prefilter", a.no_prefilter_opt, a.no_prefilter);
  const auto rep = counterexample::verify_finite_order_equivalence(o);
  Result r;
  r.report["command"] = "counterexample verify";
  r.report["k"] = o.shift_level;
  r.report["shift"] = rep.shift;
  r.report["map"] = "(z, w" + std::string(rep.shift < 0 ? " - " : " + ") +
                    (std::abs(rep.shift) == 1 ? std::string() : std::to_string(std::abs(rep.shift)) + "*") + "z)";
  r.report["order"] = rep.order;
  r.report["m_max"] = o.m_max;
  r.report["n_max"] = o.n_max;
  r.report["truncation"] = o.truncation;
  r.report["realify"] = o.realify;
  r.report["prefilter"] = o.prefilter;
  r.report["left_members"] = rep.left_members;
  r.report["right_members"] = rep.right_members;
  r.report["target_window_members"] = rep.target_window_members;
  r.report["pair_checks"] = rep.pair_checks;
  auto table = [](const std::vector<counterexample::CurveMatch>& ms) {
    Json t = Json::array();
    for (const auto& m : ms) t.push_back(Json{{"source", m.source}, {"target", m.target.empty() ? Json(nullptr) : Json(m.target)}});
    return t;
  };
  r.report["forward"] = table(rep.forward);
  r.report["backward"] = table(rep.backward);
  Json fails = Json::array();
  for (const auto& f : rep.failures) {
    fails.push_back(Json{{"source", f.source},
                         {"kind", f.kind},
                         {"partner_outside_window",
                          f.partner_outside_window.empty() ? Json(nullptr) : Json(f.partner_outside_window)}});
  }
  r.report["failures"] = std::move(fails);
  r.report["verdict"] = rep.holds;
  r.code = rep.holds ? kOk : kFalse;
  return r;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const std::int64_t n = std::stoll(text, &used);
      if (used != text.size() || n < 0) throw UsageError("");
      return {-n, n};
    }
    const std::string lo_s = text.substr(0, colon), hi_s = text.substr(colon + 1);
    const std::int64_t lo = std::stoll(lo_s, &used);
    if (used != lo_s.size()) throw UsageError("");
    const std::int64_t hi = std::stoll(hi_s, &used);
    if (used != hi_s.size() || hi < lo) throw UsageError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("t-range must be N or LO:HI with LO <= HI, got '" + text + "'");
  }
}

Result cmd_horizon(const Globals& g, const CounterexampleArgs& a) {
  const unsigned levels = pick(g, "levels", a.levels_opt, a.levels);
  const auto [lo, hi] = parse_range(pick(g, "t_range", a.t_range_opt, a.t_range));
  if (hi - lo > 10'000'000) throw UsageError("t-range wider than 10^7");
  const auto seq = counterexample::build_shift_sequence(levels);
  unsigned max_h = 0;
  std::int64_t max_at = lo;
  Json unbounded = Json::array();
  Json listed = Json::array();
  const bool list_all = hi - lo <= 64;
  for (std::int64_t t = lo; t <= hi; ++t) {
    const auto h = counterexample::membership_horizon(t, seq);
    if (!h) {
      unbounded.push_back(t);
    } else if (*h > max_h) {
      max_h = *h;
      max_at = t;
    }
    if (list_all) listed.push_back(Json{{"t", t}, {"horizon", h ? Json(*h) : Json(nullptr)}});
  }
  Result r;
  r.report["command"] = "counterexample horizon";
  r.report["levels"] = levels;
  r.report["range"] = Json::array({lo, hi});
  r.report["max_horizon"] = max_h;
  r.report["max_horizon_at"] = max_at;
  r.report["unbounded"] = std::move(unbounded);
  if (list_all) r.report["horizons"] = std::move(listed);
  const bool ok = r.report["unbounded"].empty();
  r.report["verdict"] = ok;
  r.code = ok ? kOk : kFalse;
  return r;
}

// ---------------------------------------------------------------- output

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "none";
  return v.dump();
}

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

std::string inline_text(const Json& v) {
  if (is_scalar(v)) return scalar_text(v);
  std::string out = v.is_array() ? "[" : "{";
  bool first = true;
  for (const auto& [k, x] : v.items()) {
    if (!first) out += ", ";
    first = false;
    if (v.is_object()) out += k + ": ";
    out += inline_text(x);
  }
  return out + (v.is_array() ? "]" : "}");
}

void render_text(const Json& v, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [k, x] : v.items()) {
    if (x.is_object()) {
      out << pad << k << ":\n";
      render_text(x, out, indent + 2);
    } else if (x.is_array() && !std::all_of(x.begin(), x.end(), is_scalar)) {
      out << pad << k << ":\n";
      for (const auto& e : x) {
        out << pad << "  - ";
        if (e.is_object()) {
          bool first = true;
          for (const auto& [ek, ev] : e.items()) {
            out << (first ? "" : ", ") << ek << ": " << inline_text(ev);
            first = false;
          }
        } else {
          out << inline_text(e);
        }
        out << "\n";
      }
    } else {
      out << pad << k << ": " << inline_text(x) << "\n";
    }
  }
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << "\n";
  } else {
    render_text(report, out, 0);
  }
}

int fail(const std::string& command, const std::string& kind, const std::string& message, int code,
         const std::string& format, std::ostream& out, std::ostream& err) {
  err << "error: " << message << "\n";
  if (format == "json") {
    Json r;
    r["command"] = command;
    r["error"] = Json{{"kind", kind}, {"message", message}, {"exit_code", code}};
    out << r.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite-order equivalence of formal germs", "germ"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--manifest", g.manifest_path, "JSON manifest supplying inputs; flags override it");
  g.vars_opt = app.add_option("--vars", g.vars, "Comma-separated variable names (default: inferred)");
  g.trunc_opt = app.add_option("--trunc", g.trunc, "Working truncation K")->capture_default_str();
  g.order_opt = app.add_option("--order", g.order, "Equivalence or conjugacy order k");
  g.mode_opt = app.add_option("--mode", g.mode, "family or set")->check(CLI::IsMember({"family", "set"}));
  app.add_option("--format", g.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for randomized drivers")->capture_default_str();
  g.k_cap_opt = app.add_option("--k-cap", g.k_cap, "Largest truncation and exponent accepted")->capture_default_str();

  DivideArgs div;
  auto* divide = app.add_subcommand("divide", "Formal division of f by g1, ..., gs");
  div.f_opt = divide->add_option("-f", div.f, "Dividend");
  div.g_opt = divide->add_option("-g", div.divisors, "Divisor (repeatable)");
  div.random_opt = divide->add_option("--random", div.random, "Check N seeded random division instances instead");

  IdealArgs dia, jt, red;
  auto* diag = app.add_subcommand("diagram", "Diagram of initial exponents and its chain in the degree");
  dia.f_opt = nullptr;
  dia.ideal_opt = diag->add_option("-g", dia.ideal, "Ideal generator or tuple of generators (repeatable)");
  dia.degree_opt = diag->add_option("--degree", dia.degree, "Jet degree d (default K)");

  auto* jet = app.add_subcommand("jet", "Reduced jet of an ideal and jet membership");
  jt.ideal_opt = jet->add_option("-g", jt.ideal, "Ideal generator or tuple (repeatable)");
  jt.f_opt = jet->add_option("-f", jt.f, "Series tested for membership in I + m^k");
  jt.degree_opt = jet->add_option("--degree", jt.degree, "Jet degree (default k-1, else K)");
  jt.up_to_opt = jet->add_option("--up-to", jt.up_to, "Also test f in I + m^j for j = 1..N");

  auto* reduce = app.add_subcommand("reduce", "Normal form of f modulo an ideal");
  red.ideal_opt = reduce->add_option("-g", red.ideal, "Ideal generator or tuple (repeatable)");
  red.f_opt = reduce->add_option("-f", red.f, "Series to reduce");
  red.degree_opt = reduce->add_option("--degree", red.degree, "Reduction degree (default K)");
  red.compare_opt = reduce->add_option("--compare", red.compare, "Second series; verdict is equality of normal forms");

  EquivalenceArgs eq;
  auto* equiv = app.add_subcommand("check-equivalence", "Order-k equivalence of two families or sets of ideals");
  eq.map_opt = equiv->add_option("--map", eq.map, "Formal map as a tuple");
  eq.left_opt = equiv->add_option("--left", eq.left, "Left member: generator or tuple (repeatable)");
  eq.right_opt = equiv->add_option("--right", eq.right, "Right member: generator or tuple (repeatable)");
  eq.horizon_opt = equiv->add_option("--horizon", eq.horizon, "Report verdicts for every order 1..N");
  eq.realify_opt = equiv->add_flag("--realify", eq.realify, "Work with real and imaginary parts");

  DynamicsArgs conj, fld;
  auto* conjugacy = app.add_subcommand("check-conjugacy", "Order-k conjugacy of self-map families");
  conj.map_opt = conjugacy->add_option("--map", conj.map, "Conjugating map");
  conj.left_opt = conjugacy->add_option("--left", conj.left, "Left self-map (repeatable)");
  conj.right_opt = conjugacy->add_option("--right", conj.right, "Right self-map (repeatable)");
  auto* field = app.add_subcommand("check-field-equivalence", "Order-k equivalence of vector field families");
  fld.map_opt = field->add_option("--map", fld.map, "Coordinate change");
  fld.left_opt = field->add_option("--left", fld.left, "Left vector field as a component tuple (repeatable)");
  fld.right_opt = field->add_option("--right", fld.right, "Right vector field (repeatable)");

  CounterexampleArgs cx;
  auto* counter = app.add_subcommand("counterexample", "Curve sets equivalent to every finite order");
  counter->require_subcommand(1);
  auto* sequence = counter->add_subcommand("sequence", "Shift sequence c_m and its invariants");
  cx.levels_opt = sequence->add_option("--levels", cx.levels, "Number of levels M")->capture_default_str();
  cx.window_opt = sequence->add_option("--window", cx.window, "Integer window for nesting and growth")->capture_default_str();
  auto* verify = counter->add_subcommand("verify", "Set-mode check of the map (z, w + c_k z)");
  cx.k_opt = verify->add_option("--k", cx.k, "Shift level k")->capture_default_str();
  cx.m_max_opt = verify->add_option("--m-max", cx.m_max, "Largest curve level")->capture_default_str();
  cx.n_max_opt = verify->add_option("--n-max", cx.n_max, "Index window |n| <= n_max")->capture_default_str();
  cx.realify_opt = verify->add_flag("--realify", cx.realify, "Use the real ideals in R[[x1, y1, x2, y2]]");
  cx.no_prefilter_opt = verify->add_flag("--no-prefilter", cx.no_prefilter, "Exhaustive pairwise search");
  auto* horizon = counter->add_subcommand("horizon", "Least level m with t outside S_m");
  horizon->add_option("--levels", cx.levels, "Number of levels M")->capture_default_str();
  cx.t_range_opt = horizon->add_option("--t-range", cx.t_range, "N for |t| <= N, or LO:HI")->capture_default_str();
  // --levels is registered twice; keep whichever subcommand was used.
  CLI::Option* horizon_levels = horizon->get_option("--levels");

  std::vector<std::string> argv_storage{"germ"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  std::string command = "germ";
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (!g.manifest_path.empty()) {
      std::ifstream in(g.manifest_path);
      if (!in) throw UsageError("cannot read manifest '" + g.manifest_path + "'");
      g.manifest = Json::parse(in);
      if (!g.manifest.is_object()) throw UsageError("manifest must be a JSON object");
    }
    Result r;
    if (divide->parsed()) {
      command = "divide";
      r = cmd_divide(g, div);
    } else if (diag->parsed()) {
      command = "diagram";
      r = cmd_diagram(g, dia);
    } else if (jet->parsed()) {
      command = "jet";
      r = cmd_jet(g, jt);
    } else if (reduce->parsed()) {
      command = "reduce";
      r = cmd_reduce(g, red);
    } else if (equiv->parsed()) {
      command = "check-equivalence";
      r = cmd_check_equivalence(g, eq);
    } else if (conjugacy->parsed()) {
      command = "check-conjugacy";
      r = cmd_dynamics(g, conj, false);
    } else if (field->parsed()) {
      command = "check-field-equivalence";
      r = cmd_dynamics(g, fld, true);
    } else if (sequence->parsed()) {
      command = "counterexample sequence";
      r = cmd_sequence(g, cx);
    } else if (verify->parsed()) {
      command = "counterexample verify";
      r = cmd_verify(g, cx);
    } else {
      command = "counterexample horizon";
      cx.levels_opt = horizon_levels;
      r = cmd_horizon(g, cx);
    }
    emit(r.report, g.format, out);
    return r.code;
  } catch (const PrecisionError& e) {
    return fail(command, "precision", e.what(), kPrecision, g.format, out, err);
  } catch (const ExpressionError& e) {
    return fail(command, "parse", e.what(), kUsage, g.format, out, err);
  } catch (const ParseError& e) {
    return fail(command, "parse", e.what(), kUsage, g.format, out, err);
  } catch (const DimensionMismatch& e) {
    return fail(command, "dimension", e.what(), kUsage, g.format, out, err);
  } catch (const DomainError& e) {
    return fail(command, "domain", e.what(), kUsage, g.format, out, err);
  } catch (const nlohmann::json::exception& e) {
    return fail(command, "manifest", e.what(), kUsage, g.format, out, err);
  } catch (const std::invalid_argument& e) {
    return fail(command, "usage", e.what(), kUsage, g.format, out, err);
  } catch (const std::exception& e) {
    return fail(command, "error", e.what(), kUsage, g.format, out, err);
  }
}

}  // namespace germ::cli
