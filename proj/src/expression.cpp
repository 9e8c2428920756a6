#include "germ/expression.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace germ {

namespace {

using Series = FormalSeries<GaussianRational>;

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : text_(text), ctx_(ctx) {
    if (ctx.variables.size() > MultiIndex::kMaxVariables) throw ParseError("too many variables", 0);
  }

  Series parse_all() {
    Series s = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return s;
  }

  std::vector<Series> parse_tuple() {
    skip();
    expect('(');
    std::vector<Series> out;
    out.push_back(expr());
    skip();
    while (peek() == ',') {
      ++pos_;
      out.push_back(expr());
      skip();
    }
    expect(')');
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::size_t dim() const { return ctx_.variables.size(); }

  Series constant(const GaussianRational& c) const { return Series::constant(dim(), ctx_.truncation, c); }

  Series expr() {
    Series acc = term();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Series rhs = term();
      if (c == '+') {
        acc += rhs;
      } else {
        acc -= rhs;
      }
    }
  }

  Series term() {
    Series acc = unary();
    while (true) {
      const char c = peek();
      if (c != '*' && c != '/') return acc;
      const std::size_t op_pos = pos_;
      ++pos_;
      Series rhs = unary();
      if (c == '*') {
        acc = acc * rhs;
        continue;
      }
      if (!rhs.vanishes_to_order(0) || std::any_of(rhs.terms().begin(), rhs.terms().end(),
                                                   [](const auto& t) { return t.first.degree() > 0; })) {
        throw ParseError("division by a non-constant expression", op_pos);
      }
      const GaussianRational d = rhs.coefficient(MultiIndex(dim()));
      if (d.is_zero()) throw ParseError("division by zero", op_pos);
      acc *= GaussianRational(1) / d;
    }
  }

  Series unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Series power() {
    Series base = primary();
    if (peek() != '^') return base;
    ++pos_;
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a natural exponent");
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 6 || std::stoul(digits) > ctx_.exponent_cap) {
      throw ParseError("exponent " + digits + " exceeds the cap " + std::to_string(ctx_.exponent_cap), start);
    }
    unsigned e = static_cast<unsigned>(std::stoul(digits));
    Series result = constant(GaussianRational(1));
    while (e > 0) {
      if (e & 1u) result = result * base;
      e >>= 1u;
      if (e) base = base * base;
    }
    return result;
  }

  Series primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Series inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class value(std::string(text_.substr(start, pos_ - start)));
      return constant(GaussianRational(Rational(mpq_class(value))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "i") return constant(GaussianRational::i());
      if (auto d = ctx_.definitions.find(name); d != ctx_.definitions.end()) {
        if (d->second.dimension() != dim()) throw ParseError("'" + name + "' has another dimension", start);
        return truncate(d->second, std::min(d->second.truncation(), ctx_.truncation));
      }
      const auto it = std::find(ctx_.variables.begin(), ctx_.variables.end(), name);
      if (it == ctx_.variables.end()) throw ParseError("unknown variable '" + name + "'", start);
      return Series::variable(dim(), ctx_.truncation, static_cast<std::size_t>(it - ctx_.variables.begin()));
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

template <class Coef>
std::string render(const FormalSeries<Coef>& f, std::span<const std::string> variables) {
  if (variables.size() != f.dimension()) throw DimensionMismatch("variable names for printing");
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [a, c] : f.terms()) {
    const std::string mono = monomial_string(a, variables);
    bool negative = false;
    std::string coef;
    Rational re, im;
    if constexpr (std::same_as<Coef, Rational>) {
      re = c;
    } else {
      re = c.real();
      im = c.imag();
    }
    if (im.is_zero()) {
      negative = re.sign() < 0;
      const Rational mag = abs(re);
      coef = (mag == Rational(1) && !mono.empty()) ? "" : mag.to_string();
    } else if (re.is_zero()) {
      negative = im.sign() < 0;
      const Rational mag = abs(im);
      coef = mag == Rational(1) ? "i" : mag.to_string() + "*i";
    } else {
      coef = "(" + GaussianRational(re, im).to_string() + ")";
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (coef.empty()) {
      out += mono;
    } else if (mono.empty()) {
      out += coef;
    } else {
      out += coef + "*" + mono;
    }
  }
  return out;
}

std::vector<std::string> identifiers(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto ch = static_cast<unsigned char>(text[i]);
    if (std::isalpha(ch) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else if (std::isdigit(ch)) {
      while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::optional<unsigned> indexed(const std::string& name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  for (std::size_t k = 1; k < name.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return std::nullopt;
  }
  if (name[1] == '0') return std::nullopt;
  return static_cast<unsigned>(std::stoul(name.substr(1)));
}

}  // namespace

FormalSeries<GaussianRational> parse_series(std::string_view text, const ParseContext& ctx) {
  return Parser(text, ctx).parse_all();
}

std::vector<FormalSeries<GaussianRational>> parse_tuple(std::string_view text, const ParseContext& ctx) {
  return Parser(text, ctx).parse_tuple();
}

FormalMap<GaussianRational> parse_map(std::string_view text, const ParseContext& ctx) {
  auto comps = parse_tuple(text, ctx);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].has_constant_term()) {
      throw ParseError("map component " + std::to_string(i + 1) + " has a constant term", 0);
    }
  }
  return FormalMap<GaussianRational>(std::move(comps));
}

std::vector<std::string> infer_variables(std::span<const std::string> texts, const std::set<std::string>& reserved) {
  std::vector<std::string> seen;
  std::set<std::string> unique;
  for (const auto& t : texts) {
    for (auto& id : identifiers(t)) {
      if (id == "i" || reserved.count(id)) continue;
      if (unique.insert(id).second) seen.push_back(id);
    }
  }
  if (seen.empty()) return {};
  const auto all = [&](auto pred) { return std::all_of(seen.begin(), seen.end(), pred); };
  if (all([](const std::string& s) { return indexed(s, 't').has_value(); })) {
    unsigned n = 0;
    for (const auto& s : seen) n = std::max(n, *indexed(s, 't'));
    std::vector<std::string> out;
    for (unsigned k = 1; k <= n; ++k) out.push_back("t" + std::to_string(k));
    return out;
  }
  if (all([](const std::string& s) { return s == "z" || s == "w"; })) {
    if (unique.count("w")) return {"z", "w"};
    return {"z"};
  }
  if (all([](const std::string& s) { return indexed(s, 'x') || indexed(s, 'y'); })) {
    unsigned n = 0;
    for (const auto& s : seen) n = std::max(n, indexed(s, 'x') ? *indexed(s, 'x') : *indexed(s, 'y'));
    std::vector<std::string> out;
    for (unsigned k = 1; k <= n; ++k) {
      out.push_back("x" + std::to_string(k));
      out.push_back("y" + std::to_string(k));
    }
    return out;
  }
  return seen;
}

std::string monomial_string(const MultiIndex& a, std::span<const std::string> variables) {
  std::string out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += variables[j];
    if (a[j] > 1) out += "^" + std::to_string(a[j]);
  }
  return out;
}

std::string to_string(const FormalSeries<Rational>& f, std::span<const std::string> variables) {
  return render(f, variables);
}

std::string to_string(const FormalSeries<GaussianRational>& f, std::span<const std::string> variables) {
  return render(f, variables);
}

}  // namespace germ
