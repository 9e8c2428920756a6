#pragma once

// Text form of series and maps.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' natural)?
//   primary := natural | 'i' | variable | '(' expr ')'
//   map     := '(' expr (',' expr)* ')'
//
// Division is only by nonzero constants, so "p/q" spells a rational literal.
// Printing lists terms in ascending monomial order with reduced coefficients,
// and parse(print(f)) == f for the same variables and truncation.

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "germ/formal_map.hpp"
#include "germ/series.hpp"

namespace germ {

struct ParseContext {
  std::vector<std::string> variables;
  unsigned truncation = 0;
  /// Largest exponent literal accepted.
  unsigned exponent_cap = 64;
  /// Named series usable inside expressions; looked up before variables.
  std::map<std::string, FormalSeries<GaussianRational>> definitions;
};

FormalSeries<GaussianRational> parse_series(std::string_view text, const ParseContext& ctx);
FormalMap<GaussianRational> parse_map(std::string_view text, const ParseContext& ctx);
/// Component list "(e1, ..., em)" without the zero-constant-term requirement.
std::vector<FormalSeries<GaussianRational>> parse_tuple(std::string_view text, const ParseContext& ctx);

/// Variable list implied by the identifiers in `texts`: t1..tn, (z, w),
/// x1, y1, ..., xn, yn, or else first-appearance order. "i" and the names in
/// `reserved` are skipped.
std::vector<std::string> infer_variables(std::span<const std::string> texts,
                                         const std::set<std::string>& reserved = {});

std::string to_string(const FormalSeries<Rational>& f, std::span<const std::string> variables);
std::string to_string(const FormalSeries<GaussianRational>& f, std::span<const std::string> variables);

template <ExactField S>
std::string to_string(const FormalMap<S>& phi, std::span<const std::string> variables) {
  std::string out = "(";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i) out += ", ";
    out += to_string(phi[i], variables);
  }
  return out + ")";
}

/// "z^2*w"; empty for the constant monomial.
std::string monomial_string(const MultiIndex& a, std::span<const std::string> variables);

}  // namespace germ
