#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "germ/expression.hpp"
#include "germ/formal_map.hpp"
#include "germ/series.hpp"

namespace germ {

// Readable gtest failure messages.
inline void PrintTo(const FormalSeries<Rational>& f, std::ostream* os) {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < f.dimension(); ++j) vars.push_back("t" + std::to_string(j + 1));
  *os << to_string(f, vars) << " (K=" << f.truncation() << ")";
}

inline void PrintTo(const FormalSeries<GaussianRational>& f, std::ostream* os) {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < f.dimension(); ++j) vars.push_back("t" + std::to_string(j + 1));
  *os << to_string(f, vars) << " (K=" << f.truncation() << ")";
}

inline void PrintTo(const MultiIndex& a, std::ostream* os) { *os << a.to_string(); }

}  // namespace germ

namespace test {

using germ::FormalMap;
using germ::FormalSeries;
using germ::GaussianRational;
using germ::Rational;

inline germ::ParseContext context(std::vector<std::string> vars, unsigned k) {
  germ::ParseContext ctx;
  ctx.variables = std::move(vars);
  ctx.truncation = k;
  return ctx;
}

/// Rational series in t1..tn.
inline FormalSeries<Rational> T(const std::string& text, std::size_t n, unsigned k) {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back("t" + std::to_string(j + 1));
  return germ::convert<Rational>(germ::parse_series(text, context(vars, k)));
}

/// Gaussian series in (z, w) or (z).
inline FormalSeries<GaussianRational> Z(const std::string& text, std::size_t n, unsigned k) {
  return germ::parse_series(text, context(n == 1 ? std::vector<std::string>{"z"} : std::vector<std::string>{"z", "w"}, k));
}

inline FormalMap<Rational> TMap(const std::string& text, std::size_t n, unsigned k) {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back("t" + std::to_string(j + 1));
  return germ::convert<Rational>(germ::parse_map(text, context(vars, k)));
}

inline FormalMap<GaussianRational> ZMap(const std::string& text, std::size_t n, unsigned k) {
  return germ::parse_map(text, context(n == 1 ? std::vector<std::string>{"z"} : std::vector<std::string>{"z", "w"}, k));
}

}  // namespace test
