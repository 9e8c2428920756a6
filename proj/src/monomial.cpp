#include "germ/monomial.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

#include "germ/errors.hpp"

namespace germ {

namespace {

void check_size(std::size_t n) {
  if (n > MultiIndex::kMaxVariables) {
    throw std::invalid_argument("at most " + std::to_string(MultiIndex::kMaxVariables) +
                                " variables are supported");
  }
}

void check_same(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

}  // namespace

MultiIndex::MultiIndex(std::size_t n) : n_(static_cast<std::uint8_t>(n)) { check_size(n); }

MultiIndex::MultiIndex(std::initializer_list<unsigned> exponents)
    : MultiIndex(std::span<const unsigned>(exponents.begin(), exponents.size())) {}

MultiIndex::MultiIndex(std::span<const unsigned> exponents) {
  check_size(exponents.size());
  n_ = static_cast<std::uint8_t>(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > std::numeric_limits<std::uint16_t>::max()) {
      throw std::out_of_range("exponent too large");
    }
    e_[i] = static_cast<std::uint16_t>(exponents[i]);
    degree_ += exponents[i];
  }
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  MultiIndex m(n);
  if (i >= n) throw std::out_of_range("variable index out of range");
  m.e_[i] = 1;
  m.degree_ = 1;
  return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  check_same(n_, other.n_, "multi-index sum");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < n_; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] + other.e_[i]);
  r.degree_ = degree_ + other.degree_;
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  check_same(n_, other.n_, "multi-index difference");
  if (!other.divides(*this)) throw std::invalid_argument("multi-index difference would be negative");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < n_; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] - other.e_[i]);
  r.degree_ = degree_ - other.degree_;
  return r;
}

MultiIndex MultiIndex::with(std::size_t i, unsigned value) const {
  if (i >= n_) throw std::out_of_range("variable index out of range");
  MultiIndex r = *this;
  r.degree_ = degree_ - e_[i] + value;
  r.e_[i] = static_cast<std::uint16_t>(value);
  return r;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < n_; ++i) {
    if (e_[i] > other.e_[i]) return false;
  }
  return true;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) s += ',';
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

MultiIndex MultiIndex::parse(const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (pos >= text.size() || text[pos] != '(') throw ParseError("expected '('", pos);
  ++pos;
  std::vector<unsigned> e;
  skip();
  if (pos < text.size() && text[pos] == ')') {
    ++pos;
  } else {
    while (true) {
      skip();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw ParseError("expected natural number", pos);
      e.push_back(static_cast<unsigned>(std::stoul(text.substr(start, pos - start))));
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      throw ParseError("expected ',' or ')'", pos);
    }
  }
  skip();
  if (pos != text.size()) throw ParseError("trailing characters", pos);
  return MultiIndex(std::span<const unsigned>(e));
}

std::strong_ordering compare(const MultiIndex& a, const MultiIndex& b) {
  check_same(a.size(), b.size(), "compare");
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

std::vector<MultiIndex> monomials_up_to(std::size_t n, unsigned d) {
  std::vector<MultiIndex> out;
  std::vector<unsigned> e(n, 0);
  // Enumerate by odometer, then sort into the monomial order.
  if (n == 0) {
    out.emplace_back(0);
    return out;
  }
  while (true) {
    unsigned deg = 0;
    for (unsigned x : e) deg += x;
    if (deg <= d) out.emplace_back(std::span<const unsigned>(e));
    std::size_t i = 0;
    while (i < n) {
      if (++e[i] <= d) break;
      e[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  std::sort(out.begin(), out.end(), MonomialLess{});
  return out;
}

Staircase Staircase::from_points(std::size_t n, std::span<const MultiIndex> points) {
  Staircase s(n);
  std::vector<MultiIndex> sorted(points.begin(), points.end());
  for (const auto& p : sorted) check_same(p.size(), n, "vertex extraction");
  // Any divisor of p has degree <= |p|, so an ascending sweep sees it first.
  std::sort(sorted.begin(), sorted.end(), MonomialLess{});
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& p : sorted) {
    if (!s.contains(p)) s.vertices_.push_back(p);
  }
  return s;
}

bool Staircase::contains(const MultiIndex& a) const { return covering_vertex(a).has_value(); }

std::optional<std::size_t> Staircase::covering_vertex(const MultiIndex& a) const {
  check_same(a.size(), n_, "staircase membership");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].divides(a)) return i;
  }
  return std::nullopt;
}

bool Staircase::subset_of(const Staircase& other) const {
  check_same(n_, other.n_, "staircase inclusion");
  return std::all_of(vertices_.begin(), vertices_.end(),
                     [&](const MultiIndex& v) { return other.contains(v); });
}

std::string Staircase::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) s += ',';
    s += vertices_[i].to_string();
  }
  return s + "]";
}

bool staircase_contains(const Staircase& s, const MultiIndex& a) { return s.contains(a); }

Staircase vertex_extraction(std::size_t n, std::span<const MultiIndex> points) {
  return Staircase::from_points(n, points);
}

bool staircase_equal(const Staircase& s, const Staircase& t) {
  check_same(s.dimension(), t.dimension(), "staircase equality");
  return s == t;
}

Stabilization chain_stabilization(std::span<const Staircase> chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!chain[i].subset_of(chain[i + 1])) {
      throw std::invalid_argument("staircase chain is not increasing at position " +
                                  std::to_string(i));
    }
  }
  if (chain.size() < 2 || !(chain[chain.size() - 2] == chain.back())) return {};
  std::size_t k = chain.size() - 1;
  while (k > 0 && chain[k - 1] == chain.back()) --k;
  return {true, k};
}

}  // namespace germ
