#pragma once

// Independent reference implementations for tests. Nothing here calls the
// library's ordering, elimination, division or composition code.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "germ/series.hpp"

namespace oracle {

using Exponent = std::vector<unsigned>;
using Poly = std::map<Exponent, mpq_class>;

inline unsigned degree(const Exponent& e) {
  unsigned d = 0;
  for (unsigned x : e) d += x;
  return d;
}

/// True when a precedes b: smaller total degree, then compare the reversed tuples.
inline bool less(const Exponent& a, const Exponent& b) {
  if (degree(a) != degree(b)) return degree(a) < degree(b);
  Exponent ra(a.rbegin(), a.rend()), rb(b.rbegin(), b.rend());
  return ra < rb;
}

inline bool dominates(const Exponent& v, const Exponent& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (v[i] > a[i]) return false;
  }
  return true;
}

inline Exponent exponent(const germ::MultiIndex& m) {
  Exponent e(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) e[i] = m[i];
  return e;
}

inline germ::MultiIndex multi_index(const Exponent& e) {
  germ::MultiIndex m(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) m = m.with(i, e[i]);
  return m;
}

inline Poly poly(const germ::FormalSeries<germ::Rational>& f) {
  Poly p;
  for (const auto& [a, c] : f.terms()) p[exponent(a)] = c.value();
  return p;
}

inline void clean(Poly& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

inline Poly add(const Poly& a, const Poly& b, const mpq_class& s = 1) {
  Poly out = a;
  for (const auto& [e, c] : b) out[e] += s * c;
  clean(out);
  return out;
}

inline Poly mul(const Poly& a, const Poly& b, unsigned max_degree) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (degree(e) <= max_degree) out[e] += ca * cb;
    }
  }
  clean(out);
  return out;
}

inline Poly truncate(const Poly& p, unsigned max_degree) {
  Poly out;
  for (const auto& [e, c] : p) {
    if (degree(e) <= max_degree) out[e] = c;
  }
  return out;
}

/// g(phi(t)) in n variables, truncated to max_degree.
inline Poly compose(const Poly& g, const std::vector<Poly>& phi, std::size_t n, unsigned max_degree) {
  Poly out;
  for (const auto& [e, c] : g) {
    Poly term{{Exponent(n, 0), c}};
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (unsigned p = 0; p < e[i]; ++p) term = mul(term, phi[i], max_degree);
    }
    out = add(out, term);
  }
  return out;
}

inline Poly partial(const Poly& f, std::size_t j) {
  Poly out;
  for (const auto& [e, c] : f) {
    if (e[j] == 0) continue;
    Exponent d = e;
    --d[j];
    out[d] += c * e[j];
  }
  clean(out);
  return out;
}

/// Lowest degree present, or nullopt for zero.
inline std::optional<unsigned> order(const Poly& p) {
  std::optional<unsigned> out;
  for (const auto& [e, c] : p) {
    if (!out || degree(e) < *out) out = degree(e);
  }
  return out;
}

/// All exponents in n variables with degree <= d.
inline std::vector<Exponent> exponents(std::size_t n, unsigned d) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  auto rec = [&](auto& self, std::size_t i, unsigned left) -> void {
    if (i == n) {
      out.push_back(e);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      e[i] = v;
      self(self, i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

/// Dense span of {m * g truncated to degree d : |m| + ord(g) <= d} with columns
/// ordered by `less`, kept in row echelon form over mpq_class.
class DenseJet {
 public:
  DenseJet(std::size_t n, unsigned d, const std::vector<Poly>& gens) : n_(n), d_(d) {
    cols_ = exponents(n, d);
    std::sort(cols_.begin(), cols_.end(), less);
    for (std::size_t j = 0; j < cols_.size(); ++j) index_[cols_[j]] = j;
    for (const auto& g : gens) {
      for (const auto& m : exponents(n, d)) {
        std::vector<mpq_class> row(cols_.size());
        for (const auto& [e, c] : g) {
          Exponent s(n);
          for (std::size_t i = 0; i < n; ++i) s[i] = e[i] + m[i];
          if (degree(s) <= d) row[index_.at(s)] += c;
        }
        insert(std::move(row));
      }
    }
  }

  /// Exponents of the pivot columns: the initial exponents occurring in the span.
  std::set<Exponent> pivots() const {
    std::set<Exponent> out;
    for (const auto& [p, r] : rows_) out.insert(cols_[p]);
    return out;
  }

  std::size_t rank() const { return rows_.size(); }

  bool contains(const Poly& f) const {
    auto row = vec(f);
    return reduce(row);
  }

 private:
  std::vector<mpq_class> vec(const Poly& f) const {
    std::vector<mpq_class> row(cols_.size());
    for (const auto& [e, c] : f) {
      if (degree(e) <= d_) row[index_.at(e)] = c;
    }
    return row;
  }

  /// Eliminates against the stored rows; true when the row vanishes.
  bool reduce(std::vector<mpq_class>& row) const {
    for (const auto& [p, r] : rows_) {
      if (row[p] == 0) continue;
      const mpq_class f = row[p] / r[p];
      for (std::size_t j = p; j < row.size(); ++j) row[j] -= f * r[j];
    }
    return std::all_of(row.begin(), row.end(), [](const mpq_class& x) { return x == 0; });
  }

  void insert(std::vector<mpq_class> row) {
    if (reduce(row)) return;
    std::size_t p = 0;
    while (row[p] == 0) ++p;
    rows_.emplace(p, std::move(row));
  }

  std::size_t n_;
  unsigned d_;
  std::vector<Exponent> cols_;
  std::map<Exponent, std::size_t> index_;
  std::map<std::size_t, std::vector<mpq_class>> rows_;
};

/// Minimal elements of `points` under componentwise order, sorted by `less`.
inline std::vector<Exponent> minimal_points(const std::vector<Exponent>& points) {
  std::set<Exponent> uniq(points.begin(), points.end());
  std::vector<Exponent> out;
  for (const auto& p : uniq) {
    bool minimal = true;
    for (const auto& q : uniq) {
      if (q != p && dominates(q, p)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), less);
  return out;
}

/// Brute-force membership t in 2^m Z + c.
inline bool in_coset(long long t, unsigned m, long long c) {
  const long long mod = 1LL << m;
  return ((t - c) % mod + mod) % mod == 0;
}

}  // namespace oracle
