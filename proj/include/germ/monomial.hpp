#pragma once

// Multi-indices in N^n, the degree-compatible monomial order used throughout
// (total degree first, then the exponents read from the last variable to the
// first), and stable subsets S = S + N^n of N^n represented by their vertices.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace germ {

class MultiIndex {
 public:
  static constexpr std::size_t kMaxVariables = 16;

  MultiIndex() = default;
  /// The zero multi-index in n variables.
  explicit MultiIndex(std::size_t n);
  MultiIndex(std::initializer_list<unsigned> exponents);
  explicit MultiIndex(std::span<const unsigned> exponents);

  /// e_i in n variables.
  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const { return n_; }
  unsigned operator[](std::size_t i) const { return e_[i]; }
  /// |alpha|
  unsigned degree() const { return degree_; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; requires other <= *this componentwise.
  MultiIndex operator-(const MultiIndex& other) const;
  /// Copy with entry i replaced.
  MultiIndex with(std::size_t i, unsigned value) const;

  /// *this <= other componentwise, i.e. other lies in *this + N^n.
  bool divides(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

  /// "(1,0,2)"
  std::string to_string() const;
  static MultiIndex parse(const std::string& text);

 private:
  std::array<std::uint16_t, kMaxVariables> e_{};
  std::uint8_t n_ = 0;
  unsigned degree_ = 0;
};

/// The monomial order. Throws DimensionMismatch on unequal lengths.
std::strong_ordering compare(const MultiIndex& a, const MultiIndex& b);

/// Unchecked strict-weak-order functor for the same order, for containers
/// whose keys already share a dimension.
struct MonomialLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

/// All multi-indices of total degree <= d in n variables, ascending.
std::vector<MultiIndex> monomials_up_to(std::size_t n, unsigned d);

class Staircase {
 public:
  Staircase() = default;
  /// The empty stable set in N^n.
  explicit Staircase(std::size_t n) : n_(n) {}

  /// Minimal vertex set of points + N^n.
  static Staircase from_points(std::size_t n, std::span<const MultiIndex> points);

  std::size_t dimension() const { return n_; }
  /// Vertices, sorted ascending in the monomial order.
  const std::vector<MultiIndex>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }

  /// True iff v <= a componentwise for some vertex v.
  bool contains(const MultiIndex& a) const;
  /// Index (into vertices()) of the first vertex dividing a.
  std::optional<std::size_t> covering_vertex(const MultiIndex& a) const;
  /// Every vertex of *this is contained in other.
  bool subset_of(const Staircase& other) const;

  friend bool operator==(const Staircase& a, const Staircase& b) {
    return a.n_ == b.n_ && a.vertices_ == b.vertices_;
  }

  /// "[(1,0),(0,2)]"; "[]" for the empty staircase.
  std::string to_string() const;

 private:
  std::size_t n_ = 0;
  std::vector<MultiIndex> vertices_;
};

bool staircase_contains(const Staircase& s, const MultiIndex& a);
Staircase vertex_extraction(std::size_t n, std::span<const MultiIndex> points);
bool staircase_equal(const Staircase& s, const Staircase& t);

struct Stabilization {
  bool stabilized = false;
  /// Least k with chain[k] = chain[k+1] = ... = chain.back(), when stabilized.
  std::size_t index = 0;
};

/// Detects where an increasing chain of staircases becomes constant. A chain
/// whose last two entries differ (or of length < 2) reports no stabilization.
/// Throws std::invalid_argument if the chain is not increasing.
Stabilization chain_stabilization(std::span<const Staircase> chain);

}  // namespace germ
