#pragma once

// Exact coefficient fields: the rationals and the Gaussian rationals Q(i).
// Both carry Eigen::NumTraits so they can populate dense Eigen matrices.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "germ/errors.hpp"

namespace germ {

class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT: implicit by design of a field literal
  Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Parses "p" or "p/q" (optionally signed, q != 0).
  static Rational parse(std::string_view text);

  const mpq_class& value() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  /// Reduced "p/q" with q > 0, or "p" when q = 1.
  std::string to_string() const { return v_.get_str(); }

 private:
  mpq_class v_{0};
};

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
inline std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

/// a + b*i with a, b rational.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}                 // NOLINT
  GaussianRational(const Rational& re) : re_(re) {}      // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (!o.im_.is_zero()) im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (!o.im_.is_zero()) im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (im_.is_zero() && o.im_.is_zero()) {
      re_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    if (o.im_.is_zero()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    Rational n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  /// "a", "b*i", "a + b*i" / "a - b*i" with reduced rationals.
  std::string to_string() const;

 private:
  Rational re_;
  Rational im_;
};

inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }
inline std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << x.to_string(); }

/// The two supported coefficient fields.
template <class T>
concept ExactField = std::same_as<T, Rational> || std::same_as<T, GaussianRational>;

template <ExactField S>
inline constexpr const char* field_name = std::same_as<S, Rational> ? "QQ" : "QQ[i]";

}  // namespace germ

template <>
struct std::hash<germ::Rational> {
  std::size_t operator()(const germ::Rational& x) const noexcept {
    return std::hash<std::string>{}(x.to_string());
  }
};

namespace Eigen {

template <>
struct NumTraits<germ::Rational> : GenericNumTraits<germ::Rational> {
  using Real = germ::Rational;
  using NonInteger = germ::Rational;
  using Literal = germ::Rational;
  using Nested = germ::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<germ::GaussianRational> : GenericNumTraits<germ::GaussianRational> {
  using Real = germ::Rational;
  using NonInteger = germ::GaussianRational;
  using Literal = germ::GaussianRational;
  using Nested = germ::GaussianRational;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 128
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
