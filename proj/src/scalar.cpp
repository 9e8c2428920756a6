#include "germ/scalar.hpp"

#include <cctype>

namespace germ {

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](std::string_view t) {
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw ParseError("malformed rational '" + s + "'", 0);
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw DomainError("rational with zero denominator");
  return Rational(mpq_class(n, d));
}

std::string GaussianRational::to_string() const {
  if (im_.is_zero()) return re_.to_string();
  std::string im_part;
  Rational mag = abs(im_);
  im_part = mag == Rational(1) ? "i" : mag.to_string() + "*i";
  if (re_.is_zero()) return (im_.sign() < 0 ? "-" : "") + im_part;
  return re_.to_string() + (im_.sign() < 0 ? " - " : " + ") + im_part;
}

}  // namespace germ
