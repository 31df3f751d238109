#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlmatch {

/// Exact rational number. GMP keeps every value canonical (den > 0, gcd 1).
using Rational = mpq_class;
using Integer = mpz_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Raised when an exact routine would exceed its enumeration window.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Parses "num/den", "num" or "-num/den". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidInput("empty rational");
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t k = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) k = 1;
    if (k == s.size()) return false;
    for (; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw InvalidInput("malformed rational '" + std::string(text) + "'");
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  Integer n(num_s, 10);
  Integer d{std::string(den), 10};
  if (d == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Always "num/den", including integers ("2/1").
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw InvalidInput("zero denominator");
  Rational r{Integer(static_cast<long>(num)), Integer(static_cast<long>(den))};
  r.canonicalize();
  return r;
}

}  // namespace dlmatch
