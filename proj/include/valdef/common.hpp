#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>
#include <gmpxx.h>

// boost::rational's mixed-type comparison templates recurse forever under
// C++20 rewritten-operator rules when the other side is a plain int. These
// exact-match overloads win overload resolution and compare as rationals.
namespace boost {
#define VALDEF_RATIONAL_CMP(op)                                                      \
  inline bool operator op(const rational<std::int64_t>& a, int b) {                  \
    return a op rational<std::int64_t>(b);                                           \
  }                                                                                  \
  inline bool operator op(int a, const rational<std::int64_t>& b) {                  \
    return rational<std::int64_t>(a) op b;                                           \
  }
VALDEF_RATIONAL_CMP(==)
VALDEF_RATIONAL_CMP(!=)
VALDEF_RATIONAL_CMP(<)
VALDEF_RATIONAL_CMP(>)
VALDEF_RATIONAL_CMP(<=)
VALDEF_RATIONAL_CMP(>=)
#undef VALDEF_RATIONAL_CMP
}  // namespace boost

namespace valdef {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Exponents and value-group coordinates. Denominators stay small (bounded by
/// the generalized-series denominator cap), so 64-bit components suffice.
using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An approximate element does not carry enough digits/terms to answer.
class InsufficientPrecision : public Error {
 public:
  using Error::Error;
};

/// The request is well-formed but outside what the library decides.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string to_string(const BigRational& r) { return r.get_str(); }

inline std::string to_string(const BigInt& r) { return r.get_str(); }

/// Parses "3", "-2", "1/2", "-7/3". Whitespace is not accepted here.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw ParseError("expected integer", 0);
    std::size_t i = 0;
    bool negative = false;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      i = 1;
    }
    if (i >= s.size()) throw ParseError("expected digits", i);
    std::int64_t value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ParseError("unexpected character in integer", i);
      if (__builtin_mul_overflow(value, 10, &value) ||
          __builtin_add_overflow(value, s[i] - '0', &value)) {
        throw ParseError("integer out of range", i);
      }
    }
    return negative ? -value : value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator", slash + 1);
  return Rational(parse_int(text.substr(0, slash)), den);
}

inline BigRational to_big(const Rational& r) {
  BigRational q(BigInt(static_cast<long>(r.numerator())), BigInt(static_cast<long>(r.denominator())));
  q.canonicalize();
  return q;
}

/// Exact p-adic valuation of a nonzero integer.
inline std::int64_t padic_valuation(BigInt n, std::uint32_t p) {
  if (n == 0) throw PreconditionViolation("valuation of zero");
  std::int64_t v = 0;
  const BigInt prime(p);
  while (mpz_divisible_p(n.get_mpz_t(), prime.get_mpz_t())) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
    ++v;
  }
  return v;
}

inline BigInt big_pow(std::uint32_t base, std::int64_t exponent) {
  if (exponent < 0) throw PreconditionViolation("negative exponent for integer power");
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(exponent));
  return r;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw PreconditionViolation("element is not invertible modulo " + m.get_str());
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Unsupported("integer overflow");
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace valdef
