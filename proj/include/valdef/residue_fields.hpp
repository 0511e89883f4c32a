#pragma once

// Base fields: prime fields F_p, finite fields F_q (q <= 2^16) and Q.
//
// Finite field elements are encoded as integers 0..q-1 holding the base-p
// digits of a polynomial in the generator g, lowest digit first. The modulus
// for each (p, m) comes from a fixed table of primitive polynomials, so the
// encoding is the same on every run.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "valdef/common.hpp"

namespace valdef {

class BaseField;
using BaseFieldPtr = std::shared_ptr<const BaseField>;

class BaseElement {
 public:
  BaseElement() = default;
  BaseElement(BaseFieldPtr field, std::uint32_t code) : field_(std::move(field)), value_(code) {}
  BaseElement(BaseFieldPtr field, BigRational q) : field_(std::move(field)), value_(std::move(q)) {}

  const BaseFieldPtr& field() const noexcept { return field_; }
  bool is_rational() const noexcept { return std::holds_alternative<BigRational>(value_); }
  std::uint32_t code() const { return std::get<std::uint32_t>(value_); }
  const BigRational& rational() const { return std::get<BigRational>(value_); }

  bool is_zero() const {
    return is_rational() ? rational() == 0 : code() == 0;
  }

  bool operator==(const BaseElement& o) const { return value_ == o.value_; }

 private:
  BaseFieldPtr field_;
  std::variant<std::uint32_t, BigRational> value_;
};

namespace detail {

/// Primitive polynomials x^m + c_{m-1} x^{m-1} + ... + c_0, stored as the low
/// coefficients c_0..c_{m-1}.
inline const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>&
primitive_moduli() {
  static const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> table = {
      {{2, 2}, {1, 1}},
      {{2, 3}, {1, 1, 0}},
      {{2, 4}, {1, 1, 0, 0}},
      {{2, 5}, {1, 0, 1, 0, 0}},
      {{2, 6}, {1, 1, 0, 1, 1, 0}},
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0}},
      {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0}},
      {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0}},
      {{2, 10}, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0}},
      {{2, 11}, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{2, 12}, {1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0}},
      {{2, 13}, {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{2, 14}, {1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0}},
      {{2, 15}, {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{2, 16}, {1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{3, 2}, {2, 2}},
      {{3, 3}, {1, 2, 0}},
      {{3, 4}, {2, 0, 0, 2}},
      {{3, 5}, {1, 2, 0, 0, 0}},
      {{3, 6}, {2, 2, 1, 0, 2, 0}},
      {{3, 7}, {1, 0, 2, 0, 0, 0, 0}},
      {{3, 8}, {2, 2, 2, 0, 1, 2, 0, 0}},
      {{3, 9}, {1, 1, 2, 2, 0, 0, 0, 0, 0}},
      {{3, 10}, {2, 1, 0, 0, 2, 2, 2, 0, 0, 0}},
      {{5, 2}, {2, 4}},
      {{5, 3}, {3, 3, 0}},
      {{5, 4}, {2, 4, 4, 0}},
      {{5, 5}, {3, 4, 0, 0, 0}},
      {{5, 6}, {2, 0, 1, 4, 1, 0}},
      {{7, 2}, {3, 6}},
      {{7, 3}, {4, 0, 6}},
      {{7, 4}, {3, 4, 5, 0}},
      {{7, 5}, {4, 1, 0, 0, 0}},
      {{11, 2}, {2, 7}},
      {{11, 3}, {9, 2, 0}},
      {{11, 4}, {2, 10, 8, 0}},
      {{13, 2}, {2, 12}},
      {{13, 3}, {11, 2, 0}},
      {{13, 4}, {2, 12, 3, 0}},
      {{17, 2}, {3, 16}},
      {{17, 3}, {14, 1, 0}},
      {{19, 2}, {2, 18}},
      {{19, 3}, {17, 4, 0}},
      {{23, 2}, {5, 21}},
      {{29, 2}, {2, 24}},
      {{31, 2}, {3, 29}},
  };
  return table;
}

}  // namespace detail

class BaseField : public std::enable_shared_from_this<BaseField> {
 public:
  enum class Kind { Prime, Finite, Rationals };

  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  static BaseFieldPtr rationals() {
    static const BaseFieldPtr q(new BaseField(Kind::Rationals, 0, 0));
    return q;
  }

  static BaseFieldPtr prime(std::uint32_t p) { return finite(p, 1); }

  /// F_q with q = p^m. Instances are cached; tables are built once.
  static BaseFieldPtr finite(std::uint32_t p, std::uint32_t m) {
    if (!is_prime(p)) throw PreconditionViolation("characteristic " + std::to_string(p) + " is not prime");
    if (m < 1) throw PreconditionViolation("extension degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
      q *= p;
      if (q > kMaxOrder) throw Unsupported("finite field order exceeds 2^16");
    }
    static std::mutex mutex;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, BaseFieldPtr> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{p, m}];
    if (!slot) slot.reset(new BaseField(m == 1 ? Kind::Prime : Kind::Finite, p, m));
    return slot;
  }

  /// F_q from its order q.
  static BaseFieldPtr of_order(std::uint64_t q) {
    for (std::uint32_t p = 2; p <= q; ++p) {
      if (q % p != 0) continue;
      std::uint32_t m = 0;
      std::uint64_t r = q;
      while (r % p == 0) {
        r /= p;
        ++m;
      }
      if (r != 1) throw PreconditionViolation(std::to_string(q) + " is not a prime power");
      return finite(p, m);
    }
    throw PreconditionViolation(std::to_string(q) + " is not a prime power");
  }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ != Kind::Rationals; }
  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return m_; }
  std::uint32_t order() const noexcept { return q_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Prime: return "Fp(" + std::to_string(p_) + ")";
      case Kind::Finite: return "Fq(" + std::to_string(q_) + ")";
      case Kind::Rationals: return "Q";
    }
    return "?";
  }

  bool operator==(const BaseField& o) const { return kind_ == o.kind_ && p_ == o.p_ && m_ == o.m_; }

  // --- elements ---

  BaseElement zero() const { return from_int(0); }
  BaseElement one() const { return from_int(1); }

  BaseElement from_int(std::int64_t n) const {
    if (!is_finite()) return BaseElement(self(), BigRational(static_cast<long>(n)));
    const auto r = static_cast<std::uint32_t>(((n % static_cast<std::int64_t>(p_)) + p_) % p_);
    return BaseElement(self(), r);
  }

  /// Image of a rational number; fails when the denominator vanishes mod p.
  BaseElement from_rational(const BigRational& q) const {
    if (!is_finite()) {
      BigRational c = q;
      c.canonicalize();
      return BaseElement(self(), c);
    }
    const BigInt prime(p_);
    const BigInt num = mod_floor(q.get_num(), prime);
    const BigInt den = mod_floor(q.get_den(), prime);
    if (den == 0) throw PreconditionViolation("denominator vanishes in " + to_string());
    const BigInt r = mod_floor(num * mod_inverse(den, prime), prime);
    return BaseElement(self(), static_cast<std::uint32_t>(r.get_ui()));
  }

  /// Element with the given code (finite fields only).
  BaseElement element(std::uint32_t code) const {
    if (!is_finite() || code >= q_) throw PreconditionViolation("element code out of range");
    return BaseElement(self(), code);
  }

  /// The generator g of F_q over F_p (g = x mod the modulus).
  BaseElement generator() const {
    if (kind_ != Kind::Finite) throw PreconditionViolation("generator requires a proper extension field");
    return BaseElement(self(), p_);
  }

  std::vector<BaseElement> elements() const {
    if (!is_finite()) throw Unsupported("cannot enumerate an infinite field");
    std::vector<BaseElement> out;
    out.reserve(q_);
    for (std::uint32_t c = 0; c < q_; ++c) out.emplace_back(self(), c);
    return out;
  }

  BaseElement add(const BaseElement& a, const BaseElement& b) const {
    if (!is_finite()) return BaseElement(self(), a.rational() + b.rational());
    if (kind_ == Kind::Prime) return BaseElement(self(), (a.code() + b.code()) % p_);
    std::uint32_t x = a.code(), y = b.code(), r = 0, place = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
      r += ((x % p_ + y % p_) % p_) * place;
      x /= p_;
      y /= p_;
      place *= p_;
    }
    return BaseElement(self(), r);
  }

  BaseElement neg(const BaseElement& a) const {
    if (!is_finite()) return BaseElement(self(), BigRational(-a.rational()));
    if (kind_ == Kind::Prime) return BaseElement(self(), (p_ - a.code()) % p_);
    std::uint32_t x = a.code(), r = 0, place = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
      r += ((p_ - x % p_) % p_) * place;
      x /= p_;
      place *= p_;
    }
    return BaseElement(self(), r);
  }

  BaseElement sub(const BaseElement& a, const BaseElement& b) const { return add(a, neg(b)); }

  BaseElement mul(const BaseElement& a, const BaseElement& b) const {
    if (!is_finite()) return BaseElement(self(), a.rational() * b.rational());
    if (a.code() == 0 || b.code() == 0) return zero();
    if (kind_ == Kind::Prime) {
      return BaseElement(self(), static_cast<std::uint32_t>(
                                     static_cast<std::uint64_t>(a.code()) * b.code() % p_));
    }
    return BaseElement(self(), exp_[(log_[a.code()] + log_[b.code()]) % (q_ - 1)]);
  }

  BaseElement inv(const BaseElement& a) const {
    if (a.is_zero()) throw PreconditionViolation("division by zero in " + to_string());
    if (!is_finite()) return BaseElement(self(), BigRational(1 / a.rational()));
    return BaseElement(self(), exp_[(q_ - 1 - log_[a.code()]) % (q_ - 1)]);
  }

  BaseElement pow(const BaseElement& a, std::int64_t n) const {
    if (n < 0) return pow(inv(a), -n);
    if (!is_finite()) {
      BigInt num, den;
      mpz_pow_ui(num.get_mpz_t(), a.rational().get_num_mpz_t(), static_cast<unsigned long>(n));
      mpz_pow_ui(den.get_mpz_t(), a.rational().get_den_mpz_t(), static_cast<unsigned long>(n));
      return BaseElement(self(), BigRational(num, den));
    }
    if (n == 0) return one();
    if (a.is_zero()) return zero();
    const auto e = static_cast<std::uint64_t>(log_[a.code()]) * static_cast<std::uint64_t>(n % (q_ - 1));
    return BaseElement(self(), exp_[e % (q_ - 1)]);
  }

  /// Discrete logarithm to the fixed primitive element (finite fields).
  std::uint32_t log(const BaseElement& a) const {
    if (!is_finite() || a.is_zero()) throw PreconditionViolation("log of zero or in an infinite field");
    return log_[a.code()];
  }

  /// Whether a is an n-th power, with a root when it is.
  std::optional<BaseElement> nth_root(const BaseElement& a, std::int64_t n) const {
    if (n < 1) throw PreconditionViolation("n must be positive");
    if (a.is_zero()) return zero();
    if (!is_finite()) {
      const BigRational& q = a.rational();
      if (q < 0 && n % 2 == 0) return std::nullopt;
      BigInt num_root, den_root;
      const BigInt num = abs(q.get_num());
      if (!mpz_root(num_root.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
      if (!mpz_root(den_root.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
      if (q < 0) num_root = -num_root;
      return BaseElement(self(), BigRational(num_root, den_root));
    }
    const std::int64_t order = q_ - 1;
    const std::int64_t d = std::gcd(n, order);
    const std::int64_t k = log_[a.code()];
    if (k % d != 0) return std::nullopt;
    const std::int64_t reduced = order / d;
    if (reduced == 1) return one();
    const BigInt inv = mod_inverse(BigInt(static_cast<long>((n / d) % reduced)), BigInt(static_cast<long>(reduced)));
    const std::int64_t j = ((k / d) % reduced) * inv.get_si() % reduced;
    return BaseElement(self(), exp_[static_cast<std::size_t>(j)]);
  }

  bool is_nth_power(const BaseElement& a, std::int64_t n) const { return nth_root(a, n).has_value(); }

  std::string format(const BaseElement& a) const {
    if (!is_finite()) return a.rational().get_str();
    if (kind_ == Kind::Prime) return std::to_string(a.code());
    if (a.code() == 0) return "0";
    std::string out;
    std::uint32_t x = a.code();
    for (std::uint32_t i = 0; i < m_; ++i, x /= p_) {
      const std::uint32_t c = x % p_;
      if (c == 0) continue;
      std::string term;
      if (i == 0) {
        term = std::to_string(c);
      } else {
        term = c == 1 ? "" : std::to_string(c) + "*";
        term += i == 1 ? "g" : "g^" + std::to_string(i);
      }
      out = out.empty() ? term : term + "+" + out;
    }
    return out;
  }

 private:
  BaseField(Kind kind, std::uint32_t p, std::uint32_t m) : kind_(kind), p_(p), m_(m), q_(1) {
    if (kind_ == Kind::Rationals) {
      q_ = 0;
      return;
    }
    for (std::uint32_t i = 0; i < m_; ++i) q_ *= p_;
    build_tables();
  }

  BaseFieldPtr self() const { return shared_from_this(); }

  // Multiplication by g on the digit encoding, reducing by the modulus.
  std::uint32_t times_generator(std::uint32_t code, const std::vector<std::uint32_t>& low) const {
    std::vector<std::uint32_t> digits(m_ + 1, 0);
    for (std::uint32_t i = 0; i < m_; ++i, code /= p_) digits[i + 1] = code % p_;
    const std::uint32_t top = digits[m_];
    std::uint32_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
      const std::uint32_t d = (digits[i] + (p_ - low[i]) * top) % p_;
      r += d * place;
      place *= p_;
    }
    return r;
  }

  // Fills exp_/log_ from a primitive modulus; false if `low` is not primitive.
  bool try_modulus(const std::vector<std::uint32_t>& low) {
    const std::uint32_t n = q_ - 1;
    exp_.assign(n, 0);
    log_.assign(q_, 0);
    std::vector<bool> seen(q_, false);
    std::uint32_t cur = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (cur == 0 || seen[cur]) return false;
      seen[cur] = true;
      exp_[i] = cur;
      log_[cur] = i;
      cur = times_generator(cur, low);
    }
    return cur == 1;
  }

  void build_tables() {
    if (m_ == 1) {
      // prime field: smallest primitive root
      for (std::uint32_t g = 1; g < p_; ++g) {
        std::vector<std::uint32_t> low{(p_ - g) % p_};
        if (try_modulus(low)) return;
      }
      throw Error("no primitive root found");
    }
    const auto& table = detail::primitive_moduli();
    if (auto it = table.find({p_, m_}); it != table.end() && try_modulus(it->second)) return;
    // deterministic search over monic polynomials of degree m
    std::vector<std::uint32_t> low(m_, 0);
    for (std::uint64_t idx = 1; idx < q_; ++idx) {
      std::uint64_t x = idx;
      for (std::uint32_t i = 0; i < m_; ++i, x /= p_) low[i] = static_cast<std::uint32_t>(x % p_);
      if (low[0] != 0 && try_modulus(low)) return;
    }
    throw Error("no primitive polynomial found");
  }

  Kind kind_;
  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t q_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

inline BaseElement operator+(const BaseElement& a, const BaseElement& b) { return a.field()->add(a, b); }
inline BaseElement operator-(const BaseElement& a, const BaseElement& b) { return a.field()->sub(a, b); }
inline BaseElement operator-(const BaseElement& a) { return a.field()->neg(a); }
inline BaseElement operator*(const BaseElement& a, const BaseElement& b) { return a.field()->mul(a, b); }
inline BaseElement inv(const BaseElement& a) { return a.field()->inv(a); }
inline BaseElement pow(const BaseElement& a, std::int64_t n) { return a.field()->pow(a, n); }
inline std::string to_string(const BaseElement& a) { return a.field()->format(a); }

/// |F^x / (F^x)^p|. Finite fields: gcd(p, q-1). Q has infinite index.
inline std::uint64_t power_class_index(const BaseField& field, std::uint32_t p) {
  if (!is_prime(p)) throw PreconditionViolation("p must be prime");
  if (!field.is_finite()) throw Unsupported("Q^x/(Q^x)^" + std::to_string(p) + " is infinite");
  return std::gcd<std::uint64_t, std::uint64_t>(p, field.order() - 1);
}

/// All y in F with y^p - y = c, p = char F.
inline std::vector<BaseElement> artin_schreier_roots(const BaseElement& c) {
  const auto& field = *c.field();
  if (!field.is_finite()) throw PreconditionViolation("Artin-Schreier roots need positive characteristic");
  const std::uint32_t p = field.characteristic();
  std::vector<BaseElement> roots;
  for (const auto& y : field.elements()) {
    if (pow(y, p) - y == c) roots.push_back(y);
  }
  return roots;
}

// --- polynomials ---

inline BaseElement times_int(const BaseElement& a, std::int64_t n) { return a * a.field()->from_int(n); }

/// Dense univariate polynomial, coefficients lowest degree first.
template <class R>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<R> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw PreconditionViolation("polynomial needs at least one coefficient");
  }

  std::size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<R>& coeffs() const noexcept { return coeffs_; }
  const R& operator[](std::size_t i) const { return coeffs_.at(i); }

  R eval(const R& x) const {
    R acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial({times_int(coeffs_[0], 0)});
    std::vector<R> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      d.push_back(times_int(coeffs_[i], static_cast<std::int64_t>(i)));
    }
    return Polynomial(std::move(d));
  }

  template <class F>
  auto map(F&& f) const {
    using S = decltype(f(coeffs_[0]));
    std::vector<S> out;
    for (const auto& c : coeffs_) out.push_back(f(c));
    return Polynomial<S>(std::move(out));
  }

 private:
  std::vector<R> coeffs_;
};

struct SimpleRoot {
  BaseElement root;
  bool simple;
};

namespace detail {

inline std::vector<BigInt> positive_divisors(BigInt n) {
  n = abs(n);
  if (n > BigInt("1000000000000")) throw Unsupported("coefficient too large for the rational root search");
  std::vector<BigInt> small, large;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace detail

/// Roots of f in its coefficient field, each flagged simple (f'(r) != 0).
/// Finite fields: enumeration. Q: rational root theorem on the cleared
/// integer polynomial.
inline std::vector<SimpleRoot> simple_roots(const Polynomial<BaseElement>& f) {
  if (f.degree() < 1) throw PreconditionViolation("polynomial must have degree >= 1");
  const auto& field = *f[0].field();
  const auto df = f.derivative();
  std::vector<SimpleRoot> out;
  auto consider = [&](const BaseElement& r) {
    if (f.eval(r).is_zero()) out.push_back({r, !df.eval(r).is_zero()});
  };
  if (field.is_finite()) {
    for (const auto& r : field.elements()) consider(r);
    return out;
  }
  BigInt lcm = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.rational().get_den_mpz_t());
  std::vector<BigInt> ints;
  for (const auto& c : f.coeffs()) ints.push_back(BigInt(c.rational() * lcm));
  std::size_t low = 0;
  while (low < ints.size() && ints[low] == 0) ++low;
  if (low == ints.size()) throw PreconditionViolation("zero polynomial");
  if (low > 0) consider(field.zero());
  std::size_t high = ints.size() - 1;
  while (ints[high] == 0) --high;
  if (high == low) return out;
  const auto num_divs = detail::positive_divisors(ints[low]);
  const auto den_divs = detail::positive_divisors(ints[high]);
  std::vector<BigRational> candidates;
  for (const auto& a : num_divs) {
    for (const auto& b : den_divs) {
      BigRational r(a, b);
      r.canonicalize();
      candidates.push_back(r);
      candidates.push_back(-r);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& r : candidates) consider(field.from_rational(r));
  return out;
}

}  // namespace valdef
