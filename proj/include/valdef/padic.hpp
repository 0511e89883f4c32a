#pragma once

// p-adic numbers in Q_p.
//
// A value is either an exact rational or an approximation
//     p^val * (unit + O(p^rel)),  0 <= unit < p^rel,  p does not divide unit,
// with absolute precision val + rel. rel == 0 encodes the approximate zero
// O(p^val). Mixing exact and approximate operands converts the exact one to
// the precision the result can carry anyway.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include "valdef/common.hpp"

namespace valdef {

class PAdic {
 public:
  PAdic() = default;

  static PAdic exact(std::uint32_t p, BigRational q) {
    PAdic r;
    r.p_ = p;
    r.exact_ = true;
    r.q_ = std::move(q);
    r.q_.canonicalize();
    return r;
  }

  static PAdic from_int(std::uint32_t p, std::int64_t n) {
    return exact(p, BigRational(BigInt(static_cast<long>(n))));
  }

  /// p^val * (unit + O(p^rel)); unit is reduced and normalized.
  static PAdic approx(std::uint32_t p, std::int64_t val, BigInt unit, std::int64_t rel) {
    if (rel < 0) rel = 0;
    const BigInt mod = big_pow(p, rel);
    unit = rel > 0 ? mod_floor(unit, mod) : BigInt(0);
    if (unit == 0) return zero_approx(p, val + rel);
    const std::int64_t shift = padic_valuation(unit, p);
    if (shift > 0) {
      unit /= big_pow(p, shift);
      val += shift;
      rel -= shift;
    }
    PAdic r;
    r.p_ = p;
    r.exact_ = false;
    r.val_ = val;
    r.unit_ = std::move(unit);
    r.rel_ = rel;
    return r;
  }

  /// O(p^abs).
  static PAdic zero_approx(std::uint32_t p, std::int64_t abs_prec) {
    PAdic r;
    r.p_ = p;
    r.exact_ = false;
    r.val_ = abs_prec;
    r.rel_ = 0;
    return r;
  }

  std::uint32_t prime() const noexcept { return p_; }
  bool is_exact() const noexcept { return exact_; }
  const BigRational& rational() const {
    if (!exact_) throw PreconditionViolation("p-adic value is not exact");
    return q_;
  }

  bool is_exact_zero() const { return exact_ && q_ == 0; }
  bool is_approx_zero() const { return !exact_ && rel_ == 0; }
  bool known_nonzero() const { return exact_ ? q_ != 0 : rel_ > 0; }

  /// Absolute precision; nullopt for exact values.
  std::optional<std::int64_t> abs_precision() const {
    if (exact_) return std::nullopt;
    return val_ + rel_;
  }

  std::int64_t relative_precision() const {
    if (exact_) throw PreconditionViolation("exact values have unbounded precision");
    return rel_;
  }

  std::int64_t valuation() const {
    if (exact_) {
      if (q_ == 0) throw PreconditionViolation("valuation of zero");
      return padic_valuation(q_.get_num(), p_) - padic_valuation(q_.get_den(), p_);
    }
    if (rel_ == 0) throw InsufficientPrecision("p-adic value indistinguishable from zero at O(" +
                                               std::to_string(p_) + "^" + std::to_string(val_) + ")");
    return val_;
  }

  /// Lower bound on the valuation; nullopt for exact zero.
  std::optional<std::int64_t> lower_bound() const {
    if (exact_) {
      if (q_ == 0) return std::nullopt;
      return valuation();
    }
    return val_;
  }

  /// The unit part p^-v * x reduced modulo p^k.
  BigInt unit_mod(std::int64_t k) const {
    const BigInt mod = big_pow(p_, k);
    if (exact_) {
      const std::int64_t v = valuation();
      BigRational u = q_;
      if (v > 0) u /= BigRational(big_pow(p_, v));
      if (v < 0) u *= BigRational(big_pow(p_, -v));
      u.canonicalize();
      return mod_floor(u.get_num() * mod_inverse(u.get_den(), mod), mod);
    }
    if (rel_ < k) {
      throw InsufficientPrecision("unit known only modulo " + std::to_string(p_) + "^" + std::to_string(rel_));
    }
    return mod_floor(unit_, mod);
  }

  /// Approximation with relative precision rel (exact input) or the input
  /// itself reduced to at most that precision.
  PAdic to_approx(std::int64_t rel) const {
    if (!exact_) {
      if (rel_ <= rel) return *this;
      return approx(p_, val_, unit_, rel);
    }
    if (q_ == 0) throw PreconditionViolation("exact zero has no relative approximation");
    return approx(p_, valuation(), unit_mod(rel), rel);
  }

  /// Drop everything at or beyond p^abs.
  PAdic truncate(std::int64_t abs) const {
    if (exact_) {
      if (q_ == 0) return zero_approx(p_, abs);
      const std::int64_t v = valuation();
      if (v >= abs) return zero_approx(p_, abs);
      return approx(p_, v, unit_mod(abs - v), abs - v);
    }
    if (val_ + rel_ <= abs) return *this;
    if (val_ >= abs) return zero_approx(p_, abs);
    return approx(p_, val_, unit_, abs - val_);
  }

  friend PAdic operator+(const PAdic& a, const PAdic& b) {
    a.require_same_prime(b);
    if (a.exact_ && b.exact_) return exact(a.p_, a.q_ + b.q_);
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    const std::int64_t abs = std::min(a.exact_ ? INT64_MAX : a.val_ + a.rel_,
                                      b.exact_ ? INT64_MAX : b.val_ + b.rel_);
    const PAdic x = a.truncate(abs);
    const PAdic y = b.truncate(abs);
    if (x.rel_ == 0) return y;
    if (y.rel_ == 0) return x;
    const std::int64_t m = std::min(x.val_, y.val_);
    const BigInt mod = big_pow(a.p_, abs - m);
    const BigInt s = x.unit_ * big_pow(a.p_, x.val_ - m) + y.unit_ * big_pow(a.p_, y.val_ - m);
    return approx(a.p_, m, mod_floor(s, mod), abs - m);
  }

  friend PAdic operator-(const PAdic& a) {
    if (a.exact_) return exact(a.p_, -a.q_);
    if (a.rel_ == 0) return a;
    return approx(a.p_, a.val_, -a.unit_, a.rel_);
  }

  friend PAdic operator-(const PAdic& a, const PAdic& b) { return a + (-b); }

  friend PAdic operator*(const PAdic& a, const PAdic& b) {
    a.require_same_prime(b);
    if (a.exact_ && b.exact_) return exact(a.p_, a.q_ * b.q_);
    if (a.is_exact_zero() || b.is_exact_zero()) return exact(a.p_, 0);
    if (a.is_approx_zero() || b.is_approx_zero()) {
      return zero_approx(a.p_, *a.lower_bound() + *b.lower_bound());
    }
    const std::int64_t rel = std::min(a.exact_ ? INT64_MAX : a.rel_, b.exact_ ? INT64_MAX : b.rel_);
    const PAdic x = a.to_approx(rel);
    const PAdic y = b.to_approx(rel);
    return approx(a.p_, x.val_ + y.val_, x.unit_ * y.unit_, rel);
  }

  friend PAdic inv(const PAdic& a) {
    if (a.exact_) {
      if (a.q_ == 0) throw PreconditionViolation("division by zero in Q_" + std::to_string(a.p_));
      return exact(a.p_, 1 / a.q_);
    }
    if (a.rel_ == 0) throw InsufficientPrecision("inverting a p-adic value indistinguishable from zero");
    return approx(a.p_, -a.val_, mod_inverse(a.unit_, big_pow(a.p_, a.rel_)), a.rel_);
  }

  /// Value mod p of an element with nonnegative valuation.
  std::uint32_t residue() const {
    if (exact_) {
      if (q_ == 0) return 0;
      const std::int64_t v = valuation();
      if (v < 0) throw PreconditionViolation("residue of an element with negative valuation");
      if (v > 0) return 0;
      return static_cast<std::uint32_t>(unit_mod(1).get_ui());
    }
    if (val_ >= 1) return 0;
    if (rel_ == 0 || val_ + rel_ < 1) throw InsufficientPrecision("residue not determined");
    if (val_ < 0) throw PreconditionViolation("residue of an element with negative valuation");
    return static_cast<std::uint32_t>(mod_floor(unit_, BigInt(p_)).get_ui());
  }

  /// Structural equality: same representation.
  bool operator==(const PAdic& o) const {
    if (p_ != o.p_ || exact_ != o.exact_) return false;
    if (exact_) return q_ == o.q_;
    return val_ == o.val_ && rel_ == o.rel_ && unit_ == o.unit_;
  }

  std::string to_string() const {
    if (exact_) return q_.get_str();
    const std::string ps = std::to_string(p_);
    const std::string tail = "O(" + ps + "^" + std::to_string(val_ + rel_) + ")";
    if (rel_ == 0) return "O(" + ps + "^" + std::to_string(val_) + ")";
    std::string head = unit_.get_str();
    if (val_ != 0) head += "*" + ps + "^" + std::to_string(val_);
    return head + " + " + tail;
  }

  std::int64_t raw_val() const noexcept { return val_; }
  const BigInt& raw_unit() const noexcept { return unit_; }

 private:
  void require_same_prime(const PAdic& o) const {
    if (p_ != o.p_) throw PreconditionViolation("mixing different primes");
  }

  std::uint32_t p_ = 2;
  bool exact_ = true;
  BigRational q_;
  std::int64_t val_ = 0;
  BigInt unit_;
  std::int64_t rel_ = 0;
};

}  // namespace valdef
