#pragma once

// n-th power tests and roots in descriptor fields, and power class indices.
//
// Series layers: x = c X^e (1 + h) with v(h) > 0. When the characteristic
// does not divide n, 1 + h is always an n-th power, so x is one iff n | e in
// the exponent group and c is one in the inner field. In characteristic p
// with p | n the test goes through the (unique) p-th root.
//
// Q_p: x = p^v u. For p not dividing n, u is an n-th power iff its residue
// is. Otherwise, with k = v_p(n), u is an n-th power iff it is one modulo
// p^(2k+1) (Hensel's lemma with v(f') = k).

#include <cstdint>
#include <numeric>
#include <optional>

#include "valdef/element.hpp"
#include "valdef/hensel.hpp"

namespace valdef {

namespace detail {

inline std::int64_t wild_modulus_exponent(std::uint32_t p, std::int64_t n) {
  return 2 * padic_valuation(BigInt(static_cast<long>(n)), p) + 1;
}

/// Some y with y^n = u mod p^m, u a unit; brute force over units.
inline std::optional<BigInt> root_mod_prime_power(const BigInt& u, std::int64_t n, std::uint32_t p, std::int64_t m) {
  const BigInt mod = big_pow(p, m);
  if (mod > 2000000) throw Unsupported("wild power test modulus too large");
  const BigInt target = mod_floor(u, mod);
  BigInt r;
  for (BigInt y = 1; y < mod; ++y) {
    if (mpz_divisible_ui_p(y.get_mpz_t(), p)) continue;
    mpz_powm_ui(r.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(n), mod.get_mpz_t());
    if (r == target) return y;
  }
  return std::nullopt;
}

inline ElementPoly power_poly(const Element& target, std::int64_t n) {
  std::vector<Element> coeffs(static_cast<std::size_t>(n) + 1, Element::zero(target.field()));
  coeffs[0] = -target;
  coeffs.back() = Element::one(target.field());
  return ElementPoly(std::move(coeffs));
}

}  // namespace detail

/// p-th root in characteristic p, if it exists. Series must be exact at the
/// outer layer: unseen terms could break p-th powerness.
inline std::optional<Element> frobenius_root(const Element& x, std::uint32_t p) {
  if (x.is_exact_zero()) return x;
  if (x.is_base()) {
    const auto& bf = *x.base().field();
    if (!bf.is_finite() || bf.characteristic() != p) throw PreconditionViolation("Frobenius needs characteristic p");
    return Element::from_base(x.field(), *bf.nth_root(x.base(), p));
  }
  if (x.is_padic()) throw PreconditionViolation("Frobenius needs characteristic p");
  const auto& s = x.series();
  if (s.prec) throw InsufficientPrecision("p-th power test needs an exact outer layer");
  std::vector<SeriesTerm> terms;
  for (const auto& t : s.terms) {
    const Rational e = t.exp / static_cast<std::int64_t>(p);
    if (x.field()->factor() == Factor::Z && e.denominator() != 1) return std::nullopt;
    auto c = frobenius_root(t.coeff, p);
    if (!c) return std::nullopt;
    terms.push_back({e, *c});
  }
  return Element::from_terms(x.field(), std::move(terms));
}

/// Whether x is an n-th power in its field. Zero counts as one.
inline bool is_nth_power(const Element& x, std::int64_t n) {
  if (n < 1) throw PreconditionViolation("n must be positive");
  if (n == 1 || x.is_exact_zero()) return true;
  if (x.is_base()) return x.base().field()->is_nth_power(x.base(), n);
  if (x.is_padic()) {
    const auto& a = x.padic();
    const std::uint32_t p = a.prime();
    if (a.valuation() % n != 0) return false;
    if (n % p != 0) {
      const auto fp = BaseField::prime(p);
      return fp->is_nth_power(fp->from_int(a.unit_mod(1).get_si()), n);
    }
    const std::int64_t m = detail::wild_modulus_exponent(p, n);
    return detail::root_mod_prime_power(a.unit_mod(m), n, p, m).has_value();
  }
  const auto& lead = leading_term(x);
  const std::uint32_t ch = x.field()->characteristic();
  if (ch != 0 && n % ch == 0) {
    const auto r = frobenius_root(x, ch);
    if (!r) return false;
    return is_nth_power(*r, n / ch);
  }
  if (x.field()->factor() == Factor::Z && lead.exp.numerator() % n != 0) return false;
  return is_nth_power(lead.coeff, n);
}

struct RootResult {
  Element root;
  /// v_1 lower bound of root^n - x; nullopt when exact.
  std::optional<Rational> residual;
};

/// An n-th root of x, when one exists, accurate to the precision cap.
inline std::optional<RootResult> nth_root(const Element& x, std::int64_t n) {
  if (n < 1) throw PreconditionViolation("n must be positive");
  if (n == 1 || x.is_exact_zero()) return RootResult{x, std::nullopt};
  if (!is_nth_power(x, n)) return std::nullopt;
  const FieldPtr& f = x.field();
  if (x.is_base()) return RootResult{Element::from_base(f, *x.base().field()->nth_root(x.base(), n)), std::nullopt};

  auto finish = [&](Element root) {
    return RootResult{root, outer_lower_bound(pow(root, n) - x)};
  };

  if (x.is_padic()) {
    const auto& a = x.padic();
    const std::uint32_t p = a.prime();
    const std::int64_t v = a.valuation();
    const Element scale = Element::from_padic(f, PAdic::exact(p, BigRational(big_pow(p, std::abs(v / n)))));
    const Element shift = v >= 0 ? scale : inv(scale);
    const Element unit = x * pow(Element::from_int(f, p), -v);
    if (n % p != 0) {
      const auto fp = BaseField::prime(p);
      const auto r0 = fp->nth_root(fp->from_int(a.unit_mod(1).get_si()), n);
      const auto lifted = hensel_lift(detail::power_poly(unit, n), Element::from_int(f, r0->code()));
      return finish(lifted.root * shift);
    }
    const std::int64_t m = detail::wild_modulus_exponent(p, n);
    const auto y0 = detail::root_mod_prime_power(a.unit_mod(m), n, p, m);
    const std::int64_t k = padic_valuation(BigInt(static_cast<long>(n)), p);
    const auto refined = newton_refine(detail::power_poly(unit, n), Element::from_rational(f, BigRational(*y0)),
                                       Rational(16 * k + 16));
    return finish(truncate(refined.root, precision_cap(f)) * shift);
  }

  const auto& lead = leading_term(x);
  const std::uint32_t ch = f->characteristic();
  if (ch != 0 && n % ch == 0) {
    const auto r = frobenius_root(x, ch);
    auto rest = nth_root(*r, n / ch);
    return finish(rest->root);
  }
  const auto c_root = nth_root(lead.coeff, n);
  const Element c_inv = inv(lead.coeff);
  const Element unit = shift(x, c_inv, -lead.exp);
  const auto w = hensel_lift(detail::power_poly(unit, n), Element::one(f));
  return finish(shift(w.root, c_root->root, lead.exp / n));
}

/// Whether K contains a primitive p-th root of unity.
inline bool has_primitive_root_of_unity(const Field& f, std::uint32_t p) {
  if (f.characteristic() == p) return false;
  if (p == 2) return true;
  switch (f.kind()) {
    case Field::Kind::Base:
      return f.base_field()->is_finite() && (f.base_field()->order() - 1) % p == 0;
    case Field::Kind::AlgClosed: return true;
    case Field::Kind::PAdic: return f.prime() != p && (f.prime() - 1) % p == 0;
    case Field::Kind::Series: return has_primitive_root_of_unity(*f.inner(), p);
  }
  return false;
}

/// |K^x / (K^x)^p| of the field itself. Throws Unsupported when infinite or
/// not covered (wild series layers, Q).
inline std::uint64_t power_class_index(const Field& f, std::uint32_t p) {
  if (!is_prime(p)) throw PreconditionViolation("p must be prime");
  switch (f.kind()) {
    case Field::Kind::Base: return power_class_index(*f.base_field(), p);
    case Field::Kind::AlgClosed: return 1;
    case Field::Kind::PAdic:
      if (f.prime() != p) return p * std::gcd<std::uint64_t>(p, f.prime() - 1);
      return p == 2 ? 8 : static_cast<std::uint64_t>(p) * p;
    case Field::Kind::Series:
      if (f.characteristic() == p) throw Unsupported("index is infinite in characteristic p");
      return (f.factor() == Factor::Z ? p : 1) * power_class_index(*f.inner(), p);
  }
  return 0;
}

/// The same index computed through v_level: |Gamma/p Gamma| times the index
/// of the residue field, valid when the residue characteristic is not p.
inline std::uint64_t power_class_index_valued(const Field& f, std::size_t level, std::uint32_t p) {
  if (level == 0) return power_class_index(f, p);
  const auto rf = f.residue_field(level);
  if (rf->characteristic() == p) {
    if (f.kind() == Field::Kind::PAdic) return power_class_index(f, p);
    throw Unsupported("wild residue characteristic at this level");
  }
  std::uint64_t group = 1;
  const GroupShape shape = f.value_group(level);
  for (auto factor : shape.factors()) {
    if (factor == Factor::Z) group *= p;
  }
  return group * power_class_index(*rf, p);
}

}  // namespace valdef
