#pragma once

// Elements of descriptor fields.
//
// A series element is a finite sorted list of (exponent, coefficient) terms
// plus an optional absolute precision: with prec = N the element is known
// modulo var^N. Coefficients live in the inner field and may themselves be
// approximate. Exact-zero coefficients are never stored; an inexact zero
// coefficient (e.g. O(5^3)) is kept, because it blocks valuation queries.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "valdef/common.hpp"
#include "valdef/field.hpp"
#include "valdef/ordered_groups.hpp"
#include "valdef/padic.hpp"
#include "valdef/residue_fields.hpp"

namespace valdef {

class Element;

struct SeriesTerm;

struct SeriesData {
  std::vector<SeriesTerm> terms;
  std::optional<Rational> prec;
};

class Element {
 public:
  Element() = default;

  // --- construction ---

  static Element zero(const FieldPtr& f) { return from_int(f, 0); }
  static Element one(const FieldPtr& f) { return from_int(f, 1); }

  static Element from_int(const FieldPtr& f, std::int64_t n) {
    return from_rational(f, BigRational(BigInt(static_cast<long>(n))));
  }

  static Element from_rational(const FieldPtr& f, const BigRational& q) {
    switch (f->kind()) {
      case Field::Kind::Base: return Element(f, f->base_field()->from_rational(q));
      case Field::Kind::PAdic: return Element(f, PAdic::exact(f->prime(), q));
      case Field::Kind::Series: return constant(f, from_rational(f->inner(), q));
      case Field::Kind::AlgClosed: break;
    }
    throw Unsupported("algebraically closed fields carry no element representation");
  }

  static Element from_base(const FieldPtr& f, BaseElement b) {
    if (f->kind() != Field::Kind::Base) throw PreconditionViolation("not a base field");
    return Element(f, std::move(b));
  }

  static Element from_padic(const FieldPtr& f, PAdic a) {
    if (f->kind() != Field::Kind::PAdic || f->prime() != a.prime()) {
      throw PreconditionViolation("p-adic value does not match the field");
    }
    return Element(f, std::move(a));
  }

  /// Series element from terms (any order, may repeat exponents).
  static Element from_terms(const FieldPtr& f, std::vector<SeriesTerm> terms,
                            std::optional<Rational> prec = std::nullopt);

  /// Embedding of an inner-field element as a constant series.
  static Element constant(const FieldPtr& f, Element c);

  /// c * var^exp in the series field f; c lies in f's inner field.
  static Element monomial(const FieldPtr& f, Element c, Rational exp);

  /// The outer variable of a series field, or p for Q_p.
  static Element variable(const FieldPtr& f) {
    if (f->kind() == Field::Kind::PAdic) return from_int(f, f->prime());
    return monomial(f, one(f->inner()), Rational(1));
  }

  /// Element whose v_level value is the smallest positive element
  /// (1,0,...,0); requires that value group to be discrete.
  static Element uniformizer(const FieldPtr& f, std::size_t level) {
    if (level == 0) throw PreconditionViolation("the trivial valuation has no uniformizer");
    f->require_level(level);
    if (!is_discrete(f->value_group(level))) {
      throw PreconditionViolation("value group " + f->value_group(level).to_string() + " is not discrete");
    }
    return level_variable(f, level);
  }

  /// Element with v_level value (1,0,...,0), discrete or not.
  static Element level_variable(const FieldPtr& f, std::size_t level) {
    if (level == 1) return variable(f);
    return constant(f, level_variable(f->inner(), level - 1));
  }

  /// Approximate zero known to v_1-precision abs.
  static Element zero_approx(const FieldPtr& f, Rational abs) {
    if (f->kind() == Field::Kind::PAdic) {
      if (abs.denominator() != 1) throw PreconditionViolation("p-adic precision must be integral");
      return Element(f, PAdic::zero_approx(f->prime(), abs.numerator()));
    }
    if (f->kind() != Field::Kind::Series) throw PreconditionViolation("base fields are exact");
    return from_terms(f, {}, abs);
  }

  // --- inspection ---

  const FieldPtr& field() const noexcept { return field_; }
  bool is_base() const noexcept { return data_.index() == 0; }
  bool is_padic() const noexcept { return data_.index() == 1; }
  bool is_series() const noexcept { return data_.index() == 2; }
  const BaseElement& base() const { return std::get<BaseElement>(data_); }
  const PAdic& padic() const { return std::get<PAdic>(data_); }
  const SeriesData& series() const { return *std::get<std::shared_ptr<const SeriesData>>(data_); }

  bool is_exact() const;
  bool is_exact_zero() const;
  bool known_nonzero() const;
  /// Nonzero is unknown: an approximation of zero.
  bool is_approx_zero() const { return !is_exact_zero() && !known_nonzero(); }

  bool operator==(const Element& o) const;

 private:
  using Series = std::shared_ptr<const SeriesData>;

  Element(FieldPtr f, BaseElement b) : field_(std::move(f)), data_(std::move(b)) {}
  Element(FieldPtr f, PAdic a) : field_(std::move(f)), data_(std::move(a)) {}
  Element(FieldPtr f, Series s) : field_(std::move(f)), data_(std::move(s)) {}

  friend Element make_series(const FieldPtr& f, std::vector<SeriesTerm> sorted, std::optional<Rational> prec);

  FieldPtr field_;
  std::variant<BaseElement, PAdic, Series> data_;
};

struct SeriesTerm {
  Rational exp;
  Element coeff;
};

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a);
Element operator*(const Element& a, const Element& b);

// Builds a series from terms sorted by exponent with distinct exponents;
// drops exact zeros and terms at or beyond prec, validates exponents.
inline Element make_series(const FieldPtr& f, std::vector<SeriesTerm> sorted, std::optional<Rational> prec) {
  auto data = std::make_shared<SeriesData>();
  data->prec = prec;
  data->terms.reserve(sorted.size());
  const auto max_den = f->config().max_denominator;
  for (auto& term : sorted) {
    if (prec && term.exp >= *prec) break;
    if (term.coeff.is_exact_zero()) continue;
    if (f->factor() == Factor::Z && term.exp.denominator() != 1) {
      throw PreconditionViolation("non-integral exponent in a Laurent layer");
    }
    if (term.exp.denominator() > max_den) {
      throw Unsupported("exponent denominator " + std::to_string(term.exp.denominator()) +
                        " exceeds the cap " + std::to_string(max_den));
    }
    data->terms.push_back(std::move(term));
  }
  return Element(f, Element::Series(std::move(data)));
}

inline Element Element::from_terms(const FieldPtr& f, std::vector<SeriesTerm> terms, std::optional<Rational> prec) {
  if (f->kind() != Field::Kind::Series) throw PreconditionViolation("not a series field");
  std::sort(terms.begin(), terms.end(), [](const SeriesTerm& a, const SeriesTerm& b) { return a.exp < b.exp; });
  std::vector<SeriesTerm> merged;
  for (auto& t : terms) {
    if (!t.coeff.field()->same_as(*f->inner())) {
      throw PreconditionViolation("coefficient field " + t.coeff.field()->to_string() + " does not match " +
                                  f->inner()->to_string());
    }
    if (!merged.empty() && merged.back().exp == t.exp) {
      merged.back().coeff = merged.back().coeff + t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  return make_series(f, std::move(merged), prec);
}

inline Element Element::constant(const FieldPtr& f, Element c) {
  std::vector<SeriesTerm> terms;
  terms.push_back({Rational(0), std::move(c)});
  return make_series(f, std::move(terms), std::nullopt);
}

inline Element Element::monomial(const FieldPtr& f, Element c, Rational exp) {
  if (f->kind() != Field::Kind::Series) throw PreconditionViolation("monomials need a series field");
  std::vector<SeriesTerm> terms;
  terms.push_back({exp, std::move(c)});
  return make_series(f, std::move(terms), std::nullopt);
}

inline bool Element::is_exact() const {
  if (is_base()) return true;
  if (is_padic()) return padic().is_exact();
  const auto& s = series();
  if (s.prec) return false;
  return std::all_of(s.terms.begin(), s.terms.end(), [](const SeriesTerm& t) { return t.coeff.is_exact(); });
}

inline bool Element::is_exact_zero() const {
  if (is_base()) return base().is_zero();
  if (is_padic()) return padic().is_exact_zero();
  return series().terms.empty() && !series().prec;
}

inline bool Element::known_nonzero() const {
  if (is_base()) return !base().is_zero();
  if (is_padic()) return padic().known_nonzero();
  const auto& s = series();
  return std::any_of(s.terms.begin(), s.terms.end(), [](const SeriesTerm& t) { return t.coeff.known_nonzero(); });
}

inline bool Element::operator==(const Element& o) const {
  if (field_ != o.field_ && !field_->same_as(*o.field_)) return false;
  if (data_.index() != o.data_.index()) return false;
  if (is_base()) return base() == o.base();
  if (is_padic()) return padic() == o.padic();
  const auto& a = series();
  const auto& b = o.series();
  if (a.prec != b.prec || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].exp != b.terms[i].exp || !(a.terms[i].coeff == b.terms[i].coeff)) return false;
  }
  return true;
}

// --- arithmetic ---

namespace detail {

inline std::optional<Rational> min_prec(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

inline void require_same_field(const Element& a, const Element& b) {
  if (a.field() != b.field() && !a.field()->same_as(*b.field())) {
    throw PreconditionViolation("field mismatch: " + a.field()->to_string() + " vs " + b.field()->to_string());
  }
}

/// Lower bound on the v_1 exponent counting every stored term; nullopt for
/// exact zero.
inline std::optional<Rational> low_exponent(const SeriesData& s) {
  if (!s.terms.empty()) return s.terms.front().exp;
  return s.prec;
}

}  // namespace detail

inline Element operator+(const Element& a, const Element& b) {
  detail::require_same_field(a, b);
  if (a.is_base()) return Element::from_base(a.field(), a.base() + b.base());
  if (a.is_padic()) return Element::from_padic(a.field(), a.padic() + b.padic());
  const auto& x = a.series();
  const auto& y = b.series();
  std::vector<SeriesTerm> out;
  out.reserve(x.terms.size() + y.terms.size());
  std::size_t i = 0, j = 0;
  while (i < x.terms.size() || j < y.terms.size()) {
    if (j == y.terms.size() || (i < x.terms.size() && x.terms[i].exp < y.terms[j].exp)) {
      out.push_back(x.terms[i++]);
    } else if (i == x.terms.size() || y.terms[j].exp < x.terms[i].exp) {
      out.push_back(y.terms[j++]);
    } else {
      out.push_back({x.terms[i].exp, x.terms[i].coeff + y.terms[j].coeff});
      ++i;
      ++j;
    }
  }
  return make_series(a.field(), std::move(out), detail::min_prec(x.prec, y.prec));
}

inline Element operator-(const Element& a) {
  if (a.is_base()) return Element::from_base(a.field(), -a.base());
  if (a.is_padic()) return Element::from_padic(a.field(), -a.padic());
  std::vector<SeriesTerm> out;
  for (const auto& t : a.series().terms) out.push_back({t.exp, -t.coeff});
  return make_series(a.field(), std::move(out), a.series().prec);
}

inline Element operator-(const Element& a, const Element& b) { return a + (-b); }

/// Product, optionally truncated at v_1 exponent `limit`.
inline Element mul(const Element& a, const Element& b, std::optional<Rational> limit = std::nullopt) {
  detail::require_same_field(a, b);
  if (a.is_base()) return Element::from_base(a.field(), a.base() * b.base());
  if (a.is_padic()) {
    auto r = a.padic() * b.padic();
    if (limit && limit->denominator() == 1) r = r.truncate(limit->numerator());
    return Element::from_padic(a.field(), std::move(r));
  }
  const auto& x = a.series();
  const auto& y = b.series();
  if (a.is_exact_zero() || b.is_exact_zero()) return Element::zero(a.field());
  std::optional<Rational> prec;
  const auto lx = detail::low_exponent(x);
  const auto ly = detail::low_exponent(y);
  if (x.prec) prec = *x.prec + *ly;
  if (y.prec) prec = detail::min_prec(prec, *y.prec + *lx);
  prec = detail::min_prec(prec, limit);
  std::map<Rational, Element> acc;
  for (const auto& s : x.terms) {
    if (prec && ly && s.exp + *ly >= *prec) break;
    for (const auto& t : y.terms) {
      const Rational e = s.exp + t.exp;
      if (prec && e >= *prec) break;
      auto product = mul(s.coeff, t.coeff);
      auto it = acc.find(e);
      if (it == acc.end()) {
        acc.emplace(e, std::move(product));
      } else {
        it->second = it->second + product;
      }
    }
  }
  std::vector<SeriesTerm> out;
  out.reserve(acc.size());
  for (auto& [e, c] : acc) out.push_back({e, std::move(c)});
  return make_series(a.field(), std::move(out), prec);
}

inline Element operator*(const Element& a, const Element& b) { return mul(a, b); }

inline Element times_int(const Element& a, std::int64_t n) { return a * Element::from_int(a.field(), n); }

/// Multiply by c * var^e (c in the inner field).
inline Element shift(const Element& a, const Element& c, Rational e) {
  const auto& s = a.series();
  std::vector<SeriesTerm> out;
  out.reserve(s.terms.size());
  for (const auto& t : s.terms) out.push_back({t.exp + e, t.coeff * c});
  std::optional<Rational> prec;
  if (s.prec) prec = *s.prec + e;
  return make_series(a.field(), std::move(out), prec);
}

/// Drop all information at v_1 exponent >= abs.
inline Element truncate(const Element& a, Rational abs) {
  if (a.is_base()) return a;
  if (a.is_padic()) {
    if (abs.denominator() != 1) throw PreconditionViolation("p-adic precision must be integral");
    return Element::from_padic(a.field(), a.padic().truncate(abs.numerator()));
  }
  const auto& s = a.series();
  if (s.prec && *s.prec <= abs) return a;
  std::vector<SeriesTerm> terms = s.terms;
  return make_series(a.field(), std::move(terms), abs);
}

/// Leading v_1 term; throws if it is not determined.
inline const SeriesTerm& leading_term(const Element& a) {
  const auto& s = a.series();
  if (s.terms.empty()) {
    if (!s.prec) throw PreconditionViolation("zero has no leading term");
    throw InsufficientPrecision("element indistinguishable from zero at O(" + a.field()->var() + "^" +
                                to_string(*s.prec) + ")");
  }
  const auto& t = s.terms.front();
  if (!t.coeff.known_nonzero()) {
    throw InsufficientPrecision("leading coefficient of " + a.field()->var() + "^" + to_string(t.exp) +
                                " not determined");
  }
  return t;
}

Element inv(const Element& a);

inline Element operator/(const Element& a, const Element& b) { return a * inv(b); }

inline Element pow(const Element& a, std::int64_t n) {
  if (n < 0) return inv(pow(a, -n));
  Element result = Element::one(a.field());
  Element base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

inline Element inv(const Element& a) {
  if (a.is_base()) return Element::from_base(a.field(), inv(a.base()));
  if (a.is_padic()) {
    return Element::from_padic(a.field(), inv(a.padic()));
  }
  const auto& lead = leading_term(a);
  const Element c_inv = inv(lead.coeff);
  const auto& s = a.series();
  if (s.terms.size() == 1 && !s.prec) return Element::monomial(a.field(), c_inv, -lead.exp);
  // unit u = a / (c X^e) = 1 + h with v_1(h) > 0; Newton y <- y + y(1 - u y)
  Rational order(a.field()->config().series_order);
  if (s.prec) order = std::min(order, *s.prec - lead.exp);
  const Element u = shift(a, c_inv, -lead.exp);
  const Element one = Element::one(a.field());
  Rational gap = order;
  if (u.series().terms.size() > 1) gap = u.series().terms[1].exp;
  if (u.series().prec) gap = std::min(gap, *u.series().prec);
  int steps = 1;
  for (Rational reach = gap; reach < order; reach *= 2) ++steps;
  Element y = truncate(one, order);
  for (int k = 0; k < steps; ++k) {
    const Element err = one - mul(u, y, order);
    y = y + mul(y, err, order);
  }
  return shift(truncate(y, order), c_inv, -lead.exp);
}

// --- valuations ---

/// v_level(a), coordinates innermost first.
inline GroupElement valuation(const Element& a, std::size_t level) {
  a.field()->require_level(level);
  const GroupShape shape = a.field()->value_group(level);
  if (level == 0) return GroupElement::zero(shape);
  if (a.is_padic()) return GroupElement(shape, {Rational(a.padic().valuation())});
  const auto& lead = leading_term(a);
  std::vector<Rational> coords;
  if (level > 1) coords = valuation(lead.coeff, level - 1).coords();
  coords.push_back(lead.exp);
  return GroupElement(shape, std::move(coords));
}

/// Full valuation v_k.
inline GroupElement valuation(const Element& a) { return valuation(a, a.field()->depth()); }

/// Whether v_level(a) >= 0. Zero counts as integral.
inline bool in_valuation_ring(const Element& a, std::size_t level) {
  a.field()->require_level(level);
  if (level == 0 || a.is_exact_zero()) return true;
  if (a.is_padic()) {
    const auto& x = a.padic();
    if (x.known_nonzero()) return x.valuation() >= 0;
    if (*x.lower_bound() >= 0) return true;
    throw InsufficientPrecision("p-adic value not determined to integral precision");
  }
  const auto& s = a.series();
  const auto low = detail::low_exponent(s);
  if (*low > 0) return true;
  if (s.terms.empty()) throw InsufficientPrecision("series known only modulo a non-integral power");
  const auto& first = s.terms.front();
  if (first.exp < 0) {
    if (first.coeff.known_nonzero()) return false;
    throw InsufficientPrecision("coefficient of a negative power not determined");
  }
  if (level == 1) return true;
  return in_valuation_ring(first.coeff, level - 1);
}

/// Image of a in the residue field of v_level.
inline Element residue(const Element& a, std::size_t level) {
  if (!in_valuation_ring(a, level)) {
    throw PreconditionViolation("residue of an element with negative valuation");
  }
  const FieldPtr rf = a.field()->residue_field(level);
  if (level == 0) return a;
  if (a.is_exact_zero()) return Element::zero(rf);
  if (a.is_padic()) {
    return Element::from_base(rf, rf->base_field()->element(a.padic().residue()));
  }
  const auto& s = a.series();
  if (s.prec && *s.prec <= 0) throw InsufficientPrecision("constant term not determined");
  if (s.terms.empty() || s.terms.front().exp > 0) return Element::zero(rf);
  return residue(s.terms.front().coeff, level - 1);
}

/// v_1 lower bound for residual checks: approximate-zero coefficients count
/// as zero at working precision. nullopt means exact zero (or no bound).
inline std::optional<Rational> outer_lower_bound(const Element& a) {
  if (a.is_base()) {
    if (a.base().is_zero()) return std::nullopt;
    return Rational(0);
  }
  if (a.is_padic()) {
    const auto lb = a.padic().lower_bound();
    if (!lb) return std::nullopt;
    return Rational(*lb);
  }
  for (const auto& t : a.series().terms) {
    if (t.coeff.known_nonzero()) return t.exp;
  }
  return a.series().prec;
}

/// Absolute v_1 precision; nullopt when exact at the outer layer.
inline std::optional<Rational> outer_precision(const Element& a) {
  if (a.is_padic()) {
    const auto p = a.padic().abs_precision();
    if (!p) return std::nullopt;
    return Rational(*p);
  }
  if (a.is_series()) return a.series().prec;
  return std::nullopt;
}

/// Coefficient of var^e in the outermost layer.
inline Element coefficient(const Element& a, Rational e) {
  for (const auto& t : a.series().terms) {
    if (t.exp == e) return t.coeff;
    if (t.exp > e) break;
  }
  if (a.series().prec && *a.series().prec <= e) throw InsufficientPrecision("coefficient beyond precision");
  return Element::zero(a.field()->inner());
}

/// Lift an element of a subfield (the residue field of some level) back as a
/// constant of f.
inline Element lift_constant(const FieldPtr& f, const Element& c) {
  if (c.field() == f || c.field()->same_as(*f)) return c;
  if (f->kind() == Field::Kind::PAdic) {
    if (!c.is_base()) throw PreconditionViolation("cannot lift into Q_p");
    return Element::from_int(f, c.base().code());
  }
  if (f->kind() != Field::Kind::Series) throw PreconditionViolation("cannot lift " + c.field()->to_string());
  return Element::constant(f, lift_constant(f->inner(), c));
}

// --- text ---

inline std::string to_string(const Element& a);

namespace detail {

inline std::string exponent_text(const std::string& var, const Rational& e) {
  if (e == 1) return var;
  if (e.denominator() != 1) return var + "^(" + to_string(e) + ")";
  return var + "^" + to_string(e);
}

inline bool is_compound(const std::string& s) {
  if (s.empty()) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == '+' || s[i] == ' ') return true;
  }
  return false;
}

}  // namespace detail

inline std::string to_string(const Element& a) {
  if (a.is_base()) return to_string(a.base());
  if (a.is_padic()) return a.padic().to_string();
  const auto& s = a.series();
  const std::string& var = a.field()->var();
  std::vector<std::string> parts;
  for (const auto& t : s.terms) {
    std::string c = to_string(t.coeff);
    if (t.exp == 0) {
      parts.push_back(detail::is_compound(c) ? "(" + c + ")" : c);
      continue;
    }
    const std::string x = detail::exponent_text(var, t.exp);
    if (c == "1") {
      parts.push_back(x);
    } else if (c == "-1") {
      parts.push_back("-" + x);
    } else {
      parts.push_back((detail::is_compound(c) ? "(" + c + ")" : c) + "*" + x);
    }
  }
  if (s.prec) parts.push_back("O(" + detail::exponent_text(var, *s.prec) + ")");
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i][0] == '-') {
      out += " - " + parts[i].substr(1);
    } else {
      out += " + " + parts[i];
    }
  }
  return out;
}

}  // namespace valdef
