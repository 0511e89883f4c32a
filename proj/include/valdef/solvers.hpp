#pragma once

// Solvability of f(Y) = c for the Kummer polynomial f = Y^p - 1 and the
// Artin-Schreier polynomial f = Y^p - Y, the sets
//     R_a = { x : exists y, f(y) = a x^p },
// certification of uniformizers as members of
//     A = { a != 0 : 1 in R_a and a^-1 not in [R_a]^(p^2) },
// and the resulting evaluator of the existential-universal formula phi_Z.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "valdef/element.hpp"
#include "valdef/element_text.hpp"
#include "valdef/hensel.hpp"
#include "valdef/powers.hpp"
#include "valdef/sampling.hpp"

namespace valdef {

enum class Truth { True, False, InsufficientPrecision };

inline std::string to_string(Truth t) {
  switch (t) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    case Truth::InsufficientPrecision: return "InsufficientPrecision";
  }
  return "?";
}

inline Truth kleene_not(Truth a) {
  if (a == Truth::True) return Truth::False;
  if (a == Truth::False) return Truth::True;
  return a;
}

inline Truth kleene_and(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::True && b == Truth::True) return Truth::True;
  return Truth::InsufficientPrecision;
}

inline Truth kleene_or(Truth a, Truth b) { return kleene_not(kleene_and(kleene_not(a), kleene_not(b))); }

struct Decision {
  Truth truth = Truth::InsufficientPrecision;
  std::optional<Element> witness;
  /// v_1 lower bound of the witness residual; nullopt when exact.
  std::optional<Rational> residual;
  std::vector<std::string> trace;

  static Decision of(bool b) { return Decision{b ? Truth::True : Truth::False, std::nullopt, std::nullopt, {}}; }
  static Decision unknown(std::string why) {
    return Decision{Truth::InsufficientPrecision, std::nullopt, std::nullopt, {std::move(why)}};
  }
  Decision& note(std::string line) {
    trace.push_back(std::move(line));
    return *this;
  }
};

enum class SettingCase { Kummer = 1, ArtinSchreier = 2, Quadratic = 3 };

inline std::string to_string(SettingCase c) {
  switch (c) {
    case SettingCase::Kummer: return "1";
    case SettingCase::ArtinSchreier: return "2";
    case SettingCase::Quadratic: return "3";
  }
  return "?";
}

/// A field with a henselian valuation v_level, a prime p and a case.
struct Setting {
  FieldPtr field;
  std::size_t level = 1;
  std::uint32_t p = 2;
  SettingCase kind = SettingCase::Kummer;

  /// Hypotheses of the chosen case; empty when they all hold.
  static std::vector<std::string> violations(const Field& f, std::size_t level, std::uint32_t p, SettingCase c) {
    std::vector<std::string> out;
    if (!is_prime(p)) out.push_back("p is not prime");
    if (level == 0 || level > f.depth()) out.push_back("no henselian valuation at this level");
    if (!out.empty()) return out;
    switch (c) {
      case SettingCase::Kummer:
        if (!has_primitive_root_of_unity(f, p)) out.push_back("K lacks a primitive p-th root of unity");
        if (f.residue_field(level)->characteristic() == p) out.push_back("residue characteristic equals p");
        break;
      case SettingCase::ArtinSchreier:
        if (f.characteristic() != p) out.push_back("char K differs from p");
        break;
      case SettingCase::Quadratic:
        if (p != 2) out.push_back("case 3 needs p = 2");
        break;
    }
    return out;
  }

  /// Default case: Q_2-like fields (residue characteristic 2, char 0) take
  /// case 3, char K = p takes case 2, otherwise case 1 when it applies and
  /// case 3 for p = 2.
  static SettingCase default_case(const Field& f, std::size_t level, std::uint32_t p) {
    if (p == 2 && f.characteristic() == 0 && f.residue_field(level)->characteristic() == 2) {
      return SettingCase::Quadratic;
    }
    if (f.characteristic() == p) return SettingCase::ArtinSchreier;
    if (violations(f, level, p, SettingCase::Kummer).empty()) return SettingCase::Kummer;
    if (p == 2) return SettingCase::Quadratic;
    throw PreconditionViolation("no case of the setting applies to " + f.to_string() + " with p = " +
                                std::to_string(p));
  }

  /// Largest level whose value group is discrete and p-regular.
  static std::size_t default_level(const Field& f, std::uint32_t p) {
    for (std::size_t j = f.depth(); j >= 1; --j) {
      const auto g = f.value_group(j);
      if (is_discrete(g) && is_p_regular(g, p)) return j;
    }
    throw PreconditionViolation("no valuation of " + f.to_string() + " has a discrete p-regular value group");
  }

  static Setting make(FieldPtr field, std::uint32_t p, std::optional<SettingCase> c = std::nullopt,
                      std::optional<std::size_t> level = std::nullopt) {
    Setting s;
    s.p = p;
    s.level = level ? *level : default_level(*field, p);
    s.kind = c ? *c : default_case(*field, s.level, p);
    const auto bad = violations(*field, s.level, p, s.kind);
    if (!bad.empty()) throw PreconditionViolation("setting hypotheses fail: " + bad.front());
    s.field = std::move(field);
    return s;
  }

  bool artin_schreier() const { return kind != SettingCase::Kummer; }

  /// f(Y) - c.
  ElementPoly equation(const Element& c) const {
    std::vector<Element> coeffs(p + 1, Element::zero(field));
    coeffs[p] = Element::one(field);
    if (artin_schreier()) {
      coeffs[1] = Element::from_int(field, -1);
      coeffs[0] = -c;
    } else {
      coeffs[0] = Element::from_int(field, -1) - c;
    }
    return ElementPoly(std::move(coeffs));
  }

  Element f(const Element& y) const {
    return artin_schreier() ? pow(y, p) - y : pow(y, p) - Element::one(field);
  }
};

namespace detail {

inline Decision with_residual(Decision d, const Setting& s, const Element& c) {
  if (d.witness) d.residual = outer_lower_bound(s.f(*d.witness) - c);
  return d;
}

/// Y^p - Y = c in characteristic p, by removing the principal part of c.
inline Decision solve_artin_schreier_char_p(const Element& c, std::uint32_t p, bool want_witness) {
  const FieldPtr& f = c.field();
  if (c.is_base()) {
    const auto roots = artin_schreier_roots(c.base());
    Decision d = Decision::of(!roots.empty());
    if (!roots.empty()) d.witness = Element::from_base(f, roots.front());
    return d.note("residue-level root search over " + f->to_string());
  }
  if (c.is_padic()) throw PreconditionViolation("Artin-Schreier reduction needs characteristic p");
  Element cur = c;
  Element acc = Element::zero(f);
  Rational bound = precision_cap(f);
  if (!c.series().terms.empty()) bound += -c.series().terms.front().exp;
  const std::int64_t max_iter = (bound * f->config().max_denominator).numerator() + 1;
  std::vector<std::string> trace;
  for (std::int64_t it = 0;; ++it) {
    if (it > max_iter) return Decision::unknown("principal-part reduction exceeded its iteration bound");
    if (cur.is_exact_zero() || in_valuation_ring(cur, 1)) break;
    const auto& lead = leading_term(cur);
    const Rational e = lead.exp / static_cast<std::int64_t>(p);
    if (f->factor() == Factor::Z && e.denominator() != 1) {
      return Decision::of(false).note("v(c) = " + to_string(lead.exp) + " < 0 is not divisible by p");
    }
    const auto r = frobenius_root(lead.coeff, p);
    if (!r) return Decision::of(false).note("leading coefficient is not a p-th power in the residue field");
    const Element d = Element::monomial(f, *r, e);
    cur = cur - (pow(d, p) - d);
    acc = acc + d;
    trace.push_back("removed principal term at exponent " + to_string(lead.exp));
  }
  const Element rc = cur.is_exact_zero() ? Element::zero(f->inner()) : residue(cur, 1);
  Decision sub = solve_artin_schreier_char_p(rc, p, want_witness);
  if (sub.truth != Truth::True) {
    sub.trace.insert(sub.trace.begin(), trace.begin(), trace.end());
    return sub.note("residue equation has no root");
  }
  Decision d = Decision::of(true);
  d.trace = trace;
  d.note("residue root found; Hensel lift with f' = -1");
  if (want_witness) {
    std::vector<Element> coeffs(p + 1, Element::zero(f));
    coeffs[p] = Element::one(f);
    coeffs[1] = Element::from_int(f, -1);
    coeffs[0] = -cur;
    // (acc + y)^p loses (p - 1) k digits when v(acc) = -k; lift y that much further.
    Rational extra(0);
    if (!acc.is_exact_zero()) {
      const Rational k = -leading_term(acc).exp;
      if (k > 0) extra = k * static_cast<std::int64_t>(p - 1);
    }
    const ElementPoly eq(std::move(coeffs));
    const Rational target = detail::input_precision(eq, precision_cap(f) + extra);
    const auto lifted = detail::newton(eq, lift_constant(f, *sub.witness), target, target);
    d.witness = acc + lifted.root;
  }
  return d;
}

}  // namespace detail

/// Whether f(Y) = c has a solution in K, with a witness when asked.
inline Decision solve(const Setting& s, const Element& c, bool want_witness = true) {
  try {
    switch (s.kind) {
      case SettingCase::Kummer: {
        const Element target = Element::one(s.field) + c;
        if (!want_witness) return Decision::of(is_nth_power(target, s.p)).note("Y^p = 1 + c");
        const auto root = nth_root(target, s.p);
        Decision d = Decision::of(root.has_value()).note("Y^p = 1 + c");
        if (root) d.witness = root->root;
        return detail::with_residual(std::move(d), s, c);
      }
      case SettingCase::ArtinSchreier:
        return detail::with_residual(detail::solve_artin_schreier_char_p(c, s.p, want_witness), s, c);
      case SettingCase::Quadratic: {
        if (s.field->characteristic() == 2) {
          return detail::with_residual(detail::solve_artin_schreier_char_p(c, 2, want_witness), s, c);
        }
        const Element disc = Element::one(s.field) + times_int(c, 4);
        const bool ok = is_nth_power(disc, 2);
        Decision d = Decision::of(ok).note("(2Y - 1)^2 = 1 + 4c");
        if (!ok || !want_witness) return d;
        const auto eq = s.equation(c);
        const auto rf = s.field->residue_field(1);
        if (in_valuation_ring(c, 1) && rf->kind() == Field::Kind::Base && rf->base_field()->is_finite()) {
          const auto reduced = eq.map([](const Element& e) { return residue(e, 1).base(); });
          for (const auto& r : simple_roots(reduced)) {
            if (!r.simple) continue;
            d.witness = hensel_lift(eq, lift_constant(s.field, Element::from_base(rf, r.root))).root;
            d.note("Hensel lift of a simple residue root");
            return detail::with_residual(std::move(d), s, c);
          }
        }
        const auto w = nth_root(disc, 2);
        d.witness = (Element::one(s.field) + w->root) * inv(Element::from_int(s.field, 2));
        d.note("y = (1 + w)/2 with w^2 = 1 + 4c");
        return detail::with_residual(std::move(d), s, c);
      }
    }
  } catch (const InsufficientPrecision& e) {
    return Decision::unknown(e.what());
  }
  return Decision::unknown("unreachable");
}

/// x in R_a.
inline Decision r_a_contains(const Setting& s, const Element& a, const Element& x, bool want_witness = true) {
  if (a.is_exact_zero()) throw PreconditionViolation("R_a needs a != 0");
  try {
    return solve(s, a * pow(x, s.p), want_witness).note("c = a x^p");
  } catch (const InsufficientPrecision& e) {
    return Decision::unknown(e.what());
  }
}

/// Whether p v(x) > -v(a) at the setting's level (x = 0 qualifies).
inline bool lemma_b_applies(const Setting& s, const Element& a, const Element& x) {
  if (x.is_exact_zero()) return true;
  const auto vx = valuation(x, s.level);
  const auto va = valuation(a, s.level);
  return (static_cast<std::int64_t>(s.p) * vx + va).sign() > 0;
}

/// Checks that R_a contains x when p v(x) > -v(a). Returns the decision;
/// the check passes iff it is True.
inline Decision lemma_b_check(const Setting& s, const Element& a, const Element& x) {
  if (!lemma_b_applies(s, a, x)) throw PreconditionViolation("p v(x) > -v(a) does not hold");
  return r_a_contains(s, a, x, true);
}

struct ACertificate {
  bool passed = false;
  Element candidate;
  bool one_in_r_a = false;
  std::size_t sampled = 0;
  std::size_t agreements = 0;
  bool inverse_outside = false;
  std::vector<std::string> lines;
};

/// Certifies a uniformizer a as a member of A: (i) 1 in R_a, (ii) R_a agrees
/// with O_v on samples, so [R_a]^(p^2) = O_v, (iii) a^-1 has negative value.
inline ACertificate uniformizer_in_a(const Setting& s, const Element& a, Sampler& sampler, std::size_t samples = 48) {
  const auto shape = s.field->value_group(s.level);
  const auto smallest = is_discrete(shape);
  if (!smallest) throw PreconditionViolation("value group is not discrete");
  if (a.is_exact_zero() || !(valuation(a, s.level) == *smallest)) {
    throw PreconditionViolation("candidate value is not the smallest positive element " + smallest->to_string());
  }
  ACertificate cert;
  cert.candidate = a;
  cert.one_in_r_a = r_a_contains(s, a, Element::one(s.field), false).truth == Truth::True;
  cert.lines.push_back(std::string("1 in R_a: ") + (cert.one_in_r_a ? "yes" : "no"));
  for (std::size_t i = 0; i < samples; ++i) {
    const Element x = sampler.element(s.field);
    const auto d = r_a_contains(s, a, x, false);
    if (d.truth == Truth::InsufficientPrecision) continue;
    ++cert.sampled;
    if ((d.truth == Truth::True) == in_valuation_ring(x, s.level)) ++cert.agreements;
  }
  cert.lines.push_back("R_a = O_v on samples: " + std::to_string(cert.agreements) + "/" + std::to_string(cert.sampled));
  cert.inverse_outside = !in_valuation_ring(inv(a), s.level);
  cert.lines.push_back(std::string("v(a^-1) < 0, so a^-1 not in [R_a]^(p^2) = O_v: ") +
                       (cert.inverse_outside ? "yes" : "no"));
  cert.passed = cert.one_in_r_a && cert.sampled > 0 && cert.agreements == cert.sampled && cert.inverse_outside;
  return cert;
}

/// Semantic evaluator of phi_Z: x satisfies the formula iff x lies in R_a
/// for some a in A. Only certified uniformizers are used as a; R_t = O_v for
/// those, and every R_a with a in A lies inside O_v, so a negative answer
/// for all of them is a negative answer for the formula.
class PhiZEvaluator {
 public:
  PhiZEvaluator(Setting s, std::uint64_t seed, std::size_t unit_multiples = 2,
                std::vector<Element> extra_candidates = {})
      : setting_(std::move(s)), sampler_(seed) {
    std::vector<Element> cands{Element::uniformizer(setting_.field, setting_.level)};
    // Distinct unit multiples; a small residue field may not have enough.
    for (std::size_t tries = 0; cands.size() < 1 + unit_multiples && tries < 16 * (unit_multiples + 1); ++tries) {
      Element c = cands.front() * sampler_.unit(setting_.field, setting_.level);
      if (std::none_of(cands.begin(), cands.end(), [&](const Element& e) { return e == c; })) cands.push_back(std::move(c));
    }
    for (auto& c : extra_candidates) cands.push_back(std::move(c));
    for (const auto& a : cands) {
      auto cert = uniformizer_in_a(setting_, a, sampler_);
      if (cert.passed) candidates_.push_back(a);
      certificates_.push_back(std::move(cert));
    }
    if (candidates_.empty()) throw PreconditionViolation("no candidate could be certified in A");
  }

  const Setting& setting() const noexcept { return setting_; }
  const std::vector<ACertificate>& certificates() const noexcept { return certificates_; }

  Decision evaluate(const Element& x, bool want_witness = false) const {
    bool unknown = false;
    for (const auto& a : candidates_) {
      auto d = r_a_contains(setting_, a, x, want_witness);
      if (d.truth == Truth::True) return d.note("x in R_a for certified a = " + to_string(a));
      if (d.truth == Truth::InsufficientPrecision) unknown = true;
    }
    if (unknown) return Decision::unknown("some R_a membership was not decided");
    return Decision::of(false).note("x outside R_a for every certified a; R_t = O_v");
  }

 private:
  Setting setting_;
  Sampler sampler_;
  std::vector<Element> candidates_;
  std::vector<ACertificate> certificates_;
};

/// x in Z_p via "exists y, y^2 = 1 + p x^2", p odd.
inline Decision robinson_evaluate(const Element& x, bool want_witness = false) {
  const FieldPtr& f = x.field();
  if (f->kind() != Field::Kind::PAdic) throw PreconditionViolation("Robinson's formula is evaluated in Q_p");
  const std::uint32_t p = f->prime();
  if (p == 2) throw PreconditionViolation("Robinson's formula is stated for odd p");
  try {
    const Element target = Element::one(f) + times_int(x * x, p);
    if (!want_witness) return Decision::of(is_nth_power(target, 2)).note("1 + p x^2 square test");
    const auto r = nth_root(target, 2);
    Decision d = Decision::of(r.has_value()).note("1 + p x^2 square test");
    if (r) {
      d.witness = r->root;
      d.residual = r->residual;
    }
    return d;
  } catch (const InsufficientPrecision& e) {
    return Decision::unknown(e.what());
  }
}

}  // namespace valdef
