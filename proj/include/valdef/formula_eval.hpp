#pragma once

// Classification and evaluation of formulas over descriptor fields, and the
// registered schemas (Robinson's formula, phi_Z).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valdef/formula.hpp"
#include "valdef/solvers.hpp"

namespace valdef {

// --- polynomial normal form over Z ---

using Monomial = std::map<std::string, std::uint64_t>;
using ZPoly = std::map<Monomial, BigInt>;

namespace poly {

inline void add_into(ZPoly& acc, const Monomial& m, const BigInt& c) {
  auto& slot = acc[m];
  slot += c;
  if (slot == 0) acc.erase(m);
}

inline ZPoly constant(const BigInt& c) {
  ZPoly p;
  if (c != 0) p[{}] = c;
  return p;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly out = a;
  for (const auto& [m, c] : b) add_into(out, m, c);
  return out;
}

inline ZPoly scale(const ZPoly& a, const BigInt& k) {
  ZPoly out;
  for (const auto& [m, c] : a) add_into(out, m, c * k);
  return out;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  ZPoly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      add_into(out, m, ca * cb);
    }
  }
  return out;
}

inline constexpr std::uint64_t kMaxDegree = 256;

inline ZPoly power(const ZPoly& a, std::uint64_t n) {
  ZPoly out = constant(1);
  for (std::uint64_t i = 0; i < n; ++i) out = mul(out, a);
  return out;
}

inline std::uint64_t degree(const ZPoly& p) {
  std::uint64_t d = 0;
  for (const auto& [m, c] : p) {
    std::uint64_t s = 0;
    for (const auto& [v, e] : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

inline ZPoly of(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return ZPoly{{Monomial{{t->name, 1}}, BigInt(1)}};
    case Term::Kind::Zero: return {};
    case Term::Kind::One: return constant(1);
    case Term::Kind::Numeral: return constant(BigInt(std::to_string(t->value)));
    case Term::Kind::Neg: return scale(of(t->lhs), -1);
    case Term::Kind::Add: return add(of(t->lhs), of(t->rhs));
    case Term::Kind::Sub: return add(of(t->lhs), scale(of(t->rhs), -1));
    case Term::Kind::Mul: return mul(of(t->lhs), of(t->rhs));
    case Term::Kind::Pow: {
      const ZPoly base = of(t->lhs);
      if (t->value * std::max<std::uint64_t>(1, degree(base)) > kMaxDegree) {
        throw Unsupported("polynomial degree too large to normalize");
      }
      return power(base, t->value);
    }
  }
  return {};
}

/// Coefficients of p as a polynomial in var.
inline std::map<std::uint64_t, ZPoly> in_variable(const ZPoly& p, const std::string& var) {
  std::map<std::uint64_t, ZPoly> out;
  for (const auto& [m, c] : p) {
    Monomial rest = m;
    std::uint64_t d = 0;
    if (auto it = rest.find(var); it != rest.end()) {
      d = it->second;
      rest.erase(it);
    }
    add_into(out[d], rest, c);
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
  return out;
}

inline TermPtr to_term(const ZPoly& p) {
  TermPtr out;
  for (const auto& [m, c] : p) {
    const BigInt mag = abs(c);
    TermPtr mono;
    if (mag != 1 || m.empty()) {
      if (!mag.fits_ulong_p()) throw Unsupported("coefficient too large for a numeral");
      mono = term::numeral(mag.get_ui());
    }
    for (const auto& [v, e] : m) {
      TermPtr factor = e == 1 ? term::var(v) : term::pow(term::var(v), e);
      mono = mono ? term::mul(mono, factor) : factor;
    }
    if (!out) {
      out = c < 0 ? term::neg(mono) : mono;
    } else {
      out = c < 0 ? term::sub(out, mono) : term::add(out, mono);
    }
  }
  return out ? out : term::zero();
}

inline Element evaluate(const ZPoly& p, const std::map<std::string, Element>& env, const FieldPtr& f) {
  Element acc = Element::zero(f);
  for (const auto& [m, c] : p) {
    Element mono = Element::from_rational(f, BigRational(c));
    for (const auto& [v, e] : m) {
      auto it = env.find(v);
      if (it == env.end()) throw PreconditionViolation("unbound variable " + v);
      mono = mono * pow(it->second, static_cast<std::int64_t>(e));
    }
    acc = acc + mono;
  }
  return acc;
}

}  // namespace poly

// --- classification ---

/// Shape of E y. (equation) after normalization: y^n = c or y^n - y = c.
struct SolvabilityForm {
  enum class Kind { Power, ArtinSchreier };
  Kind kind = Kind::Power;
  std::uint64_t n = 1;
  std::string var;
  ZPoly c;

  std::string name() const {
    return std::string(kind == Kind::Power ? "Power(" : "ArtinSchreier(") + std::to_string(n) + ")";
  }
};

/// Matches E y. l = r against the two solvability shapes; the Kummer shape
/// y^n - 1 = c is the power shape with c + 1.
inline std::optional<SolvabilityForm> match_solvability(const Formula& f) {
  if (f.kind != Formula::Kind::Exists || f.a->kind != Formula::Kind::Eq) return std::nullopt;
  ZPoly diff;
  try {
    diff = poly::add(poly::of(f.a->lhs), poly::scale(poly::of(f.a->rhs), -1));
  } catch (const Unsupported&) {
    return std::nullopt;
  }
  auto coeffs = poly::in_variable(diff, f.var);
  if (coeffs.empty()) return std::nullopt;
  const std::uint64_t n = coeffs.rbegin()->first;
  if (n == 0) return std::nullopt;
  const ZPoly& lead = coeffs.rbegin()->second;
  if (lead.size() != 1 || !lead.begin()->first.empty() || abs(lead.begin()->second) != 1) return std::nullopt;
  const BigInt sign = lead.begin()->second;
  SolvabilityForm form;
  form.n = n;
  form.var = f.var;
  form.c = poly::scale(coeffs.count(0) ? coeffs[0] : ZPoly{}, -sign);
  std::size_t middle = 0;
  for (const auto& [d, c] : coeffs) {
    if (d != 0 && d != n) ++middle;
  }
  if (middle == 0) return form;
  if (middle == 1 && n >= 2 && coeffs.count(1) && coeffs[1] == poly::constant(-sign)) {
    form.kind = SolvabilityForm::Kind::ArtinSchreier;
    return form;
  }
  return std::nullopt;
}

struct EvalClass {
  enum class Kind { QuantifierFree, SolvabilityPattern, BoundedSearch, Unsupported };
  Kind kind = Kind::QuantifierFree;
  std::vector<std::string> forms;
  std::size_t bound = 0;
  std::string reason;

  std::string to_string() const {
    switch (kind) {
      case Kind::QuantifierFree: return "QuantifierFree";
      case Kind::SolvabilityPattern: {
        std::string out = "SolvabilityPattern(";
        for (std::size_t i = 0; i < forms.size(); ++i) out += (i ? ", " : "") + forms[i];
        return out + ")";
      }
      case Kind::BoundedSearch: return "BoundedSearch(" + std::to_string(bound) + ")";
      case Kind::Unsupported: return "Unsupported";
    }
    return "?";
  }
};

/// Deterministic from the tree; a witness pool of size `pool` turns
/// otherwise unhandled quantifiers into bounded search.
inline EvalClass classify(const FormulaPtr& f, std::size_t pool = 0) {
  EvalClass out;
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Eq:
    case Formula::Kind::Pred: return out;
    case Formula::Kind::Exists:
      if (auto form = match_solvability(*f)) {
        out.kind = EvalClass::Kind::SolvabilityPattern;
        out.forms.push_back(form->name());
        return out;
      }
      [[fallthrough]];
    case Formula::Kind::Forall: {
      if (pool == 0) {
        out.kind = EvalClass::Kind::Unsupported;
        out.reason = std::string(f->kind == Formula::Kind::Exists ? "existential" : "universal") + " quantifier over " +
                     f->var + " is not a solvability pattern";
        return out;
      }
      const EvalClass inner = classify(f->a, pool);
      if (inner.kind == EvalClass::Kind::Unsupported) return inner;
      out = inner;
      out.kind = EvalClass::Kind::BoundedSearch;
      out.bound = pool;
      return out;
    }
    default: break;
  }
  out = classify(f->a, pool);
  if (f->b) {
    const EvalClass rhs = classify(f->b, pool);
    if (out.kind == EvalClass::Kind::Unsupported) return out;
    if (rhs.kind == EvalClass::Kind::Unsupported) return rhs;
    out.kind = std::max(out.kind, rhs.kind);
    out.forms.insert(out.forms.end(), rhs.forms.begin(), rhs.forms.end());
    out.bound = std::max(out.bound, rhs.bound);
  }
  return out;
}

// --- registered schemas ---

/// f(y) for the Kummer (y^p - 1) or Artin-Schreier (y^p - y) polynomial.
inline TermPtr setting_polynomial(const std::string& y, std::uint32_t p, bool artin_schreier) {
  TermPtr yp = term::pow(term::var(y), p);
  return term::sub(yp, artin_schreier ? term::var(y) : term::one());
}

inline FormulaPtr robinson_schema() { return parse_formula("E y. y*y = 1 + p*x*x"); }

/// The existential-universal definition of O_v with free variable x.
inline FormulaPtr phi_z_schema(std::uint32_t p, bool artin_schreier) {
  if (!is_prime(p)) throw PreconditionViolation("p must be prime");
  const std::uint64_t m = static_cast<std::uint64_t>(p) * p;
  auto f = [&](const std::string& y) { return setting_polynomial(y, p, artin_schreier); };
  auto a = term::var("a");
  auto xp = term::pow(term::var("x"), p);
  std::vector<std::string> universals;
  for (std::uint64_t i = 1; i <= m; ++i) universals.push_back("y" + std::to_string(i));
  for (std::uint64_t i = 1; i <= m; ++i) universals.push_back("z" + std::to_string(i));

  TermPtr prod = a;
  for (std::uint64_t i = 1; i <= m; ++i) prod = term::mul(prod, term::var("z" + std::to_string(i)));
  std::vector<FormulaPtr> inner{fml::eq(prod, term::one())};
  for (std::uint64_t i = 1; i <= m; ++i) {
    const std::string k = std::to_string(i);
    inner.push_back(fml::eq(f("y" + k), term::mul(a, term::pow(term::var("z" + k), p))));
  }
  const FormulaPtr matrix = fml::conj_all({fml::negate(fml::eq(a, term::zero())), fml::eq(f("y"), term::mul(a, xp)),
                                           fml::eq(f("y0"), a), fml::negate(fml::conj_all(inner))});
  return fml::block(Formula::Kind::Exists, {"a", "y", "y0"},
                    fml::block(Formula::Kind::Forall, universals, matrix));
}

struct SchemaMatch {
  std::string name;
  std::uint32_t p = 0;
  bool artin_schreier = false;
};

/// Recognizes the registered schemas up to structural equality.
inline std::optional<SchemaMatch> match_schema(const FormulaPtr& f) {
  if (equal(f, robinson_schema())) return SchemaMatch{"robinson", 0, false};
  const auto prefix = quantifier_prefix(f);
  if (prefix.size() != 2 || prefix[0].kind != Formula::Kind::Exists || prefix[0].count != 3 ||
      prefix[1].kind != Formula::Kind::Forall) {
    return std::nullopt;
  }
  for (std::uint32_t p = 2; p <= 13; ++p) {
    if (!is_prime(p) || 2ull * p * p != prefix[1].count) continue;
    for (bool as : {false, true}) {
      if (equal(f, phi_z_schema(p, as))) return SchemaMatch{"phi_Z", p, as};
    }
  }
  return std::nullopt;
}

// --- evaluation ---

using Assignment = std::map<std::string, Element>;

struct EvalOptions {
  /// Witness pool for bounded search over quantifiers.
  std::vector<Element> pool;
  std::uint64_t seed = 1;
  /// Valuation level for the phi_Z schema; default picks one.
  std::optional<std::size_t> level;
  bool use_schemas = true;
};

namespace detail {

inline Decision decide_form(const SolvabilityForm& form, const Assignment& env, const FieldPtr& field) {
  const Element c = poly::evaluate(form.c, env, field);
  const std::string shape = form.name() + " with c = " + to_string(poly::to_term(form.c));
  try {
    if (form.kind == SolvabilityForm::Kind::Power) {
      return Decision::of(is_nth_power(c, static_cast<std::int64_t>(form.n))).note(shape + ", decided by P_n(c)");
    }
    const std::uint32_t ch = field->characteristic();
    if (ch != 0 && ch == form.n) {
      auto d = solve_artin_schreier_char_p(c, ch, false);
      return d.note(shape + ", principal-part reduction");
    }
    if (form.n == 2 && ch != 2) {
      const Element disc = Element::one(field) + times_int(c, 4);
      return Decision::of(is_nth_power(disc, 2)).note(shape + ", decided by P_2(1 + 4c)");
    }
  } catch (const InsufficientPrecision& e) {
    return Decision::unknown(e.what());
  }
  throw Unsupported(shape + " is not handled in characteristic " + std::to_string(field->characteristic()));
}

inline Truth equality(const Element& l, const Element& r) {
  const Element d = l - r;
  if (d.is_exact_zero()) return Truth::True;
  if (d.known_nonzero()) return Truth::False;
  return Truth::InsufficientPrecision;
}

inline Element eval_term(const TermPtr& t, const Assignment& env, const FieldPtr& f) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw PreconditionViolation("unbound variable " + t->name);
      if (!it->second.field()->same_as(*f)) throw PreconditionViolation("variable " + t->name + " lives in another field");
      return it->second;
    }
    case Term::Kind::Zero: return Element::zero(f);
    case Term::Kind::One: return Element::one(f);
    case Term::Kind::Numeral: return Element::from_int(f, static_cast<std::int64_t>(t->value));
    case Term::Kind::Neg: return -eval_term(t->lhs, env, f);
    case Term::Kind::Add: return eval_term(t->lhs, env, f) + eval_term(t->rhs, env, f);
    case Term::Kind::Sub: return eval_term(t->lhs, env, f) - eval_term(t->rhs, env, f);
    case Term::Kind::Mul: return eval_term(t->lhs, env, f) * eval_term(t->rhs, env, f);
    case Term::Kind::Pow: return pow(eval_term(t->lhs, env, f), static_cast<std::int64_t>(t->value));
  }
  return Element::zero(f);
}

inline Decision eval_formula(const FormulaPtr& f, const Assignment& env, const FieldPtr& field, const EvalOptions& o);

inline Decision eval_schema(const SchemaMatch& m, const FormulaPtr& f, const Assignment& env, const FieldPtr& field,
                            const EvalOptions& o) {
  for (const auto& v : free_variables(f)) {
    if (!env.count(v)) throw PreconditionViolation("unbound variable " + v);
  }
  const Element& x = env.at("x");
  if (m.name == "robinson") {
    return robinson_evaluate(x).note("registered schema robinson");
  }
  const std::size_t level = o.level ? *o.level : Setting::default_level(*field, m.p);
  SettingCase kind = SettingCase::Kummer;
  if (m.artin_schreier) kind = field->characteristic() == m.p ? SettingCase::ArtinSchreier : SettingCase::Quadratic;
  const Setting s = Setting::make(field, m.p, kind, level);
  const PhiZEvaluator ev(s, o.seed);
  return ev.evaluate(x).note("registered schema phi_Z, p = " + std::to_string(m.p) + ", case " + to_string(kind));
}

inline Decision search(const FormulaPtr& f, const Assignment& env, const FieldPtr& field, const EvalOptions& o) {
  const bool ex = f->kind == Formula::Kind::Exists;
  bool unknown = false;
  for (const auto& w : o.pool) {
    Assignment inner = env;
    inner.insert_or_assign(f->var, w);
    const auto d = eval_formula(f->a, inner, field, o);
    if (d.truth == Truth::InsufficientPrecision) {
      unknown = true;
      continue;
    }
    if ((d.truth == Truth::True) == ex) {
      Decision out = Decision::of(ex);
      out.witness = w;
      return out.note(std::string(ex ? "witness " : "counterexample ") + f->var + " = " + to_string(w) + " from pool");
    }
  }
  return Decision::unknown(std::string(ex ? "no witness" : "no counterexample") + " for " + f->var + " in a pool of " +
                           std::to_string(o.pool.size()) + (unknown ? " (some cases undecided)" : ""));
}

inline Decision eval_formula(const FormulaPtr& f, const Assignment& env, const FieldPtr& field, const EvalOptions& o) {
  switch (f->kind) {
    case Formula::Kind::True: return Decision::of(true);
    case Formula::Kind::False: return Decision::of(false);
    case Formula::Kind::Eq: {
      Decision d;
      d.truth = equality(eval_term(f->lhs, env, field), eval_term(f->rhs, env, field));
      return d;
    }
    case Formula::Kind::Pred: {
      const Element v = eval_term(f->lhs, env, field);
      try {
        return Decision::of(is_nth_power(v, static_cast<std::int64_t>(f->n)));
      } catch (const InsufficientPrecision& e) {
        return Decision::unknown(e.what());
      }
    }
    case Formula::Kind::Not: {
      Decision d = eval_formula(f->a, env, field, o);
      d.truth = kleene_not(d.truth);
      d.witness.reset();
      return d;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      const Decision l = eval_formula(f->a, env, field, o);
      const Decision r = eval_formula(f->b, env, field, o);
      Decision d;
      switch (f->kind) {
        case Formula::Kind::And: d.truth = kleene_and(l.truth, r.truth); break;
        case Formula::Kind::Or: d.truth = kleene_or(l.truth, r.truth); break;
        case Formula::Kind::Implies: d.truth = kleene_or(kleene_not(l.truth), r.truth); break;
        default:
          d.truth = kleene_or(kleene_and(l.truth, r.truth), kleene_and(kleene_not(l.truth), kleene_not(r.truth)));
      }
      d.trace = l.trace;
      d.trace.insert(d.trace.end(), r.trace.begin(), r.trace.end());
      return d;
    }
    case Formula::Kind::Exists:
      if (auto form = match_solvability(*f)) return decide_form(*form, env, field);
      [[fallthrough]];
    case Formula::Kind::Forall:
      if (o.pool.empty()) throw Unsupported("quantifier over " + f->var + " needs a solvability pattern or a witness pool");
      return search(f, env, field, o);
  }
  return Decision::unknown("unreachable");
}

}  // namespace detail

/// Three-valued evaluation of f under env in field. Registered schemas go to
/// their dedicated evaluators; other formulas must classify as supported.
inline Decision evaluate(const FormulaPtr& f, const Assignment& env, const FieldPtr& field,
                         const EvalOptions& o = {}) {
  if (o.use_schemas) {
    if (auto m = match_schema(f)) {
      const bool robinson_applies = m->name != "robinson" ||
                                    (field->kind() == Field::Kind::PAdic && env.count("p") && env.count("x") &&
                                     env.at("p") == Element::from_int(field, field->prime()) && field->prime() != 2);
      if (robinson_applies) return detail::eval_schema(*m, f, env, field, o);
    }
  }
  const auto cls = classify(f, o.pool.size());
  if (cls.kind == EvalClass::Kind::Unsupported) throw Unsupported(cls.reason);
  for (const auto& v : free_variables(f)) {
    if (!env.count(v)) throw PreconditionViolation("unbound variable " + v);
  }
  Decision d = detail::eval_formula(f, env, field, o);
  d.trace.insert(d.trace.begin(), "class " + cls.to_string());
  return d;
}

}  // namespace valdef
