#pragma once

// Newton/Hensel lifting of simple residue roots.

#include <optional>
#include <string>
#include <vector>

#include "valdef/element.hpp"
#include "valdef/residue_fields.hpp"

namespace valdef {

using ElementPoly = Polynomial<Element>;

struct HenselStep {
  int iteration;
  /// v_1 lower bound of f(y) after the step; nullopt means exactly zero.
  std::optional<Rational> residual;
};

struct HenselResult {
  Element root;
  std::vector<HenselStep> log;
  std::optional<Rational> residual;
  Rational target;
};

/// Default v_1 working precision of a field.
inline Rational precision_cap(const FieldPtr& f) {
  if (f->kind() == Field::Kind::PAdic) return Rational(f->config().padic_digits);
  return Rational(f->config().series_order);
}

/// Whether the precision steps in a Newton log at least double until they
/// reach the target.
inline bool precision_doubles(const std::vector<HenselStep>& log, const Rational& target) {
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (!log[i].residual) continue;
    if (!log[i - 1].residual) return false;
    const Rational prev = *log[i - 1].residual;
    const Rational now = *log[i].residual;
    if (prev <= 0) {
      if (now <= prev) return false;
      continue;
    }
    if (now < std::min(target, 2 * prev)) return false;
  }
  return true;
}

namespace detail {

inline bool residual_reached(const std::optional<Rational>& r, const Rational& target) {
  return !r || *r >= target;
}

/// Newton iteration y <- y - f(y)/f'(y) in the outer layer, all values
/// truncated at `work`; stops once the residual reaches `target`.
inline HenselResult newton(const ElementPoly& f, Element y, Rational target, Rational work) {
  const auto df = f.derivative();
  HenselResult out{y, {}, std::nullopt, target};
  y = truncate(y, work);
  auto r = f.eval(y);
  out.residual = outer_lower_bound(r);
  out.log.push_back({0, out.residual});
  for (int k = 1; k <= 80 && !residual_reached(out.residual, target); ++k) {
    const auto d = df.eval(y);
    y = truncate(y - r * inv(d), work);
    r = f.eval(y);
    const auto next = outer_lower_bound(r);
    out.log.push_back({k, next});
    if (next && out.residual && *next <= *out.residual) {
      throw InsufficientPrecision("Newton iteration stalled at residual " + to_string(*next));
    }
    out.residual = next;
  }
  if (!residual_reached(out.residual, target)) throw InsufficientPrecision("Newton iteration did not converge");
  out.root = y;
  return out;
}

inline Rational input_precision(const ElementPoly& f, const Rational& cap) {
  Rational t = cap;
  for (const auto& c : f.coeffs()) {
    if (auto p = outer_precision(c)) t = std::min(t, *p);
  }
  return t;
}

}  // namespace detail

/// Lift approx to a root of f whose level-`level` residue equals that of
/// approx. Requires the residue of approx to be a simple root of the reduced
/// polynomial. The residual target is the precision cap, lowered to the
/// coefficients' own precision when that is smaller.
inline HenselResult hensel_lift(const ElementPoly& f, const Element& approx, std::size_t level = 1) {
  const FieldPtr& field = approx.field();
  if (level == 0) throw PreconditionViolation("Hensel lifting needs a nontrivial valuation");
  field->require_level(level);
  for (const auto& c : f.coeffs()) {
    if (!in_valuation_ring(c, level)) throw PreconditionViolation("polynomial is not integral");
  }
  if (!in_valuation_ring(approx, level)) throw PreconditionViolation("approximation is not integral");
  const auto rf = residue(f.eval(approx), level);
  const auto rd = residue(f.derivative().eval(approx), level);
  if (rf.known_nonzero()) throw PreconditionViolation("approximation is not a residue root");
  if (!rd.known_nonzero()) throw PreconditionViolation("residue root is not simple");

  Element start = approx;
  if (level > 1) {
    const auto reduced = f.map([](const Element& c) { return residue(c, 1); });
    const auto inner = hensel_lift(reduced, residue(approx, 1), level - 1);
    start = lift_constant(field, inner.root);
  }
  const Rational target = detail::input_precision(f, precision_cap(field));
  return detail::newton(f, start, target, target);
}

/// Newton refinement from a start point whose residual already exceeds
/// twice the valuation of f'(start) (the wild case of Hensel's lemma).
/// Works with `extra` additional digits to absorb the division loss.
inline HenselResult newton_refine(const ElementPoly& f, const Element& start, Rational extra) {
  const Rational target = detail::input_precision(f, precision_cap(start.field()));
  return detail::newton(f, start, target, target + extra);
}

}  // namespace valdef
