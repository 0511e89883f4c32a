#pragma once

// The embedding phi: K1 = F((x^D))((t^G)) -> K2 = F((s^G))((y^D))((z^D)),
//     sum_g f_g(x) t^g  |->  sum_g f_g(y) s^g z^g,
// with D the divisible hull of G, its factorization through
// K0 = F((s^G))((y^D))((z^G)), and checks of its algebraic and valuation
// theoretic properties. Only G = Z is supported.

#include <optional>
#include <string>
#include <vector>

#include "valdef/element.hpp"
#include "valdef/ordered_groups.hpp"
#include "valdef/sampling.hpp"

namespace valdef {

/// Which of the listed sufficient conditions for F == F((Q)) the descriptor
/// meets: 'a' algebraically closed, 'c' p-adically closed (Q_p), 'd' a
/// henselian valuation with value group Z and residue characteristic 0.
/// Real closed fields ('b') have no descriptor.
inline std::optional<char> qualifies_for_noE(const Field& f) {
  switch (f.kind()) {
    case Field::Kind::AlgClosed: return 'a';
    case Field::Kind::PAdic: return 'c';
    case Field::Kind::Series:
      if (f.factor() == Factor::Z && f.inner()->characteristic() == 0) return 'd';
      return std::nullopt;
    case Field::Kind::Base: return std::nullopt;
  }
  return std::nullopt;
}

struct CheckReport {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> notes;

  bool passed() const { return failed == 0; }
  void record(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++failed;
      if (notes.size() < 8) notes.push_back("failed: " + what);
    }
  }
};

class ConstructionInstance {
 public:
  /// residue: base field descriptor (Q, Fp(..), Fq(..)); gamma: "Z".
  static ConstructionInstance make(const std::string& residue, const std::string& gamma = "Z",
                                   PrecisionConfig cfg = {}) {
    const GroupShape g = GroupShape::parse(gamma);
    if (!(g == GroupShape::parse("Z"))) {
      throw Unsupported("only the value group Z is supported, got " + g.to_string());
    }
    const FieldPtr base = Field::parse(residue, cfg);
    if (base->kind() != Field::Kind::Base) {
      throw Unsupported("residue base must be Q or a finite field, got " + base->to_string());
    }
    ConstructionInstance c;
    c.gamma_ = g;
    c.delta_ = GroupShape::parse("Q");
    c.F_ = base;
    c.F1_ = Field::series(base, Factor::Q, "x");
    c.K1_ = Field::series(c.F1_, Factor::Z, "t");
    c.S_ = Field::series(base, Factor::Z, "s");
    c.Y_ = Field::series(c.S_, Factor::Q, "y");
    c.K0_ = Field::series(c.Y_, Factor::Z, "z");
    c.K2_ = Field::series(c.Y_, Factor::Q, "z");
    return c;
  }

  const FieldPtr& F() const { return F_; }
  const FieldPtr& F1() const { return F1_; }
  const FieldPtr& K1() const { return K1_; }
  const FieldPtr& K0() const { return K0_; }
  const FieldPtr& K2() const { return K2_; }
  const GroupShape& gamma() const { return gamma_; }
  const GroupShape& delta() const { return delta_; }

  /// Levels of the handles: u and v1 on K1, v2 on K2.
  static constexpr std::size_t kU = 2;
  static constexpr std::size_t kV1 = 1;
  static constexpr std::size_t kV2 = 3;

  Element x() const { return lift_constant(K1_, Element::variable(F1_)); }
  Element t() const { return Element::variable(K1_); }

  /// f_g(x) in F1 -> f_g(y) * s^g in F((s))((y^D)).
  Element transport(const Element& fg, const Rational& gamma_exp) const {
    std::vector<SeriesTerm> terms;
    for (const auto& term : fg.series().terms) {
      terms.push_back({term.exp, Element::monomial(S_, term.coeff, gamma_exp)});
    }
    return Element::from_terms(Y_, std::move(terms), fg.series().prec);
  }

  Element phi(const Element& f) const {
    require(f, K1_);
    std::vector<SeriesTerm> terms;
    for (const auto& term : f.series().terms) terms.push_back({term.exp, transport(term.coeff, term.exp)});
    return Element::from_terms(K2_, std::move(terms), f.series().prec);
  }

  /// x -> y, t -> z into K0.
  Element epsilon(const Element& f) const {
    require(f, K1_);
    std::vector<SeriesTerm> terms;
    for (const auto& term : f.series().terms) terms.push_back({term.exp, transport(term.coeff, Rational(0))});
    return Element::from_terms(K0_, std::move(terms), f.series().prec);
  }

  /// Fixes F((s))((y^D)) and sends z^g to s^g z^g (power = -1 gives the inverse).
  Element alpha(const Element& g, std::int64_t power = 1) const {
    require(g, K0_);
    std::vector<SeriesTerm> terms;
    for (const auto& term : g.series().terms) {
      const Element sg = Element::monomial(S_, Element::one(F_), term.exp * power);
      terms.push_back({term.exp, term.coeff * lift_constant(Y_, sg)});
    }
    return Element::from_terms(K0_, std::move(terms), g.series().prec);
  }

  /// K0 is the subfield of K2 with integral z exponents.
  Element include(const Element& g) const {
    require(g, K0_);
    return Element::from_terms(K2_, g.series().terms, g.series().prec);
  }

  CheckReport check_homomorphism(std::size_t pairs, std::uint64_t seed) const {
    CheckReport r{"homomorphism", 0, 0, {}};
    Sampler s(seed);
    auto sample = [&] { return s.element(K1_); };
    r.record(phi(x() * t()) == phi(x()) * phi(t()), "phi(x t) = phi(x) phi(t)");
    for (std::size_t i = 0; i < pairs; ++i) {
      const Element f = sample();
      const Element g = sample();
      const std::string at = " at f = " + to_string(f) + ", g = " + to_string(g);
      r.record(phi(f + g) == phi(f) + phi(g), "phi(f + g)" + at);
      r.record(phi(f * g) == phi(f) * phi(g), "phi(f g)" + at);
      r.record(phi(f) == include(alpha(epsilon(f))), "phi = alpha o epsilon" + at);
      r.record(epsilon(f * g) == epsilon(f) * epsilon(g) && epsilon(f + g) == epsilon(f) + epsilon(g),
               "epsilon homomorphism" + at);
      const Element ef = epsilon(f);
      const Element eg = epsilon(g);
      r.record(alpha(ef * eg) == alpha(ef) * alpha(eg) && alpha(ef + eg) == alpha(ef) + alpha(eg),
               "alpha homomorphism" + at);
      r.record((phi(f) == phi(g)) == (f == g) && phi(f - f).is_exact_zero(), "injectivity" + at);
    }
    // alpha on monomials: constants fixed, z^g -> s^g z^g, invertible.
    for (std::int64_t gexp = -4; gexp <= 4; ++gexp) {
      const Element zg = Element::monomial(K0_, Element::one(Y_), Rational(gexp));
      const Element sg = lift_constant(Y_, Element::monomial(S_, Element::one(F_), Rational(gexp)));
      const Element expected = Element::monomial(K0_, sg, Rational(gexp));
      r.record(alpha(zg) == expected, "alpha(z^g) = s^g z^g for g = " + std::to_string(gexp));
      r.record(alpha(alpha(zg), -1) == zg, "alpha invertible on z^" + std::to_string(gexp));
      const Element c = lift_constant(K0_, s.element(Y_));
      r.record(alpha(c) == c, "alpha fixes F((s))((y^D))");
    }
    return r;
  }

  CheckReport check_valuation_restriction(std::size_t samples, std::uint64_t seed) const {
    CheckReport r{"valuation restriction", 0, 0, {}};
    Sampler s(seed);
    for (std::size_t i = 0; i < samples; ++i) {
      const Element f = s.element(K1_);
      const Element pf = phi(f);
      r.record(in_valuation_ring(pf, kV2) == in_valuation_ring(f, kU), "O_u vs phi^-1(O_v2) at " + to_string(f));
      if (in_valuation_ring(f, kU) && !in_valuation_ring(f, kV1)) {
        r.record(false, "O_u not inside O_v1 at " + to_string(f));
      }
      const Element m = s.in_maximal_ideal(K1_, kU);
      const Element pm = phi(m);
      r.record(pm.is_exact_zero() || valuation(pm, kV2).sign() > 0, "phi(m_u) inside m_v2 at " + to_string(m));
    }
    return r;
  }

  /// Images of the u-value basis under phi_*, read off from phi(x), phi(t).
  std::vector<GroupElement> value_map_generators() const {
    std::vector<GroupElement> out;
    const GroupShape lattice = GroupShape::parse("Z*Z*Z");
    for (const Element& e : {x(), t()}) {
      const GroupElement v = valuation(phi(e), kV2);
      std::vector<Rational> coords;
      for (std::size_t i = 0; i < v.rank(); ++i) coords.push_back(v[i]);
      out.emplace_back(lattice, coords);
    }
    return out;
  }

  struct PurityReport {
    std::vector<GroupElement> generators;
    bool pure = false;
    bool negative_control_impure = false;
    bool map_matches = false;
  };

  /// Purity of phi_*(d, g) = (g, d, g) on the integral lattice slice.
  PurityReport check_purity(std::int64_t n_max = 12) const {
    PurityReport r;
    const GroupShape lattice = GroupShape::parse("Z*Z*Z");
    r.generators = value_map_generators();
    r.pure = is_pure_sublattice(r.generators, lattice, n_max);
    const std::vector<GroupElement> perturbed{GroupElement(lattice, {0, 2, 0}), GroupElement(lattice, {1, 0, 1})};
    r.negative_control_impure = !is_pure_sublattice(perturbed, lattice, n_max);
    // phi_*(d, g) = (g, d, g) on a grid of u-values.
    r.map_matches = true;
    for (std::int64_t d = -3; d <= 3; ++d) {
      for (std::int64_t g = -3; g <= 3; ++g) {
        const Element e = pow(x(), d) * pow(t(), g);
        const GroupElement v = valuation(phi(e), kV2);
        const GroupElement u = valuation(e, kU);
        r.map_matches = r.map_matches && v[0] == u[1] && v[1] == u[0] && v[2] == u[1];
      }
    }
    return r;
  }

  struct Witness {
    Element element;
    GroupElement v1;
    GroupElement u;
    GroupElement v2_image;
    bool holds = false;
    bool t_is_not_witness = false;
  };

  /// x^-1 lies in O_v1 but phi(x^-1) lies outside O_v2.
  Witness nondefinability_witness() const {
    const Element w = inv(x());
    Witness out{w, valuation(w, kV1), valuation(w, kU), valuation(phi(w), kV2), false, false};
    out.holds = out.v1.sign() >= 0 && out.u.sign() < 0 && out.v2_image.sign() < 0;
    const Element tt = t();
    const bool t_witness = valuation(tt, kV1).sign() >= 0 && valuation(phi(tt), kV2).sign() < 0;
    out.t_is_not_witness = !t_witness && valuation(tt, kV1).sign() > 0 && valuation(phi(tt), kV2).sign() > 0;
    return out;
  }

  struct Audit {
    bool residue_char_zero = false;
    bool gamma_regular_quotient = false;
    std::optional<char> noE_case;
    std::vector<std::string> lines;
  };

  /// Checkable inputs of the elementary equivalence step; the step itself
  /// rests on the Ax-Kochen-Ershov theorem and is cited, not computed.
  Audit hypothesis_audit() const {
    Audit a;
    a.residue_char_zero = F_->characteristic() == 0;
    a.gamma_regular_quotient = has_regular_quotient(gamma_);
    a.noE_case = qualifies_for_noE(*F_);
    a.lines.push_back(std::string("char F = 0: ") + (a.residue_char_zero ? "yes" : "no"));
    a.lines.push_back(std::string("Gamma has a regular quotient, so Gamma == Gamma + Q: ") +
                      (a.gamma_regular_quotient ? "yes" : "no"));
    a.lines.push_back(a.noE_case ? std::string("F == F((Q)) by case (") + *a.noE_case + ")"
                                 : std::string("F == F((Q)) not certified by any listed case"));
    a.lines.push_back("(K1, v1) == (K2, v2): cited (Ax-Kochen-Ershov), not computed");
    return a;
  }

 private:
  static void require(const Element& e, const FieldPtr& f) {
    if (!e.field()->same_as(*f)) throw PreconditionViolation("element of " + e.field()->to_string() + ", expected " + f->to_string());
  }

  GroupShape gamma_;
  GroupShape delta_;
  FieldPtr F_, F1_, K1_, S_, Y_, K0_, K2_;
};

}  // namespace valdef
