// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Truth values come from oracles built here (exact rationals, Laurent
// polynomials written as text, enumeration), not from the library.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "valdef/valdef.hpp"

using namespace valdef;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (lines.size() < 6) lines.push_back("  failed: " + what);
    }
  }
};

// --- oracles ---

std::int64_t vp_int(BigInt n, std::uint32_t p) {
  std::int64_t k = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

std::int64_t vp(const BigRational& q, std::uint32_t p) { return vp_int(q.get_num(), p) - vp_int(q.get_den(), p); }

// An element together with its valuation computed at construction time.
struct Known {
  Element x;
  std::optional<std::int64_t> v;  // nullopt for 0
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  // p^k * a/b with a, b prime to p.
  Known rational(const FieldPtr& f, std::int64_t k) {
    const std::uint32_t p = f->prime();
    BigInt a, b;
    do a = BigInt(uniform(-1000000000, 1000000000)) * uniform(1, 1000); while (a == 0 || a % p == 0);
    do b = BigInt(uniform(1, 1000000)); while (b % p == 0);
    BigRational q(a, b);
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) q *= pk; else q /= pk;
    q.canonicalize();
    return {Element::from_rational(f, q), vp(q, p)};
  }

  // Laurent polynomial with lowest exponent e, written out as text.
  Known laurent(const FieldPtr& f, std::int64_t e) {
    const std::int64_t q = f->residue_field(1)->base_field()->order();
    std::string s = std::to_string(uniform(1, q - 1)) + "*t^" + std::to_string(e);
    const std::int64_t extra = uniform(0, 3);
    for (std::int64_t i = 0, exp = e; i < extra; ++i) {
      exp += uniform(1, 4);
      s += " + " + std::to_string(uniform(0, q - 1)) + "*t^" + std::to_string(exp);
    }
    return {parse_element(f, s), e};
  }

  // Elements with valuation near `centre`; series fields also get quotients
  // of polynomials, which are genuinely infinite.
  Known with_valuation(const FieldPtr& f, std::int64_t e) {
    if (f->kind() == Field::Kind::PAdic) return rational(f, e);
    if (uniform(0, 1) == 0) return laurent(f, e);
    const std::int64_t d = uniform(-3, 3);
    const Known num = laurent(f, e + d), den = laurent(f, d);
    return {num.x * inv(den.x), e};
  }

  Known any(const FieldPtr& f) {
    if (uniform(0, 49) == 0) return {Element::zero(f), std::nullopt};
    return with_valuation(f, uniform(-6, 6));
  }

 private:
  std::mt19937_64 rng_;
};

bool nonnegative(const Known& k) { return !k.v || *k.v >= 0; }

// Lower bound for how far e vanishes: its valuation, or its precision when
// no coefficient is known to be nonzero; nullopt for an exact 0.
std::optional<Rational> vanishes_to(const Element& e) { return outer_lower_bound(e); }

bool at_least(const std::optional<Rational>& r, const Rational& cap) { return !r || *r >= cap; }

// Newton residuals at least double until they reach the target.
bool doubling(const std::vector<HenselStep>& log, const Rational& target) {
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (!log[i].residual) continue;
    if (!log[i - 1].residual) return false;
    const Rational want = std::min(target, Rational(2) * *log[i - 1].residual);
    if (*log[i].residual < want) return false;
  }
  return true;
}

std::string seconds(Clock::time_point start) {
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << std::chrono::duration<double>(Clock::now() - start).count() << " s";
  return s.str();
}

Setting setting(const char* field, std::uint32_t p, SettingCase c) { return Setting::make(Field::parse(field), p, c); }

// --- criteria ---

Outcome robinson_agreement() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t n = 0;
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const auto f = Field::padic(p);
    Gen g(100 + p);
    for (int i = 0; i < 500; ++i, ++n) {
      const Known k = g.any(f);
      const auto d = robinson_evaluate(k.x);
      o.need(d.truth != Truth::InsufficientPrecision, "indeterminate at " + to_string(k.x));
      o.need((d.truth == Truth::True) == nonnegative(k), "Q" + std::to_string(p) + " at " + to_string(k.x));
    }
  }
  o.need(Clock::now() - start < std::chrono::seconds(5), "runtime");
  o.lines.insert(o.lines.begin(), "  " + std::to_string(n) + " samples, " + seconds(start));
  return o;
}

Outcome phi_z_agreement() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<Setting> matrix{setting("Qp(2)", 2, SettingCase::Quadratic),
                                    setting("Qp(5)", 2, SettingCase::Kummer),
                                    setting("Laurent(Fp(3))", 2, SettingCase::Kummer),
                                    setting("Laurent(Fp(5))", 2, SettingCase::Kummer),
                                    setting("Laurent(Fp(3))", 3, SettingCase::ArtinSchreier)};
  std::uint64_t salt = 0;
  for (const auto& s : matrix) {
    const PhiZEvaluator ev(s, 1);
    Gen g(200 + ++salt);
    std::size_t agree = 0;
    for (int i = 0; i < 500; ++i) {
      const Known k = g.any(s.field);
      const bool ok = (ev.evaluate(k.x).truth == Truth::True) == nonnegative(k);
      agree += ok;
      o.need(ok, s.field->to_string() + " p=" + std::to_string(s.p) + " at " + to_string(k.x));
    }
    o.lines.push_back("  " + s.field->to_string() + " p=" + std::to_string(s.p) + " case " + to_string(s.kind) + ": " +
                      std::to_string(agree) + "/500");
  }
  o.need(Clock::now() - start < std::chrono::seconds(30), "runtime");
  o.lines.push_back("  " + seconds(start));
  return o;
}

Outcome lemma_b_battery() {
  Outcome o;
  const std::vector<Setting> settings{setting("Qp(5)", 2, SettingCase::Kummer),
                                      setting("Laurent(Fp(3))", 2, SettingCase::Kummer),
                                      setting("Laurent(Fp(5))", 2, SettingCase::Kummer),
                                      setting("Laurent(Fp(3))", 3, SettingCase::ArtinSchreier),
                                      setting("Qp(2)", 2, SettingCase::Quadratic)};
  std::size_t pairs = 0, solvable = 0, residual_ok = 0;
  std::uint64_t salt = 0;
  for (const auto& s : settings) {
    Gen g(300 + ++salt);
    const Rational cap = precision_cap(s.field);
    const std::int64_t p = s.p;
    for (int i = 0; i < 200; ++i, ++pairs) {
      const std::int64_t va = g.uniform(-8, 8);
      // smallest vx with p vx + va > 0 is floor(-va / p) + 1
      const std::int64_t floor_div = (-va >= 0) ? (-va) / p : -((va + p - 1) / p);
      const std::int64_t vx = floor_div + 1 + g.uniform(0, 2);
      const Known a = g.with_valuation(s.field, va), x = g.with_valuation(s.field, vx);
      const std::string at = s.field->to_string() + " p=" + std::to_string(p) + ": a=" + to_string(a.x) +
                             ", x=" + to_string(x.x);
      const auto d = r_a_contains(s, a.x, x.x, true);
      const bool is_true = d.truth == Truth::True;
      solvable += is_true;
      o.need(is_true, "not solvable at " + at);
      if (!is_true) continue;
      const bool reported = at_least(d.residual, cap);
      // recompute f(w) - a x^p here; it vanishes as far as a x^p is known
      const Element c = a.x * pow(x.x, s.p);
      const Rational known = std::min(cap, outer_precision(c).value_or(cap));
      const bool recomputed = d.witness && at_least(vanishes_to(s.f(*d.witness) - c), known);
      residual_ok += reported && recomputed;
      o.need(reported, "reported residual below cap at " + at);
      o.need(recomputed, "witness does not solve the equation at " + at);
    }
  }
  o.lines.insert(o.lines.begin(), "  " + std::to_string(pairs) + " pairs, " + std::to_string(solvable) +
                                      " solvable, " + std::to_string(residual_ok) + " residuals >= cap");
  return o;
}

Outcome r_t_both_directions() {
  Outcome o;
  const std::vector<Setting> settings{setting("Laurent(Fp(3))", 2, SettingCase::Kummer),
                                      setting("Laurent(Fp(3))", 3, SettingCase::ArtinSchreier),
                                      setting("Qp(5)", 2, SettingCase::Kummer)};
  std::uint64_t salt = 0;
  for (const auto& s : settings) {
    const Element t = Element::uniformizer(s.field, 1);
    Gen g(400 + ++salt);
    std::size_t in = 0, out = 0;
    for (int i = 0; i < 500; ++i) {
      const Known k = g.any(s.field);
      const auto d = r_a_contains(s, t, k.x, false);
      o.need(d.truth != Truth::InsufficientPrecision, "indeterminate at " + to_string(k.x));
      o.need((d.truth == Truth::True) == nonnegative(k), s.field->to_string() + " at " + to_string(k.x));
      (nonnegative(k) ? in : out)++;
    }
    o.lines.push_back("  " + s.field->to_string() + " p=" + std::to_string(s.p) + ": " + std::to_string(in) +
                      " inside, " + std::to_string(out) + " outside");
  }
  return o;
}

Outcome power_class_indices() {
  Outcome o;
  for (std::uint32_t l : {3u, 5u, 7u}) {
    std::set<std::uint32_t> squares;
    for (std::uint32_t y = 1; y < l; ++y) squares.insert(y * y % l);
    const std::uint64_t brute = (l - 1) / squares.size();
    const std::string ls = std::to_string(l);
    const auto fl = power_class_index(*Field::parse("Fp(" + ls + ")"), 2);
    const auto ql = power_class_index(*Field::parse("Qp(" + ls + ")"), 2);
    const auto qlt = power_class_index(*Field::parse("Laurent(Qp(" + ls + "))"), 2);
    o.need(fl == 2 && brute == 2, "F_" + ls);
    o.need(ql == 4, "Q_" + ls);
    o.need(qlt == 8, "Q_" + ls + "((t))");
    o.lines.push_back("  l=" + ls + ": F_l " + std::to_string(fl) + " (enumeration " + std::to_string(brute) +
                      "), Q_l " + std::to_string(ql) + ", Q_l((t)) " + std::to_string(qlt));
  }
  return o;
}

// n-purity by enumerating coefficient vectors mod n.
bool pure_by_enumeration(const std::vector<GroupElement>& gens, int n_max) {
  for (int n = 2; n <= n_max; ++n) {
    std::vector<int> c(gens.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == n) c[i++] = 0;
      if (i == c.size()) break;
      bool zero = true;
      for (std::size_t j = 0; j < gens[0].rank(); ++j) {
        Rational s(0);
        for (std::size_t g = 0; g < gens.size(); ++g) s += Rational(c[g]) * gens[g][j];
        if (s.denominator() != 1 || s.numerator() % n != 0) zero = false;
      }
      if (zero) return false;
    }
  }
  return true;
}

Outcome construction() {
  Outcome o;
  const auto start = Clock::now();
  for (const char* base : {"Q", "Fp(3)"}) {
    const auto c = ConstructionInstance::make(base);
    const auto h = c.check_homomorphism(200, 1);
    const auto r = c.check_valuation_restriction(500, 2);
    const auto p = c.check_purity(12);
    const auto w = c.nondefinability_witness();
    const bool brute = pure_by_enumeration(p.generators, 12);
    o.need(h.passed() && h.checked >= 1200, std::string(base) + ": homomorphism");
    o.need(r.passed() && r.checked >= 1000, std::string(base) + ": valuation restriction");
    o.need(p.pure && brute && p.negative_control_impure && p.map_matches, std::string(base) + ": purity");
    o.need(w.holds && w.t_is_not_witness, std::string(base) + ": witness");
    // phi(x) = y, phi(t) = s z, checked against hand-written images
    o.need(c.phi(c.x()) == parse_element(c.K2(), "y") && c.phi(c.t()) == parse_element(c.K2(), "s*z") &&
               c.phi(parse_element(c.K1(), "x^(-1/2)*t^-1 + x^2")) ==
                   parse_element(c.K2(), "y^(-1/2)*s^-1*z^-1 + y^2"),
           std::string(base) + ": images");
    o.lines.push_back("  " + std::string(base) + ": " + std::to_string(h.checked) + " homomorphism, " +
                      std::to_string(r.checked) + " restriction checks; witness v1(x^-1) = " + w.v1.to_string() +
                      ", v2(phi(x^-1)) = " + w.v2_image.to_string());
  }
  o.need(Clock::now() - start < std::chrono::seconds(10), "runtime");
  o.lines.push_back("  " + seconds(start));
  return o;
}

Outcome group_table() {
  Outcome o;
  for (const char* s : {"Z", "Q", "Z*Z", "Z*Q", "Q*Z", "Z*Z*Z"}) {
    const auto g = GroupShape::parse(s);
    // Z-group: a lowest Z factor and divisible factors above it
    bool want = g.factor(0) == Factor::Z;
    for (std::size_t i = 1; i < g.rank(); ++i) want = want && g.factor(i) == Factor::Q;
    const bool z = is_Z_group(g), reg = has_regular_quotient(g);
    o.need(z == want, std::string("is_Z_group ") + s);
    o.need(reg, std::string("has_regular_quotient ") + s);
    char line[96];
    std::snprintf(line, sizeof line, "  %-6s discrete=%d 2-regular=%d Z-group=%d regular-quotient=%d", s,
                  is_discrete(g).has_value(), is_p_regular(g, 2), z, reg);
    o.lines.push_back(line);
  }
  o.need(!is_p_regular(GroupShape::parse("Z*Z"), 2), "is_p_regular(Z*Z, 2)");
  return o;
}

Outcome formula_layer() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_formula(rng, 6);
    const auto text = to_string(f);
    try {
      o.need(equal(parse_formula(text), f), "round trip " + text);
    } catch (const ParseError& e) {
      o.need(false, "round trip " + text + ": " + e.what());
    }
  }
  RandomAstOptions opts;
  opts.variables = {"x", "y"};
  opts.max_numeral = 9;
  opts.max_exponent = 3;
  opts.max_pred = 4;
  const std::vector<FieldPtr> fields{Field::padic(5), Field::parse("Laurent(Fp(7))"), Field::parse("Laurent(Fp(3))")};
  Gen g(81);
  std::size_t decided = 0, attempts = 0;
  while (decided < 200 && attempts < 2000) {
    ++attempts;
    const auto f = random_formula(rng, 3, opts);
    if (has_quantifier(f) || !has_power_predicate(f)) continue;
    const auto& fld = fields[attempts % fields.size()];
    const Assignment env{{"x", g.any(fld).x}, {"y", g.any(fld).x}};
    const auto a = evaluate(f, env, fld), b = evaluate(eliminate_power_predicates(f), env, fld);
    if (a.truth == Truth::InsufficientPrecision || b.truth == Truth::InsufficientPrecision) continue;
    o.need(a.truth == b.truth, "elimination changes " + to_string(f));
    ++decided;
  }
  o.need(decided == 200, "only " + std::to_string(decided) + " decided assignments");
  std::string counts;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (bool as : {false, true}) {
      if (p == 2 && as) continue;
      const auto prefix = quantifier_prefix(phi_z_schema(p, as));
      o.need(prefix.size() == 2 && prefix[0].kind == Formula::Kind::Exists && prefix[0].count == 3 &&
                 prefix[1].kind == Formula::Kind::Forall && prefix[1].count == 2 * p * p,
             "prefix for p=" + std::to_string(p));
      if (prefix.size() == 2) {
        counts += " p=" + std::to_string(p) + (as ? "(AS)" : "") + ": E" + std::to_string(prefix[0].count) + " A" +
                  std::to_string(prefix[1].count) + ";";
      }
    }
  }
  o.lines.push_back("  1000 round trips, " + std::to_string(decided) + " elimination assignments;" + counts);
  return o;
}

Outcome hensel_engine() {
  Outcome o;
  std::size_t lifts = 0;
  std::uint64_t salt = 0;
  for (const char* d : {"Qp(3)", "Qp(7)", "Laurent(Fp(5))", "Laurent(Fp(7))"}) {
    const auto f = Field::parse(d);
    const Rational cap = precision_cap(f);
    Gen g(900 + ++salt);
    auto integral = [&] { return g.with_valuation(f, g.uniform(0, 3)).x; };
    for (int i = 0; i < 50; ++i, ++lifts) {
      // F(Y) = (Y - a)(g0 + g1 Y) + e with g0 + g1 a a unit and v(e) > 0:
      // a is a simple root of the reduction.
      const Element a = integral(), g1 = g.with_valuation(f, 0).x;
      Element g0 = integral();
      while (!residue(g0 + g1 * a, 1).known_nonzero()) g0 = integral();
      const Element e = g.with_valuation(f, g.uniform(1, 4)).x;
      const ElementPoly poly({-a * g0 + e, g0 - a * g1, g1});
      const std::string at = std::string(d) + " a=" + to_string(a) + " e=" + to_string(e);
      try {
        const auto r = hensel_lift(poly, a);
        o.need(r.target == cap, "target below cap at " + at);
        o.need(at_least(vanishes_to(poly.eval(r.root)), cap), "residual below cap at " + at);
        o.need(doubling(r.log, r.target) && r.log.size() >= 2, "precision does not double at " + at);
      } catch (const Error& ex) {
        o.need(false, at + ": " + ex.what());
      }
    }
  }
  // one logged trajectory for the record
  const auto f = Field::padic(7);
  const auto r = hensel_lift(ElementPoly({Element::from_int(f, -2), Element::zero(f), Element::one(f)}),
                             Element::from_int(f, 3));
  std::string traj;
  for (const auto& s : r.log) traj += " " + (s.residual ? to_string(*s.residual) : std::string("exact"));
  o.lines.insert(o.lines.begin(), "  " + std::to_string(lifts) + " lifts; sqrt(2) in Q7 residuals:" + traj);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Robinson formula agrees with v_p(x) >= 0 on Q_3, Q_5, Q_7, Q_11", robinson_agreement},
      {"phi_Z agrees with v(x) >= 0 on the field/case matrix", phi_z_agreement},
      {"R_a contains x whenever p v(x) > -v(a); residuals reach the cap", lemma_b_battery},
      {"R_t is the valuation ring on F_3((t)) and Q_5", r_t_both_directions},
      {"square class indices 2, 4, 8", power_class_indices},
      {"embedding: homomorphism, restriction, purity, witness", construction},
      {"ordered group predicates", group_table},
      {"formula layer: round trip, P_n elimination, schema prefixes", formula_layer},
      {"Hensel lifting: residual and precision doubling", hensel_engine},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.lines.push_back(std::string("  exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << ": " << criteria[i].first << "\n";
    for (const auto& l : o.lines) std::cout << l << "\n";
    failures += !o.pass;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failures ? 1 : 0;
}
