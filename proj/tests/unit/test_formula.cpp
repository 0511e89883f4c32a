#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "valdef/formula_eval.hpp"
#include "valdef/sampling.hpp"

using namespace valdef;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(VALDEF_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::size_t count_nodes(const FormulaPtr& f, Formula::Kind k) {
  if (!f) return 0;
  return (f->kind == k) + count_nodes(f->a, k) + count_nodes(f->b, k);
}

Assignment env_of(const FieldPtr& f, std::initializer_list<std::pair<const char*, const char*>> items) {
  Assignment env;
  for (const auto& [k, v] : items) env.insert_or_assign(k, parse_element(f, v));
  return env;
}

}  // namespace

TEST(Parse, Examples) {
  const auto r = parse_formula("E y. y*y = 1 + p*x*x");
  EXPECT_EQ(r->kind, Formula::Kind::Exists);
  EXPECT_EQ(r->var, "y");
  EXPECT_EQ(r->a->kind, Formula::Kind::Eq);
  const auto p = parse_formula("P_2(1 + 4*c)");
  EXPECT_EQ(p->kind, Formula::Kind::Pred);
  EXPECT_EQ(p->n, 2u);
  try {
    parse_formula("E y. y y");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Parse, PrecedenceAndSugar) {
  EXPECT_THROW(parse_formula("x"), ParseError);
  EXPECT_TRUE(equal(parse_formula("x = 0 | y = 0 & z = 0"), parse_formula("x = 0 | (y = 0 & z = 0)")));
  EXPECT_TRUE(equal(parse_formula("x = 0 -> y = 0 -> z = 0"), parse_formula("x = 0 -> (y = 0 -> z = 0)")));
  EXPECT_TRUE(equal(parse_formula("E x, y. x = y"), parse_formula("E x. E y. x = y")));
  EXPECT_EQ(to_string(parse_formula("x - (y - z) = -x^2*y")), "x - (y - z) = -x^2*y");
  EXPECT_EQ(to_string(parse_formula("~(a = 0)")), "~(a = 0)");
  EXPECT_THROW(parse_formula("P_0(x)"), ParseError);
  EXPECT_THROW(parse_formula("E . x = 0"), ParseError);
}

TEST(Parse, RandomRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_formula(rng, 5);
    const auto text = to_string(f);
    const auto back = parse_formula(text);
    ASSERT_TRUE(equal(f, back)) << text << "\n" << to_string(back);
    EXPECT_EQ(to_string(back), text);
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(robinson_schema()).kind, EvalClass::Kind::SolvabilityPattern);
  EXPECT_EQ(classify(parse_formula("P_2(x) & P_3(x)")).kind, EvalClass::Kind::QuantifierFree);
  EXPECT_EQ(classify(phi_z_schema(2, false)).kind, EvalClass::Kind::Unsupported);
  EXPECT_EQ(classify(parse_formula("E y. y^3 - y = x")).to_string(), "SolvabilityPattern(ArtinSchreier(3))");
  EXPECT_EQ(classify(parse_formula("A y. y*x = 0"), 0).kind, EvalClass::Kind::Unsupported);
  EXPECT_EQ(classify(parse_formula("A y. y*x = 0"), 3).kind, EvalClass::Kind::BoundedSearch);
}

TEST(Evaluate, Examples) {
  const auto q5 = Field::padic(5);
  const auto d = evaluate(robinson_schema(), env_of(q5, {{"x", "1"}, {"p", "5"}}), q5);
  EXPECT_EQ(d.truth, Truth::True);
  EXPECT_EQ(d.truth, robinson_evaluate(Element::one(q5)).truth);
  const auto qq = Field::parse("Q");
  EXPECT_EQ(evaluate(parse_formula("P_2(9)"), {}, qq).truth, Truth::True);
  EXPECT_EQ(evaluate(parse_formula("P_2(8)"), {}, qq).truth, Truth::False);
  const auto f3 = Field::parse("Laurent(Fp(3))");
  EXPECT_EQ(evaluate(phi_z_schema(2, false), env_of(f3, {{"x", "t^-1"}}), f3).truth, Truth::False);
  EXPECT_EQ(evaluate(phi_z_schema(2, false), env_of(f3, {{"x", "1 + t"}}), f3).truth, Truth::True);
  EXPECT_THROW(evaluate(parse_formula("x = 0"), {}, qq), PreconditionViolation);
  EXPECT_THROW(evaluate(parse_formula("A y. y*x = 0"), env_of(qq, {{"x", "0"}}), qq), Unsupported);
}

TEST(Evaluate, RobinsonSchemaOutsideItsFieldIsGeneric) {
  // In Q_2 the schema is still a solvability pattern: 1 + 2x^2 is a square.
  const auto q2 = Field::padic(2);
  const auto d = evaluate(robinson_schema(), env_of(q2, {{"x", "0"}, {"p", "2"}}), q2);
  EXPECT_EQ(d.truth, Truth::True);
  EXPECT_EQ(evaluate(robinson_schema(), env_of(q2, {{"x", "1"}, {"p", "2"}}), q2).truth, Truth::False);
}

TEST(Evaluate, BoundedSearchIsExplicit) {
  const auto f = Field::parse("Fp(5)");
  EvalOptions o;
  for (int i = 0; i < 5; ++i) o.pool.push_back(Element::from_int(f, i));
  // a pool can supply witnesses and counterexamples, never a proof of A
  EXPECT_EQ(evaluate(parse_formula("A y. E z. y + z = 0"), {}, f, o).truth, Truth::InsufficientPrecision);
  EXPECT_EQ(evaluate(parse_formula("A y. y*y = y"), {}, f, o).truth, Truth::False);
  EXPECT_EQ(evaluate(parse_formula("E y. A z. y*z = 0"), {}, f, o).truth, Truth::InsufficientPrecision);
  EXPECT_EQ(evaluate(parse_formula("E y. y*y = 2"), {}, f, o).truth, Truth::False);
}

TEST(Eliminate, Examples) {
  EXPECT_EQ(to_string(eliminate_power_predicates(parse_formula("P_2(x)"))), "E w0. w0*w0 = x");
  const auto r = robinson_schema();
  EXPECT_EQ(eliminate_power_predicates(r).get(), r.get());
  const auto two = eliminate_power_predicates(parse_formula("P_2(x) | P_3(y)"));
  EXPECT_EQ(to_string(two), "(E w0. w0*w0 = x) | (E w1. w1*w1*w1 = y)");
  EXPECT_FALSE(has_power_predicate(two));
  // fresh names avoid the formula's own variables
  EXPECT_EQ(to_string(eliminate_power_predicates(parse_formula("P_2(w0)"))), "E w1. w1*w1 = w0");
}

TEST(Eliminate, SoundOnAssignments) {
  std::mt19937_64 rng(7);
  const std::vector<FieldPtr> fields{Field::padic(3), Field::parse("Laurent(Fp(5))"), Field::parse("Fq(9)")};
  RandomAstOptions o;
  o.variables = {"x", "y"};
  o.max_pred = 3;
  std::size_t checked = 0;
  Sampler sm(8);
  while (checked < 200) {
    const auto f = random_formula(rng, 3, o);
    if (!has_power_predicate(f) || has_quantifier(f)) continue;
    const auto g = eliminate_power_predicates(f);
    const auto& field = fields[checked % fields.size()];
    Assignment env{{"x", sm.element(field)}, {"y", sm.element(field)}};
    const auto a = evaluate(f, env, field), b = evaluate(g, env, field);
    if (a.truth == Truth::InsufficientPrecision || b.truth == Truth::InsufficientPrecision) continue;
    EXPECT_EQ(a.truth, b.truth) << to_string(f);
    ++checked;
  }
}

TEST(Schemas, QuantifierCounts) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto f = phi_z_schema(p, p != 2);
    const auto prefix = quantifier_prefix(f);
    ASSERT_EQ(prefix.size(), 2u);
    EXPECT_EQ(prefix[0].kind, Formula::Kind::Exists);
    EXPECT_EQ(prefix[0].count, 3u);
    EXPECT_EQ(prefix[1].kind, Formula::Kind::Forall);
    EXPECT_EQ(prefix[1].count, 2u * p * p);
    EXPECT_EQ(count_nodes(f, Formula::Kind::Pred), 0u);
    const auto m = match_schema(parse_formula(to_string(f)));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->p, p);
  }
}

TEST(Schemas, Golden) {
  EXPECT_EQ(to_string(phi_z_schema(2, false)), golden("phi_z_p2_kummer.txt"));
  EXPECT_EQ(to_string(phi_z_schema(2, true)), golden("phi_z_p2_artin_schreier.txt"));
  EXPECT_EQ(to_string(phi_z_schema(3, true)), golden("phi_z_p3_artin_schreier.txt"));
  EXPECT_EQ(to_string(robinson_schema()), golden("robinson.txt"));
}

TEST(Terms, NumeralsAndPolynomials) {
  EXPECT_EQ(to_string(term::numeral(3)), "3");
  EXPECT_EQ(poly::of(term::numeral(1000)), poly::constant(1000));
  const auto t = parse_term("(x + 1)^3 - x^3");
  const auto q = poly::of(t);
  EXPECT_EQ(poly::degree(q), 2u);
  const auto f = Field::padic(7);
  const auto v = poly::evaluate(q, {{"x", Element::from_int(f, 2)}}, f);
  EXPECT_EQ(v, Element::from_int(f, 19));
}
