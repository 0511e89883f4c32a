#include <gtest/gtest.h>

#include <set>

#include "valdef/element_text.hpp"
#include "valdef/hensel.hpp"
#include "valdef/henselian.hpp"
#include "valdef/powers.hpp"
#include "valdef/sampling.hpp"

using namespace valdef;

namespace {

FieldPtr fld(const char* d, std::int64_t prec = 64) {
  PrecisionConfig c;
  c.padic_digits = prec;
  c.series_order = prec;
  return Field::parse(d, c);
}

Element el(const FieldPtr& f, const char* text) { return parse_element(f, text); }

BigInt pw(long b, unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
  return r;
}

// Integer square roots of a mod 2^k by search.
bool square_mod_power_of_two(long a, unsigned k) {
  const long m = 1L << k;
  for (long y = 0; y < m; ++y) {
    if ((y * y - a) % m == 0) return true;
  }
  return false;
}

bool small(const Element& e, std::int64_t at_least) {
  if (!e.known_nonzero()) return true;
  return valuation(e, 1)[valuation(e, 1).rank() - 1] >= at_least;
}

}  // namespace

TEST(Descriptors, ParseAndShape) {
  const auto f = fld("Laurent(Laurent(Qp(5)))");
  EXPECT_EQ(f->to_string(), "Laurent(Laurent(Qp(5)))");
  EXPECT_EQ(f->depth(), 3u);
  EXPECT_EQ(f->value_group().to_string(), "Z*Z*Z");
  EXPECT_EQ(f->residue_field(1)->to_string(), "Laurent(Qp(5))");
  EXPECT_EQ(f->residue_field(3)->to_string(), "Fp(5)");
  EXPECT_EQ(fld("GenSeries(Q, Laurent(Fp(3)))")->value_group().to_string(), "Z*Q");
  EXPECT_THROW(fld("Laurent(Qp(6))"), ParseError);
  EXPECT_THROW(fld("Puiseux(Q)"), ParseError);
}

TEST(Arith, GeometricSeries) {
  const auto f = fld("Laurent(Fp(3))", 20);
  const auto x = el(f, "1 + t");
  const auto y = inv(x);
  EXPECT_EQ(to_string(coefficient(y, Rational(5))), "2");
  const auto r = x * y - Element::one(f);
  EXPECT_FALSE(r.known_nonzero());
  EXPECT_GE(*outer_precision(r), Rational(20));
}

TEST(Arith, PadicInverseOfTwo) {
  const auto f = fld("Qp(5)", 6);
  const auto two = Element::from_padic(f, PAdic::from_int(5, 2).to_approx(6));
  const auto h = inv(two);
  ASSERT_TRUE(h.is_padic());
  EXPECT_EQ(h.padic().valuation(), 0);
  const BigInt m = pw(5, 6);
  EXPECT_EQ(mod_floor(h.padic().unit_mod(6) * 2, m), BigInt(1));
  // digits of 1/2 = 3 + 2*5 + 2*5^2 + ...
  EXPECT_EQ(mod_floor(h.padic().unit_mod(6), BigInt(5)), BigInt(3));
  EXPECT_EQ(mod_floor(h.padic().unit_mod(6), BigInt(25)), BigInt(13));
}

TEST(Arith, AdditiveInverseKeepsPrecision) {
  const auto f = fld("Laurent(Fp(5))", 64);
  const auto x = el(f, "t^-1 + 2 + O(t^7)");
  const auto z = x + (-x);
  EXPECT_FALSE(z.known_nonzero());
  EXPECT_EQ(*outer_precision(z), Rational(7));
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(Element::from_int(fld("Qp(5)"), 75), 1).to_string(), "(2)");
  const auto f = fld("Laurent(Laurent(Qp(5)))");
  EXPECT_EQ(valuation(el(f, "5*t^-1"), 2).to_string(), "(-1,0)");
  EXPECT_EQ(valuation(el(f, "s^2*t^-3"), 1).to_string(), "(2)");
  EXPECT_TRUE(in_valuation_ring(el(f, "t"), 2));
  EXPECT_FALSE(in_valuation_ring(el(f, "t^-1"), 2));
  EXPECT_EQ(valuation(el(f, "5*t^-1"), 3).to_string(), "(1,-1,0)");
}

TEST(Valuation, LawsOnSamples) {
  for (const char* d : {"Qp(3)", "Laurent(Fp(5))", "Laurent(Qp(7))", "GenSeries(Q, Fq(4))"}) {
    const auto f = fld(d);
    Sampler s(17);
    for (int i = 0; i < 200; ++i) {
      const auto a = s.nonzero(f), b = s.nonzero(f);
      const std::size_t k = f->depth();
      EXPECT_EQ(valuation(a * b, k), valuation(a, k) + valuation(b, k)) << d;
      EXPECT_EQ(valuation(inv(a), k), -valuation(a, k)) << d;
      const auto sum = a + b;
      if (sum.known_nonzero()) {
        EXPECT_GE(valuation(sum, k), std::min(valuation(a, k), valuation(b, k))) << d;
      }
    }
  }
}

TEST(Residue, Examples) {
  EXPECT_EQ(to_string(residue(Element::from_int(fld("Qp(5)"), 7), 1)), "2");
  EXPECT_EQ(residue(Element::from_int(fld("Qp(5)"), 7), 1).field()->to_string(), "Fp(5)");
  EXPECT_EQ(to_string(residue(el(fld("Laurent(Fp(3))"), "2 + t"), 1)), "2");
  const auto f = fld("Laurent(Laurent(Qp(5)))");
  const auto r = residue(el(f, "5 + t + s*(1 + t)"), 1);
  EXPECT_EQ(r.field()->to_string(), "Laurent(Qp(5))");
  EXPECT_EQ(r, el(r.field(), "5 + t"));
  EXPECT_THROW(residue(el(f, "s^-1"), 1), PreconditionViolation);
}

TEST(Hensel, SqrtTwoInQ7) {
  const auto f = fld("Qp(7)");
  const ElementPoly poly({Element::from_int(f, -2), Element::zero(f), Element::one(f)});
  const auto r = hensel_lift(poly, Element::from_int(f, 3));
  ASSERT_TRUE(r.residual);
  EXPECT_GE(*r.residual, Rational(64));
  EXPECT_TRUE(precision_doubles(r.log, r.target));
  const BigInt m = pw(7, 64), u = r.root.padic().unit_mod(64);
  EXPECT_EQ(mod_floor(u * u - 2, m), BigInt(0));
}

TEST(Hensel, SqrtOnePlusTInF5) {
  const auto f = fld("Laurent(Fp(5))", 40);
  const auto c = el(f, "1 + t");
  const ElementPoly poly({-c, Element::zero(f), Element::one(f)});
  const auto r = hensel_lift(poly, Element::one(f));
  EXPECT_EQ(to_string(coefficient(r.root, Rational(1))), "3");  // 1/2 in F_5
  EXPECT_TRUE(small(r.root * r.root - c, 40));
  EXPECT_TRUE(precision_doubles(r.log, r.target));
}

TEST(Hensel, RejectsRepeatedRoot) {
  const auto f = fld("Qp(5)");
  const ElementPoly poly({Element::one(f), Element::from_int(f, -2), Element::one(f)});
  EXPECT_THROW(hensel_lift(poly, Element::one(f)), PreconditionViolation);
}

TEST(Powers, Examples) {
  EXPECT_FALSE(is_nth_power(Element::from_int(fld("Qp(3)"), 3), 2));
  EXPECT_TRUE(square_mod_power_of_two(17, 10));
  EXPECT_TRUE(is_nth_power(Element::from_int(fld("Qp(2)"), 17), 2));
  EXPECT_FALSE(is_nth_power(Element::from_int(fld("Qp(2)"), 3), 2));
  EXPECT_FALSE(is_nth_power(el(fld("Laurent(Qp(5))"), "5*t"), 2));
  EXPECT_TRUE(is_nth_power(el(fld("Laurent(Qp(5))"), "t^2*(1 + 5)"), 2));
}

TEST(Powers, TwoAdicSquaresMatchSearch) {
  const auto f = fld("Qp(2)");
  for (long a = 1; a < 200; a += 2) {
    EXPECT_EQ(is_nth_power(Element::from_int(f, a), 2), square_mod_power_of_two(a, 6)) << a;
  }
}

TEST(Powers, RootsCubeBack) {
  for (const char* d : {"Qp(7)", "Laurent(Fp(7))", "Laurent(Qp(7))"}) {
    const auto f = fld(d);
    Sampler s(8);
    for (int i = 0; i < 60; ++i) {
      const auto y = s.nonzero(f);
      const auto x = y * y * y;
      const auto r = nth_root(x, 3);
      ASSERT_TRUE(r) << d << " " << to_string(x);
      EXPECT_FALSE((r->root * r->root * r->root - x).known_nonzero() &&
                   !small(r->root * r->root * r->root - x, 60))
          << d;
    }
  }
}

TEST(PowerClassIndex, Valued) {
  for (const char* l : {"3", "5", "7"}) {
    EXPECT_EQ(power_class_index_valued(*fld((std::string("Qp(") + l + ")").c_str()), 1, 2), 4u);
    EXPECT_EQ(power_class_index_valued(*fld((std::string("Laurent(Qp(") + l + "))").c_str()), 1, 2), 8u);
  }
  EXPECT_EQ(power_class_index_valued(*fld("Laurent(C)"), 1, 2), 2u);
  EXPECT_EQ(power_class_index(*fld("Qp(2)"), 2), 8u);
}

TEST(PowerClassIndex, SquareClassesOfQ5BySampling) {
  // Classes of Q_5^x / squares: parity of v and the residue of the unit.
  const auto f = fld("Qp(5)");
  Sampler s(4);
  std::set<std::pair<int, bool>> classes;
  for (int i = 0; i < 300; ++i) {
    const auto a = s.nonzero(f);
    const auto v = a.padic().valuation();
    const long u = mod_floor(a.padic().unit_mod(1), BigInt(5)).get_si();
    classes.insert({static_cast<int>(((v % 2) + 2) % 2), u == 1 || u == 4});
    const auto shifted = a * Element::from_rational(f, BigRational(1));
    EXPECT_EQ(is_nth_power(shifted, 2), v % 2 == 0 && (u == 1 || u == 4));
  }
  EXPECT_EQ(classes.size(), power_class_index(*f, 2));
}

TEST(PHenselian, Examples) {
  EXPECT_TRUE(p_henselian_check(fld("Qp(5)"), 1, 2, 200, 1).passed());
  EXPECT_TRUE(p_henselian_check(fld("Laurent(Fp(3))"), 1, 2, 200, 1).passed());
  EXPECT_THROW(p_henselian_check(fld("Q"), 1, 2, 10, 1), PreconditionViolation);
  EXPECT_THROW(p_henselian_check(fld("Qp(2)"), 1, 2, 10, 1), PreconditionViolation);
}

TEST(ElementText, RoundTrip) {
  for (const char* d : {"Qp(5)", "Laurent(Fp(3))", "Laurent(Laurent(Qp(5)))", "GenSeries(Q, Fq(9))"}) {
    const auto f = fld(d);
    Sampler s(12);
    for (int i = 0; i < 100; ++i) {
      const auto x = s.element(f);
      EXPECT_EQ(parse_element(f, to_string(x)), x) << d << " " << to_string(x);
      EXPECT_EQ(from_json(to_json(x)), x) << d;
      EXPECT_EQ(to_json(from_json(to_json(x))).dump(), to_json(x).dump());
    }
  }
}

TEST(ElementText, SortedAndValidated) {
  const auto f = fld("Laurent(Fp(3))");
  EXPECT_EQ(to_string(el(f, "t^3 + 2 + t^-1")), "t^-1 + 2 + t^3");
  EXPECT_THROW(el(f, "t^(1/2)"), ParseError);
  EXPECT_THROW(el(f, "3 +"), ParseError);
  EXPECT_THROW(el(f, "y"), ParseError);
  EXPECT_EQ(to_string(el(fld("GenSeries(Q, Q)"), "t^(1/2) * t^(1/3)")), "t^(5/6)");
}
