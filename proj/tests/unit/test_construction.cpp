#include <gtest/gtest.h>

#include <random>

#include "valdef/construction.hpp"
#include "valdef/element_text.hpp"
#include "valdef/report.hpp"

using namespace valdef;

namespace {

std::string exp_text(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return "(" + std::to_string(q.numerator()) + "/" + std::to_string(q.denominator()) + ")";
}

// Random sums of c*x^d*t^g over a finite field and the image written by hand:
// c*y^d*s^g*z^g.
std::pair<std::string, std::string> random_pair(std::mt19937_64& rng, long modulus) {
  std::uniform_int_distribution<long> coef(1, modulus - 1), num(-6, 6), den(1, 3), g(-3, 4), len(1, 4);
  std::string src, img;
  const long n = len(rng);
  for (long i = 0; i < n; ++i) {
    const long c = coef(rng);
    const Rational d(num(rng), den(rng));
    const Rational e(g(rng));
    if (i) {
      src += " + ";
      img += " + ";
    }
    src += std::to_string(c) + "*x^" + exp_text(d) + "*t^" + exp_text(e);
    img += std::to_string(c) + "*y^" + exp_text(d) + "*s^" + exp_text(e) + "*z^" + exp_text(e);
  }
  return {src, img};
}

}  // namespace

TEST(Phi, Examples) {
  const auto c = ConstructionInstance::make("Fp(3)");
  EXPECT_EQ(c.phi(c.x()), parse_element(c.K2(), "y"));
  EXPECT_EQ(c.phi(c.t()), parse_element(c.K2(), "s*z"));
  const auto f = parse_element(c.K1(), "x^(1/2)*t^2 + t^3");
  EXPECT_EQ(c.phi(f), parse_element(c.K2(), "y^(1/2)*s^2*z^2 + s^3*z^3"));
  EXPECT_EQ(c.K1()->to_string(), "Laurent(GenSeries(Q, Fp(3), x), t)");
  EXPECT_THROW(c.phi(parse_element(c.K2(), "y")), PreconditionViolation);
}

TEST(Phi, MatchesHandWrittenImages) {
  for (const char* res : {"Fp(5)", "Fp(7)"}) {
    const auto c = ConstructionInstance::make(res);
    const long m = c.F()->characteristic();
    std::mt19937_64 rng(m);
    for (int i = 0; i < 200; ++i) {
      const auto [src, img] = random_pair(rng, m);
      EXPECT_EQ(c.phi(parse_element(c.K1(), src)), parse_element(c.K2(), img)) << src;
    }
  }
}

TEST(Phi, FactorsThroughK0) {
  const auto c = ConstructionInstance::make("Q");
  const auto f = parse_element(c.K1(), "x^(-1/2)*t^-1 + 3*t^2");
  EXPECT_EQ(c.epsilon(f), parse_element(c.K0(), "y^(-1/2)*z^-1 + 3*z^2"));
  EXPECT_EQ(c.include(c.alpha(c.epsilon(f))), c.phi(f));
  EXPECT_EQ(c.alpha(c.alpha(c.epsilon(f)), -1), c.epsilon(f));
}

TEST(Checks, HomomorphismAndRestriction) {
  for (const char* res : {"Q", "Fp(3)"}) {
    const auto c = ConstructionInstance::make(res);
    const auto h = c.check_homomorphism(60, 4);
    EXPECT_TRUE(h.passed()) << res << " " << (h.notes.empty() ? "" : h.notes[0]);
    EXPECT_GT(h.checked, 300u);
    const auto v = c.check_valuation_restriction(150, 5);
    EXPECT_TRUE(v.passed()) << res << " " << (v.notes.empty() ? "" : v.notes[0]);
  }
}

TEST(Checks, Purity) {
  const auto c = ConstructionInstance::make("Q");
  const auto p = c.check_purity(12);
  EXPECT_TRUE(p.pure);
  EXPECT_TRUE(p.negative_control_impure);
  EXPECT_TRUE(p.map_matches);
  ASSERT_EQ(p.generators.size(), 2u);
  EXPECT_EQ(p.generators[0].to_string(), "(0,1,0)");
  EXPECT_EQ(p.generators[1].to_string(), "(1,0,1)");
  EXPECT_TRUE(is_pure_sublattice({}, GroupShape::parse("Z*Z*Z"), 12));
}

TEST(Checks, Witness) {
  for (const char* res : {"Q", "Fp(3)"}) {
    const auto w = ConstructionInstance::make(res).nondefinability_witness();
    EXPECT_TRUE(w.holds) << res;
    EXPECT_TRUE(w.t_is_not_witness) << res;
    EXPECT_EQ(w.v1.to_string(), "(0)");
    EXPECT_EQ(w.u.to_string(), "(-1,0)");
    EXPECT_EQ(w.v2_image.to_string(), "(0,-1,0)");
  }
}

TEST(Checks, Audit) {
  const auto q = ConstructionInstance::make("Q").hypothesis_audit();
  EXPECT_TRUE(q.residue_char_zero);
  EXPECT_TRUE(q.gamma_regular_quotient);
  EXPECT_FALSE(q.noE_case.has_value());
  const auto f3 = ConstructionInstance::make("Fp(3)").hypothesis_audit();
  EXPECT_FALSE(f3.residue_char_zero);
  EXPECT_EQ(f3.lines.size(), 4u);
}

TEST(Construction, Unsupported) {
  EXPECT_THROW(ConstructionInstance::make("Q", "Z*Z"), Unsupported);
  EXPECT_THROW(ConstructionInstance::make("Qp(5)"), Unsupported);
}

TEST(NoE, Cases) {
  EXPECT_EQ(qualifies_for_noE(*Field::parse("C")), 'a');
  EXPECT_EQ(qualifies_for_noE(*Field::parse("Qp(5)")), 'c');
  EXPECT_EQ(qualifies_for_noE(*Field::parse("Laurent(Q)")), 'd');
  EXPECT_FALSE(qualifies_for_noE(*Field::parse("Laurent(Fp(3))")));
  EXPECT_FALSE(qualifies_for_noE(*Field::parse("Q")));
}

TEST(Table, RowsForNestedSeries) {
  const auto rows = definability_table(Field::parse("Laurent(Laurent(Qp(5)))"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].group.to_string(), "Z");
  EXPECT_EQ(rows[0].square_class_index, std::optional<std::uint64_t>(8));
  EXPECT_EQ(rows[0].exists_mac.value, "No");
  EXPECT_EQ(rows[1].square_class_index, std::optional<std::uint64_t>(4));
  EXPECT_EQ(rows[1].exists_forall_ring.value, "?");
  EXPECT_EQ(rows[2].residue, "Fp(5)");
  for (const auto* cell : {&rows[2].exists_mac, &rows[2].forall_mac, &rows[2].exists_forall_ring,
                           &rows[2].forall_exists_ring}) {
    EXPECT_EQ(cell->value, "Yes");
    EXPECT_EQ(cell->basis, "cited");
    EXPECT_FALSE(cell->reason.empty());
  }
  EXPECT_THROW(definability_table(Field::parse("Q")), Unsupported);
}
