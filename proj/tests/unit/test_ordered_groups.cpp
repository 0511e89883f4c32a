#include <gtest/gtest.h>

#include <random>

#include "valdef/ordered_groups.hpp"

using namespace valdef;

namespace {

GroupShape shape(const char* s) { return GroupShape::parse(s); }
GroupElement el(const char* sh, const char* e) { return GroupElement::parse(shape(sh), e); }

// Reference order: scan from the last coordinate down.
int ref_compare(const GroupElement& a, const GroupElement& b) {
  for (std::size_t i = a.rank(); i-- > 0;) {
    if (a[i] < b[i]) return -1;
    if (b[i] < a[i]) return 1;
  }
  return 0;
}

GroupElement random_element(std::mt19937_64& rng, const GroupShape& s) {
  std::uniform_int_distribution<int> d(-4, 4), den(1, 3);
  std::vector<Rational> c;
  for (auto f : s.factors()) c.push_back(f == Factor::Z ? Rational(d(rng)) : Rational(d(rng), den(rng)));
  return GroupElement(s, c);
}

// n-purity of an independent integer family by brute force: no nonzero
// coefficient vector mod n sends the generators to 0 mod n.
bool brute_force_pure(const std::vector<std::vector<int>>& gens, int n_max) {
  const std::size_t k = gens.size(), dim = gens.empty() ? 0 : gens[0].size();
  for (int n = 2; n <= n_max; ++n) {
    std::vector<int> c(k, 0);
    while (true) {
      std::size_t i = 0;
      while (i < k && ++c[i] == n) c[i++] = 0;
      if (i == k) break;
      bool all_zero = true;
      for (std::size_t j = 0; j < dim; ++j) {
        long s = 0;
        for (std::size_t g = 0; g < k; ++g) s += static_cast<long>(c[g]) * gens[g][j];
        if (s % n != 0) all_zero = false;
      }
      if (all_zero) return false;
    }
  }
  return true;
}

}  // namespace

TEST(GroupOrder, LastCoordinateDominates) {
  EXPECT_LT(el("Z*Z", "(1,0)"), el("Z*Z", "(0,1)"));
  EXPECT_LT(el("Z*Z", "(-3,0)"), el("Z*Z", "(0,0)"));
  EXPECT_LT(el("Z*Z", "(5,-1)"), el("Z*Z", "(0,0)"));
}

TEST(GroupOrder, AgreesWithReferenceOnSamples) {
  std::mt19937_64 rng(11);
  for (const char* s : {"Z", "Q", "Z*Z", "Q*Z", "Z*Q", "Z*Z*Z"}) {
    for (int i = 0; i < 300; ++i) {
      const auto a = random_element(rng, shape(s)), b = random_element(rng, shape(s));
      const int want = ref_compare(a, b);
      const auto got = cmp(a, b);
      EXPECT_EQ(want < 0, got < 0) << s;
      EXPECT_EQ(want == 0, got == 0) << s;
    }
  }
}

TEST(GroupArith, Examples) {
  EXPECT_EQ(el("Z*Z", "(1,2)") + el("Z*Z", "(0,-2)"), el("Z*Z", "(1,0)"));
  EXPECT_EQ(-el("Z*Z", "(0,0)"), el("Z*Z", "(0,0)"));
  EXPECT_EQ(3 * el("Z*Z", "(1,1)"), el("Z*Z", "(3,3)"));
}

TEST(GroupArith, OrderIsTranslationInvariant) {
  std::mt19937_64 rng(5);
  const auto s = shape("Q*Z*Q");
  for (int i = 0; i < 300; ++i) {
    const auto a = random_element(rng, s), b = random_element(rng, s), c = random_element(rng, s);
    EXPECT_EQ(cmp(a, b) < 0, cmp(a + c, b + c) < 0);
    EXPECT_EQ(a - a, GroupElement::zero(s));
  }
}

TEST(DivideBy, Examples) {
  EXPECT_EQ(*divide_by(2, el("Z*Z", "(4,6)")), el("Z*Z", "(2,3)"));
  EXPECT_FALSE(divide_by(2, el("Z*Z", "(1,0)")).has_value());
  EXPECT_FALSE(divide_by(3, el("Q*Z", "(1,2)")).has_value());
  EXPECT_EQ(*divide_by(3, el("Q*Z", "(1,3)")), el("Q*Z", "(1/3,1)"));
}

TEST(ConvexSubgroups, Examples) {
  EXPECT_EQ(convex_subgroups(shape("Z")), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(convex_subgroups(shape("Z*Z")), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(convex_subgroups(shape("Q*Z")), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ConvexSubgroups, ClosedUnderBetweenOnSamples) {
  std::mt19937_64 rng(3);
  for (const char* s : {"Q*Z", "Z*Z*Z", "Z*Q"}) {
    const auto sh = shape(s);
    for (auto j : convex_subgroups(sh)) {
      for (int i = 0; i < 400; ++i) {
        auto a = random_element(rng, sh), b = random_element(rng, sh);
        if (!in_convex_subgroup(a, j)) continue;
        if (ref_compare(a, GroupElement::zero(sh)) < 0) a = -a;
        // 0 <= b <= a forces b into the subgroup.
        if (ref_compare(b, GroupElement::zero(sh)) >= 0 && ref_compare(b, a) <= 0) {
          EXPECT_TRUE(in_convex_subgroup(b, j)) << s << " j=" << j << " b=" << b.to_string();
        }
      }
    }
  }
}

TEST(Discrete, Examples) {
  EXPECT_EQ(*is_discrete(shape("Z")), el("Z", "1"));
  EXPECT_FALSE(is_discrete(shape("Q")).has_value());
  EXPECT_EQ(*is_discrete(shape("Z*Z")), el("Z*Z", "(1,0)"));
  EXPECT_THROW(is_discrete(GroupShape()), PreconditionViolation);
}

TEST(Discrete, NothingBetweenZeroAndWitness) {
  std::mt19937_64 rng(9);
  for (const char* s : {"Z*Z", "Z*Q", "Z*Z*Z"}) {
    const auto sh = shape(s);
    const auto w = *is_discrete(sh);
    for (int i = 0; i < 500; ++i) {
      const auto b = random_element(rng, sh);
      EXPECT_FALSE(ref_compare(b, GroupElement::zero(sh)) > 0 && ref_compare(b, w) < 0) << b.to_string();
    }
  }
}

TEST(Regularity, Examples) {
  for (std::uint32_t p : {2u, 3u, 5u}) EXPECT_TRUE(is_p_regular(shape("Z"), p));
  EXPECT_TRUE(is_Z_group(shape("Z")));
  EXPECT_FALSE(is_p_regular(shape("Z*Z"), 2));
  EXPECT_TRUE(is_Z_group(shape("Z*Q")));
  EXPECT_FALSE(is_Z_group(shape("Q*Z")));
  EXPECT_FALSE(is_Z_group(shape("Q")));
}

TEST(Regularity, QuotientOfZZIsNotTwoDivisible) {
  // Z*Z modulo its first factor is Z; (0,1) has no half there.
  EXPECT_FALSE(divide_by(2, el("Z", "1")).has_value());
}

TEST(RegularQuotient, Examples) {
  for (const char* s : {"Z*Z*Z", "Q", "Z", "Z*Z", "Q*Z", "Z*Q"}) EXPECT_TRUE(has_regular_quotient(shape(s))) << s;
}

TEST(Purity, Examples) {
  const auto z3 = shape("Z*Z*Z");
  EXPECT_TRUE(is_pure_sublattice({el("Z*Z*Z", "(0,1,0)"), el("Z*Z*Z", "(1,0,1)")}, z3, 6));
  EXPECT_FALSE(is_pure_sublattice({el("Z*Z", "(2,0)")}, shape("Z*Z"), 2));
  EXPECT_TRUE(is_pure_sublattice({el("Z*Z", "(1,0)")}, shape("Z*Z"), 6));
  EXPECT_TRUE(is_pure_sublattice({}, z3, 6));
}

TEST(Purity, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> d(-3, 3);
  const auto z3 = shape("Z*Z*Z");
  int tested = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::vector<int>> gens(2, std::vector<int>(3));
    std::vector<GroupElement> ge;
    for (auto& g : gens) {
      for (auto& c : g) c = d(rng);
      ge.emplace_back(z3, std::vector<Rational>{g[0], g[1], g[2]});
    }
    try {
      const bool got = is_pure_sublattice(ge, z3, 6);
      EXPECT_EQ(got, brute_force_pure(gens, 6));
      ++tested;
    } catch (const PreconditionViolation&) {
      // dependent family
    }
  }
  EXPECT_GT(tested, 150);
}

TEST(ShapeText, ParseAndPrint) {
  EXPECT_EQ(shape(" Q * Z ").to_string(), "Q*Z");
  EXPECT_EQ(el("Q*Z", "( 1/2 , -3 )").to_string(), "(1/2,-3)");
  EXPECT_THROW(shape("Z*R"), ParseError);
  EXPECT_THROW(el("Z*Z", "(1/2,0)"), PreconditionViolation);
}
