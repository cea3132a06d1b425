#include <gtest/gtest.h>

#include "generators.hpp"
#include "qgraph/polynomial.hpp"

using namespace qgraph;

namespace {
Poly P(const char* text) { return parse_poly(text); }
Poly x(int i) { return Poly(Variable::x(i)); }
}  // namespace

TEST(Poly, Arithmetic) {
  EXPECT_EQ(pow(x(1) + x(2), 2), P("x1^2 + 2*x1*x2 + x2^2"));
  const Poly p = P("x1^3 - 2/3*y12 + z13");
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((x(1) + x(2)) * P("x1^2 - x1*x2 + x2^2"), P("x1^3 + x2^3"));
  EXPECT_EQ(pow(p, 0), Poly(1));
}

TEST(Poly, FormatIsGrlexDescending) {
  EXPECT_EQ(format_poly(P("x2 + x1^2 + 1 + x1")), "x1^2 + x1 + x2 + 1");
  EXPECT_EQ(format_poly(P("-x1*x2 + 1/2*y11")), "-x1*x2 + 1/2*y11");
  EXPECT_EQ(format_poly(Poly()), "0");
  EXPECT_EQ(P("y1_2"), P("y12"));
  EXPECT_EQ(P("z2_1"), P("z12"));
}

TEST(Poly, ParseErrors) {
  EXPECT_THROW(P("x1 +"), ParseError);
  EXPECT_THROW(P("x1 x2"), ParseError);
  EXPECT_THROW(P("z11"), ParseError);
  EXPECT_THROW(P("(x1"), ParseError);
  EXPECT_THROW(P("1/0"), ParseError);
}

TEST(Poly, Substitute) {
  Assignment third{{Variable::x(1), Poly(Rational(1, 3))}, {Variable::x(2), Poly(Rational(1, 3))}};
  EXPECT_EQ(substitute(P("x1*x2"), third), Poly(Rational(1, 9)));
  const Poly s = P("x1^2 + y12");
  const Poly with = P("y11*(x2 + 3)") + s;
  EXPECT_EQ(substitute(with, {{Variable::y(1, 1), Poly()}}), s);
  EXPECT_EQ(substitute(P("2*x1*x2"), {{Variable::x(1), Poly(1)}, {Variable::x(2), Poly(1)}}), Poly(2));
}

TEST(Poly, RingLawsAndSubstitutionHomomorphism) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const Poly a = gen::x_poly(rng, 6, 3), b = gen::x_poly(rng, 6, 3), c = gen::x_poly(rng, 6, 3);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(parse_poly(format_poly(a)), a);
    Assignment s{{Variable::x(1), gen::x_poly(rng, 3, 2, 2)}, {Variable::x(4), Poly(gen::small_rational(rng))}};
    EXPECT_EQ(substitute(a * b, s), substitute(a, s) * substitute(b, s));
  }
}

TEST(Poly, Polya) {
  auto r0 = polya_test(P("x1^2 + x1*x2"), 5);
  EXPECT_TRUE(r0.success);
  EXPECT_EQ(r0.n, 0u);
  auto r1 = polya_test(P("x1^2 - x1*x2 + x2^2"), 5);
  EXPECT_TRUE(r1.success);
  EXPECT_EQ(r1.n, 1u);
  EXPECT_EQ(r1.product, P("x1^3 + x2^3"));
  auto bad = polya_test(P("(x1-x2)^2*x1*x2"), 25);
  EXPECT_FALSE(bad.success);
  ASSERT_EQ(bad.witnesses.size(), 26u);
  EXPECT_EQ(bad.witnesses[0].monomial, Monomial::from_factors({{Variable::x(1), 2}, {Variable::x(2), 2}}));
  EXPECT_EQ(bad.witnesses[0].coefficient, -2);
  EXPECT_THROW(polya_test(P("x1^2 + x2"), 3), std::invalid_argument);
  EXPECT_THROW(polya_test(P("y12"), 3), std::invalid_argument);
}

TEST(Poly, PolyaMonotone) {
  std::mt19937 rng(32);
  int successes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // Positive forms on the simplex: random nonnegative data minus a small multiple.
    Poly p;
    for (int i = 1; i <= 3; ++i)
      for (int j = i; j <= 3; ++j) p += x(i) * x(j) * Rational(static_cast<long>(rng() % 5) + 1);
    p -= x(1) * x(2) * Rational(static_cast<long>(rng() % 12));
    const auto r = polya_test(p, 12);
    if (!r.success) continue;
    ++successes;
    const auto next = polya_test(r.product * (x(1) + x(2) + x(3)), 0);
    EXPECT_TRUE(next.success);
  }
  EXPECT_GT(successes, 10);
}

TEST(Poly, OrthantZero) {
  EXPECT_TRUE(orthant_zero_check(P("(x1-x2)^2*x1*x2"), {1, 1}));
  EXPECT_FALSE(orthant_zero_check(P("x1*x2"), {1, 1}));
  EXPECT_TRUE(orthant_zero_check(P("(2*x1-x2)^2"), {1, 2}));
  EXPECT_THROW(orthant_zero_check(P("x1*x2"), {1, 0}), std::invalid_argument);
  EXPECT_THROW(orthant_zero_check(P("x1*x2"), {1}), std::invalid_argument);
}
