#include <gtest/gtest.h>

#include "generators.hpp"
#include "qgraph/certificates.hpp"

using namespace qgraph;

namespace {

QuantumGraph term(const char* graph, Mode mode, const Rational& c = 1) {
  return QuantumGraph::basis(parse_graph(graph), mode, c);
}

QuantumGraph unit(Mode mode, const Rational& c = 1) { return QuantumGraph::basis(LabeledMultigraph(0, 0), mode, c); }

QuantumGraph goodman_a() { return term("MG 3 0 : 1-2,1-3", Mode::kSimple) - term("MG 4 0 : 1-2,3-4", Mode::kSimple); }

SosCert goodman_cert() {
  SosCert cert;
  cert.k = 1;
  cert.mode = Mode::kSimple;
  cert.summands.push_back({1, term("MG 2 1 : 1-2", Mode::kSimple) - term("MG 3 1 : 2-3", Mode::kSimple)});
  return cert;
}

QuantumGraph robinson() {
  return term("MG 2 0 : 1-2*6", Mode::kMulti) + term("MG 3 0 : 1-2*2,1-3*2,2-3*2", Mode::kMulti) -
         term("MG 3 0 : 1-2*4,1-3*2", Mode::kMulti, 2);
}

Poly robinson_z() {
  return parse_poly(
      "z12^6 + z13^6 + z23^6 - z12^4*z13^2 - z12^2*z13^4 - z12^4*z23^2 - z12^2*z23^4 - z13^4*z23^2 - z13^2*z23^4"
      " + 3*z12^2*z13^2*z23^2");
}

PreorderCert difference_of_squares(const Rational& gram) {
  PreorderCert cert;
  cert.k = 2;
  cert.d = 1;
  cert.blocks.push_back({{{1, 2, true}, {1, 2, false}}, {Monomial()}, RationalMatrix::from_rows({{gram}})});
  return cert;
}

// Every certificate a search hands out must pass the matching verifier.
void expect_gated(const MultiSearchResult& r, const QuantumGraph& target, const PerturbSpec& perturb, bool preorder) {
  if (r.status != SearchStatus::kCertificate) return;
  const auto v = preorder ? verify_preorder(r.preorder, target, perturb) : verify_sos(r.cert, target, perturb);
  EXPECT_TRUE(v.accepted) << describe(v.difference);
}

}  // namespace

TEST(Perturb, FormatParse) {
  for (const auto& p : {PerturbSpec::none(), PerturbSpec::plain_eps(Rational(1, 3)), PerturbSpec::slow(Rational(1, 10), 3),
                        PerturbSpec::bounded(Rational(1, 2), 2, 4)}) {
    EXPECT_EQ(parse_perturb(format_perturb(p)), p);
  }
  EXPECT_EQ(format_perturb(PerturbSpec::slow(Rational(1, 10), 3)), "slow:1/10:3");
  EXPECT_THROW(parse_perturb("slow:1/10"), ParseError);
  EXPECT_THROW(PerturbSpec::plain_eps(0), std::invalid_argument);
}

TEST(VerifySos, Goodman) {
  EXPECT_TRUE(verify_sos(goodman_cert(), goodman_a(), PerturbSpec::none()).accepted);
  const auto wrong = goodman_a() + term("MG 2 0 : 1-2", Mode::kSimple);
  const auto r = verify_sos(goodman_cert(), wrong, PerturbSpec::none());
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.difference, -term("MG 2 0 : 1-2", Mode::kSimple));
}

TEST(VerifySos, UnitAndEmpty) {
  SosCert cert;
  cert.k = 2;
  cert.summands.push_back({1, QuantumGraph::one(2, Mode::kSimple)});
  EXPECT_TRUE(verify_sos(cert, unit(Mode::kSimple), PerturbSpec::none()).accepted);
  SosCert empty;
  EXPECT_TRUE(verify_sos(empty, QuantumGraph(0, Mode::kSimple), PerturbSpec::none()).accepted);
  SosCert negative = cert;
  negative.summands[0].weight = -1;
  EXPECT_THROW(expand(negative), std::invalid_argument);
}

TEST(VerifySos, PlainEpsEquivalence) {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    SosCert cert;
    cert.k = 2;
    cert.mode = Mode::kMulti;
    cert.summands.push_back({Rational(1 + trial % 3), gen::quantum(rng, 2, Mode::kMulti, 2, 1)});
    const Rational eps(1, 1 + trial);
    const auto target = iso_normal_form(expand(cert)) - unit(Mode::kMulti, eps);
    EXPECT_TRUE(verify_sos(cert, target, PerturbSpec::plain_eps(eps)).accepted);
    EXPECT_TRUE(verify_sos(cert, target + unit(Mode::kMulti, eps), PerturbSpec::none()).accepted);
    EXPECT_FALSE(verify_sos(cert, target, PerturbSpec::none()).accepted);
  }
}

TEST(VerifyPreorder, HandBuilt) {
  const auto target = unit(Mode::kMulti) - term("MG 2 0 : 1-2*2", Mode::kMulti);
  EXPECT_TRUE(verify_preorder(difference_of_squares(1), target, PerturbSpec::none()).accepted);
  EXPECT_TRUE(verify_preorder(PreorderCert{}, QuantumGraph(0, Mode::kMulti), PerturbSpec::none()).accepted);
  try {
    expand(difference_of_squares(-1));
    FAIL();
  } catch (const NonPsdGramError& e) {
    EXPECT_EQ(e.block(), 0u);
    EXPECT_EQ(e.value(), -1);
  }
}

TEST(VerifyPreorder, MembershipSpotCheck) {
  PreorderCert cert;
  cert.k = 3;
  cert.d = 2;
  cert.blocks.push_back({{}, {Monomial(), Monomial(Variable::z(1, 2))}, RationalMatrix::from_rows({{2, 1}, {1, 1}})});
  cert.blocks.push_back({{{1, 3, false}}, {Monomial()}, RationalMatrix::from_rows({{Rational(1, 2)}})});
  cert.blocks.push_back({{{1, 2, true}, {2, 3, false}}, {Monomial()}, RationalMatrix::from_rows({{3}})});
  const Poly sigma = expand(cert);
  std::mt19937 rng(62);
  std::uniform_int_distribution<int> coord(-200, 200);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<Variable, Rational> point;
    for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}}) point[Variable::z(i, j)] = Rational(coord(rng), 100);
    EXPECT_GE(evaluate(sigma, point), 0);
  }
}

TEST(CertificateFile, RoundTrip) {
  const auto text = format_certificate(goodman_cert());
  const auto back = parse_certificate(text);
  ASSERT_TRUE(std::holds_alternative<SosCert>(back));
  EXPECT_EQ(format_certificate(std::get<SosCert>(back)), text);
  const auto po = difference_of_squares(Rational(3, 2));
  const auto po_text = format_certificate(po);
  const auto po_back = parse_certificate(po_text);
  ASSERT_TRUE(std::holds_alternative<PreorderCert>(po_back));
  EXPECT_EQ(format_certificate(std::get<PreorderCert>(po_back)), po_text);
  EXPECT_THROW(parse_certificate("sos k=1 mode=odd perturb=none\n"), ParseError);
  EXPECT_THROW(parse_certificate("preorder k=2 d=1 perturb=none\ngens: d+z12\nbasis: 1\n1 2\n"), ParseError);
}

TEST(SimpleSearch, Trivial) {
  const QuantumGraph zero(0, Mode::kSimple);
  const auto r = sos_search_simple(zero, 2, Rational(1, 5));
  ASSERT_EQ(r.status, SearchStatus::kCertificate);
  EXPECT_EQ(r.min_value, Rational(1, 5));
  EXPECT_TRUE(verify_sos(r.cert, zero, PerturbSpec::plain_eps(Rational(1, 5))).accepted);
  const auto neg = sos_search_simple(-unit(Mode::kSimple), 2, Rational(1, 2));
  EXPECT_EQ(neg.status, SearchStatus::kInfeasible);
  EXPECT_EQ(neg.min_value, Rational(-1, 2));
  EXPECT_THROW(sos_search_simple(zero, 6, 1), SizeLimitError);
  EXPECT_THROW(sos_search_simple(goodman_a(), 3, 1), std::invalid_argument);
}

TEST(SimpleSearch, MatchesBruteForceMinimum) {
  std::mt19937 rng(63);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    QuantumGraph target(0, Mode::kSimple);
    std::vector<oracle::Term> terms;
    for (int t = 0; t < 3; ++t) {
      const auto a = oracle::random_matrix(rng, 1 + static_cast<int>(rng() % k), 1, 0.6);
      const Rational c = gen::small_rational(rng);
      target.add_term(oracle::to_graph(a, 0), c);
      terms.push_back({c, a});
    }
    const Rational m = oracle::symmetrized_minimum(terms, k);
    for (const Rational& eps : std::vector<Rational>{0, Rational(-m), Rational(-m + Rational(1, 7)), Rational(-m - Rational(1, 7))}) {
      if (eps < 0) continue;
      const auto r = sos_search_simple(target, k, eps);
      EXPECT_EQ(r.min_value, m + eps);
      EXPECT_EQ(r.status == SearchStatus::kCertificate, m + eps >= 0);
      if (r.status == SearchStatus::kCertificate) {
        const auto perturb = eps > 0 ? PerturbSpec::plain_eps(eps) : PerturbSpec::none();
        EXPECT_TRUE(verify_sos(r.cert, target, perturb).accepted);
      }
    }
  }
}

TEST(MultiSearch, DoubleEdge) {
  const auto target = term("MG 2 0 : 1-2*2", Mode::kMulti);
  const auto r = sos_search_multi(target, 2, 1, PerturbSpec::none());
  ASSERT_EQ(r.status, SearchStatus::kCertificate);
  ASSERT_EQ(r.cert.summands.size(), 1u);
  EXPECT_EQ(expand(r.cert), term("MG 2 2 : 1-2*2", Mode::kMulti));
  expect_gated(r, target, PerturbSpec::none(), false);
}

TEST(MultiSearch, NegativeTargetNeverCertified) {
  const auto target = -unit(Mode::kMulti);
  for (int degree = 0; degree <= 2; ++degree) {
    const auto r = sos_search_multi(target, 2, degree, PerturbSpec::none());
    EXPECT_NE(r.status, SearchStatus::kCertificate);
  }
}

TEST(MultiSearch, RobinsonSlowGated) {
  const auto perturb = PerturbSpec::slow(Rational(1, 10), 3);
  const auto r = sos_search_multi(robinson(), 3, 3, perturb);
  EXPECT_NE(r.status, SearchStatus::kIndeterminate) << r.diagnostics;
  expect_gated(r, robinson(), perturb, false);
}

TEST(PreorderSearch, Examples) {
  const auto target = unit(Mode::kMulti, 2) - term("MG 2 0 : 1-2", Mode::kMulti);
  const auto r = preorder_search(target, 2, 1, 2, PerturbSpec::none());
  ASSERT_EQ(r.status, SearchStatus::kCertificate) << r.diagnostics;
  expect_gated(r, target, PerturbSpec::none(), true);

  const QuantumGraph zero(0, Mode::kMulti);
  const auto eps = PerturbSpec::plain_eps(1);
  const auto z = preorder_search(zero, 2, 1, 1, eps);
  ASSERT_EQ(z.status, SearchStatus::kCertificate) << z.diagnostics;
  expect_gated(z, zero, eps, true);
}

TEST(PreorderSearch, RobinsonGated) {
  const auto perturb = PerturbSpec::plain_eps(Rational(1, 10));
  const auto r = preorder_search(robinson(), 3, 3, 1, perturb);
  expect_gated(r, robinson(), perturb, true);
  EXPECT_EQ(r.status, SearchStatus::kCertificate) << r.diagnostics;
}

TEST(IsSosPoly, Examples) {
  const auto sq = is_sos_poly(pow(parse_poly("z12 + z13"), 2));
  ASSERT_EQ(sq.status, SearchStatus::kCertificate);
  ASSERT_TRUE(sq.gram.has_value());
  Poly back;
  for (std::size_t i = 0; i < sq.basis.size(); ++i)
    for (std::size_t j = 0; j < sq.basis.size(); ++j) back += Poly(sq.basis[i] * sq.basis[j], (*sq.gram)(i, j));
  EXPECT_EQ(back, pow(parse_poly("z12 + z13"), 2));

  const auto neg = is_sos_poly(Poly(-1));
  EXPECT_EQ(neg.status, SearchStatus::kInfeasible);
  EXPECT_GT(neg.margin, kNotSosMargin);

  const auto rob = is_sos_poly(robinson_z());
  EXPECT_EQ(rob.status, SearchStatus::kInfeasible) << rob.diagnostics;
  EXPECT_GT(rob.margin, kNotSosMargin);

  EXPECT_THROW(is_sos_poly(parse_poly("z12^3")), std::invalid_argument);
}
