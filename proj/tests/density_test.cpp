#include <gtest/gtest.h>

#include "generators.hpp"
#include "qgraph/density.hpp"

using namespace qgraph;

namespace {
LabeledMultigraph mg(const char* text) { return parse_graph(text); }
Poly P(const char* text) { return parse_poly(text); }

LabeledMultigraph disjoint(const LabeledMultigraph& a, const LabeledMultigraph& b) { return glue(a, b, Mode::kMulti); }
}  // namespace

TEST(Density, Counts) {
  const auto k1 = complete_graph(1), k2 = complete_graph(2), k3 = complete_graph(3);
  EXPECT_EQ(hom_count(k2, k3), 6);
  EXPECT_EQ(hom_count(k1, k3), 3);
  EXPECT_EQ(hom_count(k2, multi_edge_graph(2)), 4);
  EXPECT_EQ(hom_count(LabeledMultigraph(0, 0), k3), 1);
  EXPECT_EQ(t_density(k2, k3), Rational(2, 3));
  EXPECT_EQ(t_density(k3, k3), Rational(2, 9));
  EXPECT_EQ(t_inj_density(k2, k3), 1);
  EXPECT_EQ(t_density(k1, mg("MG 4 0 : 1-2")), 1);
  EXPECT_THROW(t_density(k2, LabeledMultigraph(0, 0)), std::invalid_argument);
  EXPECT_THROW(t_inj_density(k3, k2), std::invalid_argument);
  EXPECT_THROW(hom_count(mg("MG 2 1 : 1-2"), k3), std::invalid_argument);
}

TEST(Density, MatchesBruteForce) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const auto fa = oracle::random_matrix(rng, 1 + static_cast<int>(rng() % 5), 2, 0.5);
    const auto ga = oracle::random_matrix(rng, 1 + static_cast<int>(rng() % 5), 3, 0.6);
    const auto f = oracle::to_graph(fa, 0), g = oracle::to_graph(ga, 0);
    EXPECT_EQ(hom_count(f, g), oracle::hom(fa, ga));
    EXPECT_EQ(inj_count(f, g), oracle::hom(fa, ga, true));
    EXPECT_EQ(t_density(f, g), oracle::t(fa, ga));
  }
}

TEST(Density, Quantum) {
  QuantumGraph c(0, Mode::kSimple);
  c.add_term(complete_graph(3), 1);
  c.add_term(matching_graph(2), -2);
  c.add_term(edge_graph(), 1);
  EXPECT_EQ(t_quantum(c, complete_graph(3)), 0);
  EXPECT_EQ(t_quantum(QuantumGraph(0, Mode::kSimple), complete_graph(3)), 0);
  QuantumGraph a(0, Mode::kSimple);
  a.add_term(cherry_graph(), 1);
  a.add_term(matching_graph(2), -1);
  EXPECT_EQ(t_quantum(a, edge_graph()), 0);
  for (int n = 1; n <= 5; ++n) {
    for (const auto& g : oracle::simple_graphs_up_to_iso(n)) EXPECT_GE(t_quantum(a, oracle::to_graph(g, 0)), 0);
  }
}

TEST(Density, Multiplicative) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto f1 = gen::graph(rng, 0, 3, Mode::kMulti), f2 = gen::graph(rng, 0, 3, Mode::kMulti);
    auto g = gen::graph(rng, 0, 4, Mode::kMulti);
    if (g.num_vertices() == 0) g = complete_graph(2);
    EXPECT_EQ(t_density(disjoint(f1, f2), g), t_density(f1, g) * t_density(f2, g));
    EXPECT_EQ(t_density(disjoint(f1, complete_graph(1)), g), t_density(f1, g));
  }
}

TEST(Density, DBounded) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = gen::graph(rng, 0, 5, Mode::kMulti);
    if (g.num_vertices() == 0) continue;
    const Rational d = g.max_multiplicity();
    Rational dj = 1;
    for (unsigned j = 0; j <= 8; ++j, dj *= d) EXPECT_LE(abs(t_density(multi_edge_graph(j), g)), dj);
  }
}

TEST(Density, ParamExamples) {
  QuantumGraph a(0, Mode::kSimple);
  a.add_term(cherry_graph(), 1);
  a.add_term(matching_graph(2), -1);
  const auto r = param_density(a, edge_graph());
  EXPECT_EQ(r.denom_power, 4u);
  EXPECT_EQ(r.numerator, P("(x1-x2)^2*x1*x2"));
  const auto k1 = param_density(complete_graph(1), complete_graph(3));
  EXPECT_EQ(k1.numerator, weight_sum(3));
  EXPECT_EQ(k1.denom_power, 1u);
  const auto k2 = param_density(edge_graph(), edge_graph());
  EXPECT_EQ(k2.numerator, P("2*x1*x2"));
  EXPECT_EQ(k2.denom_power, 2u);
  const int psi[] = {1, 2};
  const auto e = param_density_rel(identity_graph(2), complete_graph(3), psi);
  EXPECT_EQ(e.numerator, Poly(1));
  EXPECT_EQ(e.denom_power, 0u);
}

TEST(Density, ParamN) {
  const auto r = param_density_n(edge_graph(), 2);
  EXPECT_EQ(r.numerator, P("x1^2*y11 + 2*x1*x2*y12 + x2^2*y22"));
  EXPECT_EQ(r.denom_power, 2u);
  EXPECT_EQ(specialize_uniform(r, 2, false), P("1/4*y11 + 1/2*y12 + 1/4*y22"));
  EXPECT_EQ(specialize_uniform(r, 2, true), P("1/2*y12"));
  EXPECT_EQ(specialize_uniform(param_density_n(LabeledMultigraph(0, 0), 3), 3, false), Poly(1));
  const int psi[] = {1, 2};
  for (int n = 2; n <= 4; ++n) {
    const auto rel = param_density_n_rel(mg("MG 2 2 : 1-2*3"), n, psi);
    EXPECT_EQ(rel.numerator, P("y12^3"));
  }
  EXPECT_THROW(specialize_uniform(r, 3, false), std::invalid_argument);
}

TEST(Density, RobinsonUniform) {
  QuantumGraph a(0, Mode::kMulti);
  a.add_term(multi_edge_graph(6), 1);
  a.add_term(mg("MG 3 0 : 1-2*2,1-3*2,2-3*2"), 1);
  a.add_term(mg("MG 3 0 : 1-2*4,1-3*2"), -2);
  const Poly r = P("y12^6 + y13^6 + y23^6 - y12^4*y13^2 - y12^2*y13^4 - y12^4*y23^2 - y12^2*y23^4"
                   " - y13^4*y23^2 - y13^2*y23^4 + 3*y12^2*y13^2*y23^2");
  EXPECT_EQ(specialize_uniform(param_density_n(a, 3), 3, true), r * Rational(2, 27));
}

TEST(Density, ParamAtOnesIsDensity) {
  std::mt19937 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = gen::graph(rng, 0, 4, Mode::kSimple);
    auto g = gen::graph(rng, 0, 5, Mode::kSimple);
    if (g.num_vertices() == 0) g = complete_graph(1);
    EXPECT_EQ(evaluate_at_ones(param_density(f, g)), t_density(f, g));
  }
}

TEST(Density, ParamNReproducesHomCount) {
  std::mt19937 rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const auto fa = oracle::random_matrix(rng, 1 + static_cast<int>(rng() % 4), 2, 0.6);
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto ga = oracle::random_matrix(rng, n, 3, 0.7);
    std::map<Variable, Rational> point;
    for (int i = 1; i <= n; ++i) {
      point[Variable::x(i)] = 1;
      for (int j = i; j <= n; ++j) point[Variable::y(i, j)] = ga[i - 1][j - 1];
    }
    const auto r = param_density_n(oracle::to_graph(fa, 0), n);
    EXPECT_EQ(evaluate(r.numerator, point), Rational(oracle::hom(fa, ga)));
  }
}

TEST(Density, RelativeMultiplicativeAndDecomposition) {
  std::mt19937 rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 2);
    const auto f1 = gen::graph(rng, k, 2, Mode::kSimple), f2 = gen::graph(rng, k, 2, Mode::kSimple);
    auto g = gen::graph(rng, 0, 3, Mode::kSimple);
    if (g.num_vertices() == 0) g = complete_graph(1);
    const int n = g.num_vertices();
    std::vector<int> psi(k);
    for (auto& p : psi) p = 1 + static_cast<int>(rng() % n);
    const auto a = param_density_rel(f1, g, psi), b = param_density_rel(f2, g, psi);
    const auto ab = param_density_rel(glue(f1, f2, Mode::kSimple), g, psi);
    EXPECT_EQ(ab.numerator, a.numerator * b.numerator);
    EXPECT_EQ(ab.denom_power, a.denom_power + b.denom_power);

    Poly sum;
    std::vector<int> all(k, 1);
    while (true) {
      Poly xs = param_density_rel(f1, g, all).numerator;
      for (int i : all) xs = xs * Poly(Variable::x(i));
      sum += xs;
      int i = 0;
      while (i < k && ++all[i] > n) all[i++] = 1;
      if (i == k) break;
    }
    EXPECT_EQ(param_density(unlabel(f1), g).numerator, sum);
  }
}
