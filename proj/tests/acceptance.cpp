// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracles.hpp"
#include "qgraph/certificates.hpp"
#include "qgraph/density.hpp"

using namespace qgraph;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
  }
  Outcome outcome(const std::string& summary) const {
    if (first_failure_.empty()) return {true, summary + " [" + std::to_string(checks_) + " checks]"};
    return {false, "first failure: " + first_failure_};
  }

 private:
  int checks_ = 0;
  std::string first_failure_;
};

QuantumGraph term(const char* graph, Mode mode, const Rational& c = 1) {
  return QuantumGraph::basis(parse_graph(graph), mode, c);
}

QuantumGraph unit(Mode mode, const Rational& c = 1) { return QuantumGraph::basis(LabeledMultigraph(0, 0), mode, c); }

QuantumGraph goodman_a() { return term("MG 3 0 : 1-2,1-3", Mode::kSimple) - term("MG 4 0 : 1-2,3-4", Mode::kSimple); }

QuantumGraph robinson() {
  return term("MG 2 0 : 1-2*6", Mode::kMulti) + term("MG 3 0 : 1-2*2,1-3*2,2-3*2", Mode::kMulti) -
         term("MG 3 0 : 1-2*4,1-3*2", Mode::kMulti, 2);
}

const char* const kRobinsonY =
    "y12^6 + y13^6 + y23^6 - y12^4*y13^2 - y12^2*y13^4 - y12^4*y23^2 - y12^2*y23^4 - y13^4*y23^2 - y13^2*y23^4"
    " + 3*y12^2*y13^2*y23^2";

// ---------------------------------------------------------------------------

Outcome exact_densities() {
  Checker c;
  const auto k2 = oracle::complete(2), k3 = oracle::complete(3);
  const auto g2 = complete_graph(2), g3 = complete_graph(3);
  c.expect(t_density(g2, g3) == Rational(2, 3), "t(K2,K3) = 2/3");
  c.expect(t_density(g3, g3) == Rational(2, 9), "t(K3,K3) = 2/9");
  c.expect(t_inj_density(g2, g3) == 1, "t_inj(K2,K3) = 1");
  c.expect(oracle::t(k2, k3) == Rational(2, 3), "oracle t(K2,K3)");
  c.expect(oracle::t(k3, k3) == Rational(2, 9), "oracle t(K3,K3)");
  c.expect(oracle::t_inj(k2, k3) == 1, "oracle t_inj(K2,K3)");
  return c.outcome("t(K2,K3)=2/3, t(K3,K3)=2/9, t_inj(K2,K3)=1, equal to the brute-force oracle");
}

Outcome goodman_square() {
  Checker c;
  SosCert cert;
  cert.k = 1;
  cert.mode = Mode::kSimple;
  cert.summands.push_back({1, term("MG 2 1 : 1-2", Mode::kSimple) - term("MG 3 1 : 2-3", Mode::kSimple)});
  const auto r = verify_sos(cert, goodman_a(), PerturbSpec::none());
  c.expect(r.accepted, "verify_sos accepts (u - v)^2");
  c.expect(r.difference.is_zero(), "difference is zero");
  c.expect(iso_normal_form(expand(cert)) == iso_normal_form(goodman_a()), "normal forms equal");
  return c.outcome("(u - v)^2 equals cherry - 2 K2+K2 up to labels and isolated vertices");
}

bool balanced_complete_multipartite(const oracle::Matrix& a) {
  const std::size_t n = a.size();
  std::vector<int> part(n, -1);
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    if (part[v] >= 0) continue;
    part[v] = static_cast<int>(sizes.size());
    std::size_t size = 1;
    for (std::size_t w = v + 1; w < n; ++w) {
      if (a[v][w] == 0) {
        if (part[w] >= 0) return false;
        part[w] = part[v];
        ++size;
      }
    }
    sizes.push_back(size);
  }
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = v + 1; w < n; ++w)
      if ((part[v] == part[w]) != (a[v][w] == 0)) return false;
  for (auto s : sizes)
    if (s != sizes.front()) return false;
  return true;
}

Outcome goodman_theorem() {
  Checker c;
  QuantumGraph q(0, Mode::kSimple);
  q.add_term(complete_graph(3), 1);
  q.add_term(matching_graph(2), -2);
  q.add_term(edge_graph(), 1);
  int graphs = 0;
  std::string extremals;
  for (int n = 1; n <= 5; ++n) {
    for (const auto& a : oracle::simple_graphs_up_to_iso(n)) {
      ++graphs;
      const auto g = oracle::to_graph(a, 0);
      const Rational value = t_quantum(q, g);
      const Rational brute = oracle::t(oracle::complete(3), a) - 2 * oracle::t(oracle::from_pairs(4, {{1, 2}, {3, 4}}), a) +
                             oracle::t(oracle::complete(2), a);
      c.expect(value == brute, "library value equals brute force for " + format_graph(g));
      c.expect(value >= 0, "nonnegative on " + format_graph(g));
      c.expect((value == 0) == balanced_complete_multipartite(a), "equality set on " + format_graph(g));
      if (value == 0) extremals += (extremals.empty() ? "" : "; ") + format_graph(g);
    }
  }
  return c.outcome(std::to_string(graphs) + " graphs, zero exactly at balanced complete multipartite graphs: " +
                   extremals);
}

Outcome polya_obstruction() {
  Checker c;
  const auto r = param_density(goodman_a(), edge_graph());
  const Poly expected = parse_poly("(x1-x2)^2*x1*x2");
  c.expect(r.denom_power == 4 && r.numerator == expected, "(x1+x2)^4 t(a,K2) = (x1-x2)^2 x1 x2");
  const auto p = polya_test(r.numerator, 25);
  c.expect(!p.success, "polya_test fails");
  c.expect(p.witnesses.size() == 26, "one witness per N = 0..25");
  for (std::size_t n = 0; n < p.witnesses.size(); ++n) {
    const auto& w = p.witnesses[n];
    c.expect(w.n == n && w.coefficient < 0, "negative witness at N=" + std::to_string(n));
    const Poly product = pow(weight_sum(2), static_cast<unsigned>(n)) * r.numerator;
    c.expect(product.coefficient(w.monomial) == w.coefficient, "witness coefficient at N=" + std::to_string(n));
  }
  c.expect(orthant_zero_check(r.numerator, {1, 1}), "zero at (1,1)");
  return c.outcome("numerator (x1-x2)^2*x1*x2, 26 negative witnesses, zero at (1,1)");
}

Outcome robinson_pipeline() {
  Checker c;
  const Rational lambda(2, 27);
  const Poly r_y = parse_poly(kRobinsonY);
  const Poly got = specialize_uniform(param_density_n(robinson(), 3), 3, true);
  c.expect(got == r_y * lambda, "uniform zero-diagonal density is (2/27) R");
  const Poly r_z = parse_poly(
      "z12^6 + z13^6 + z23^6 - z12^4*z13^2 - z12^2*z13^4 - z12^4*z23^2 - z12^2*z23^4 - z13^4*z23^2 - z13^2*z23^4"
      " + 3*z12^2*z13^2*z23^2");
  const auto sos = is_sos_poly(r_z);
  c.expect(sos.status == SearchStatus::kInfeasible, "R is not SOS (" + sos.diagnostics + ")");
  c.expect(sos.margin > 1e-6, "dual margin above 1e-6");
  std::ostringstream detail;
  detail << "lambda = 2/27, not SOS with margin " << sos.margin;
  return c.outcome(detail.str());
}

Outcome simple_search_soundness() {
  Checker c;
  const Rational pinned_m4(-1, 3);
  const std::vector<oracle::Term> terms = {{1, oracle::from_pairs(3, {{1, 2}, {1, 3}})},
                                           {-1, oracle::from_pairs(4, {{1, 2}, {3, 4}})}};
  const Rational m4 = oracle::symmetrized_minimum(terms, 4);
  c.expect(m4 == pinned_m4, "oracle minimum equals the pinned -1/3");
  const auto a = goodman_a();
  for (const Rational& eps : {Rational(0), Rational(997, 3000), Rational(333, 1000)}) {
    const auto r = sos_search_simple(a, 4, eps);
    c.expect(r.status == SearchStatus::kInfeasible, "infeasible at eps " + format_rational(eps));
    c.expect(r.min_value == m4 + eps, "reported minimum at eps " + format_rational(eps));
  }
  for (const Rational& eps : {Rational(1, 3), Rational(1001, 3000), Rational(1, 2)}) {
    const auto r = sos_search_simple(a, 4, eps);
    c.expect(r.status == SearchStatus::kCertificate, "certificate at eps " + format_rational(eps));
    c.expect(verify_sos(r.cert, a, PerturbSpec::plain_eps(eps)).accepted, "verified at eps " + format_rational(eps));
  }
  return c.outcome("m4 = -1/3; infeasible below 1/3, verified certificates from 1/3 up");
}

Outcome gate_discipline() {
  Checker c;
  int emitted = 0;
  auto simple = [&](const QuantumGraph& target, int k, const Rational& eps) {
    const auto r = sos_search_simple(target, k, eps);
    if (r.status != SearchStatus::kCertificate) return;
    ++emitted;
    const auto perturb = eps > 0 ? PerturbSpec::plain_eps(eps) : PerturbSpec::none();
    c.expect(verify_sos(r.cert, target, perturb).accepted, "simple search k=" + std::to_string(k));
  };
  auto multi = [&](const QuantumGraph& target, int k, int degree, const PerturbSpec& perturb) {
    const auto r = sos_search_multi(target, k, degree, perturb);
    if (r.status != SearchStatus::kCertificate) return;
    ++emitted;
    c.expect(verify_sos(r.cert, target, perturb).accepted, "multi search " + describe(target));
  };
  auto preorder = [&](const QuantumGraph& target, int k, int degree, const Rational& d, const PerturbSpec& perturb) {
    const auto r = preorder_search(target, k, degree, d, perturb);
    if (r.status != SearchStatus::kCertificate) return;
    ++emitted;
    c.expect(verify_preorder(r.preorder, target, perturb).accepted, "preorder search " + describe(target));
  };

  const auto a = goodman_a();
  for (int k = 4; k <= 5; ++k) {
    for (const Rational& eps : {Rational(0), Rational(1, 3), Rational(1)}) simple(a, k, eps);
  }
  simple(QuantumGraph(0, Mode::kSimple), 2, Rational(1, 5));
  simple(-unit(Mode::kSimple), 2, Rational(1, 2));
  std::mt19937 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    QuantumGraph target(0, Mode::kSimple);
    for (int t = 0; t < 3; ++t) target.add_term(gen::graph(rng, 0, 3, Mode::kSimple), gen::small_rational(rng));
    simple(target, 3, Rational(static_cast<long>(rng() % 4)));
  }

  multi(term("MG 2 0 : 1-2*2", Mode::kMulti), 2, 1, PerturbSpec::none());
  multi(-unit(Mode::kMulti), 2, 1, PerturbSpec::none());
  multi(robinson(), 3, 3, PerturbSpec::slow(Rational(1, 10), 3));
  multi(robinson(), 3, 3, PerturbSpec::plain_eps(Rational(1, 10)));
  for (int trial = 0; trial < 10; ++trial) {
    SosCert cert;
    cert.k = 2;
    cert.mode = Mode::kMulti;
    QuantumGraph root(2, Mode::kMulti);
    root.add_term(identity_graph(2), gen::small_rational(rng));
    root.add_term(parse_graph("MG 2 2 : 1-2"), gen::small_rational(rng));
    cert.summands.push_back({1, root});
    multi(iso_normal_form(expand(cert)), 2, 1, PerturbSpec::none());
  }

  preorder(unit(Mode::kMulti, 2) - term("MG 2 0 : 1-2", Mode::kMulti), 2, 1, 2, PerturbSpec::none());
  preorder(QuantumGraph(0, Mode::kMulti), 2, 1, 1, PerturbSpec::plain_eps(1));
  preorder(unit(Mode::kMulti) - term("MG 2 0 : 1-2*2", Mode::kMulti), 2, 1, 1, PerturbSpec::none());
  preorder(robinson(), 3, 3, 1, PerturbSpec::plain_eps(Rational(1, 10)));
  c.expect(emitted > 0, "at least one certificate emitted");
  return c.outcome(std::to_string(emitted) + " emitted certificates, all exactly verified");
}

Outcome preorder_verification() {
  Checker c;
  const auto target = unit(Mode::kMulti) - term("MG 2 0 : 1-2*2", Mode::kMulti);
  PreorderCert cert;
  cert.k = 2;
  cert.d = 1;
  cert.blocks.push_back({{{1, 2, true}, {1, 2, false}}, {Monomial()}, RationalMatrix::from_rows({{1}})});
  c.expect(verify_preorder(cert, target, PerturbSpec::none()).accepted, "d^2 - z12^2 accepted");

  // A second certificate with a 2x2 block so every entry position gets corrupted.
  PreorderCert square;
  square.k = 2;
  square.d = 1;
  square.blocks.push_back(
      {{}, {Monomial(), Monomial(Variable::z(1, 2))}, RationalMatrix::from_rows({{1, 1}, {1, 1}})});
  const auto square_target = unit(Mode::kMulti) + term("MG 2 0 : 1-2", Mode::kMulti, 2) + term("MG 2 0 : 1-2*2", Mode::kMulti);
  c.expect(verify_preorder(square, square_target, PerturbSpec::none()).accepted, "(1 + z12)^2 accepted");

  int rejected = 0;
  auto corrupt = [&](PreorderCert bad, const QuantumGraph& t, std::size_t i, std::size_t j, const Rational& value) {
    auto& g = bad.blocks[0].gram;
    g(i, j) = value;
    g(j, i) = value;
    try {
      verify_preorder(bad, t, PerturbSpec::none());
      c.expect(false, "corrupted entry (" + std::to_string(i) + "," + std::to_string(j) + ") rejected");
    } catch (const NonPsdGramError& e) {
      ++rejected;
      c.expect(quadratic_form(g, e.witness()) == e.value() && e.value() < 0, "exact witness");
    }
  };
  corrupt(cert, target, 0, 0, -1);
  corrupt(square, square_target, 0, 0, -1);
  corrupt(square, square_target, 1, 1, Rational(-1, 2));
  corrupt(square, square_target, 0, 1, 2);
  return c.outcome(std::to_string(rejected) + " corrupted Gram entries rejected with exact witnesses");
}

Outcome algebra_properties() {
  Checker c;
  int cases = 0;
  std::mt19937 rng(81);

  // Reynolds: idempotent and fixed by every permutation, exhaustive over S_k.
  for (int k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 25; ++trial, ++cases) {
      const auto r = reynolds(gen::quantum(rng, k, trial % 2 ? Mode::kSimple : Mode::kMulti, 3, 1));
      c.expect(reynolds(r) == r, "reynolds idempotent");
      std::vector<int> sigma(k);
      std::iota(sigma.begin(), sigma.end(), 1);
      do {
        QuantumGraph moved(k, r.mode());
        for (const auto& [g, coeff] : r.terms()) moved.add_term(permute_labels(g, sigma), coeff);
        c.expect(moved == r, "reynolds image invariant");
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  }

  // Glue monoid laws.
  for (int trial = 0; trial < 200; ++trial, ++cases) {
    const int k = static_cast<int>(rng() % 3);
    const Mode mode = trial % 2 ? Mode::kSimple : Mode::kMulti;
    const auto f = gen::graph(rng, k, 3, Mode::kMulti), g = gen::graph(rng, k, 3, Mode::kMulti),
               h = gen::graph(rng, k, 3, Mode::kMulti);
    c.expect(glue(identity_graph(k), f, mode) == glue(f, identity_graph(k), mode), "identity");
    c.expect(glue(f, g, mode) == glue(g, f, mode), "commutativity");
    c.expect(glue(glue(f, g, mode), h, mode) == glue(f, glue(g, h, mode), mode), "associativity");
  }

  // z-polynomial bridge: round trip and multiplicativity.
  for (int trial = 0; trial < 150; ++trial, ++cases) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const Poly p = gen::z_poly(rng, k, 3), q = gen::z_poly(rng, k, 3);
    c.expect(to_z_poly(from_z_poly(p, k, Mode::kMulti)) == p, "round trip");
    for (Mode mode : {Mode::kSimple, Mode::kMulti}) {
      c.expect(from_z_poly(p * q, k, mode) == from_z_poly(p, k, mode) * from_z_poly(q, k, mode), "multiplicative");
    }
  }

  // Relative parametrized density: multiplicativity and the decomposition over psi.
  for (int trial = 0; trial < 100; ++trial, ++cases) {
    const int k = 1 + static_cast<int>(rng() % 2);
    const auto f1 = gen::graph(rng, k, 2, Mode::kSimple), f2 = gen::graph(rng, k, 2, Mode::kSimple);
    auto g = gen::graph(rng, 0, 3, Mode::kSimple);
    if (g.num_vertices() == 0) g = complete_graph(1);
    const int n = g.num_vertices();
    std::vector<int> psi(k);
    for (auto& v : psi) v = 1 + static_cast<int>(rng() % n);
    const auto a = param_density_rel(f1, g, psi), b = param_density_rel(f2, g, psi);
    const auto ab = param_density_rel(glue(f1, f2, Mode::kSimple), g, psi);
    c.expect(ab.numerator == a.numerator * b.numerator && ab.denom_power == a.denom_power + b.denom_power,
             "relative density multiplicative");
    Poly sum;
    std::vector<int> all(k, 1);
    while (true) {
      Poly term_poly = param_density_rel(f1, g, all).numerator;
      for (int i : all) term_poly = term_poly * Poly(Variable::x(i));
      sum += term_poly;
      int i = 0;
      while (i < k && ++all[i] > n) all[i++] = 1;
      if (i == k) break;
    }
    c.expect(param_density(unlabel(f1), g).numerator == sum, "decomposition over psi");
  }
  c.expect(cases >= 500, "at least 500 random cases");
  return c.outcome(std::to_string(cases) + " random cases");
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact densities", 1, exact_densities},
      {2, "Goodman square", 1, goodman_square},
      {3, "Goodman inequality on graphs with at most 5 vertices", 120, goodman_theorem},
      {4, "Polya obstruction", 10, polya_obstruction},
      {5, "Robinson pipeline", 120, robinson_pipeline},
      {6, "simple-mode search soundness at k=4", 60, simple_search_soundness},
      {7, "certificate gate discipline", 600, gate_discipline},
      {8, "preorder verification", 1, preorder_verification},
      {9, "algebra property suite", 600, algebra_properties},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.limit_seconds) {
      outcome.pass = false;
      outcome.detail += " (over the " + std::to_string(static_cast<int>(criterion.limit_seconds)) + " s limit)";
    }
    failures += !outcome.pass;
    std::printf("%s %d %s (%.3f s): %s\n", outcome.pass ? "PASS" : "FAIL", criterion.number, criterion.name, seconds,
                outcome.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
