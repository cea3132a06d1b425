#include <benchmark/benchmark.h>

#include <random>

#include "qgraph/certificates.hpp"
#include "qgraph/density.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/sdp.hpp"

using namespace qgraph;

namespace {

LabeledMultigraph random_graph(std::mt19937& rng, int n, int k, std::uint32_t max_mult) {
  std::vector<std::uint32_t> enc(static_cast<std::size_t>(n * (n - 1) / 2));
  for (auto& m : enc) m = rng() % 2 ? 1 + rng() % max_mult : 0;
  return LabeledMultigraph::from_encoding(n, k, std::move(enc));
}

QuantumGraph robinson() {
  QuantumGraph a(0, Mode::kMulti);
  a.add_term(parse_graph("MG 2 0 : 1-2*6"), 1);
  a.add_term(parse_graph("MG 3 0 : 1-2*2,1-3*2,2-3*2"), 1);
  a.add_term(parse_graph("MG 3 0 : 1-2*4,1-3*2"), -2);
  return a;
}

}  // namespace

// Fresh graphs each iteration, so the memo cache does not answer.
void BM_CanonicalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  for (auto _ : state) {
    state.PauseTiming();
    const auto g = random_graph(rng, n, 0, 3);
    state.ResumeTiming();
    benchmark::DoNotOptimize(canonical_form(g));
  }
}
BENCHMARK(BM_CanonicalForm)->DenseRange(4, 9);

void BM_HomCount(benchmark::State& state) {
  const int nf = static_cast<int>(state.range(0));
  std::mt19937 rng(2);
  const auto f = random_graph(rng, nf, 0, 2);
  const auto g = random_graph(rng, 8, 0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(hom_count(f, g));
}
BENCHMARK(BM_HomCount)->DenseRange(2, 7);

void BM_ParamDensityN(benchmark::State& state) {
  const auto a = robinson();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(param_density_n(a, n));
}
BENCHMARK(BM_ParamDensityN)->DenseRange(2, 4);

void BM_SdpRandomFeasible(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(3);
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, n);
  Eigen::MatrixXd x = b * b.transpose() + Eigen::MatrixXd::Identity(n, n);
  SdpProblem p{{n}, {}};
  for (int c = 0; c < 2 * n; ++c) {
    SdpConstraint con;
    for (int e = 0; e < 3; ++e) {
      int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
      if (i > j) std::swap(i, j);
      con.entries.push_back({0, i, j, Rational(static_cast<long>(rng() % 7) - 3)});
    }
    double rhs = 0;
    for (const auto& e : con.entries) rhs += e.value.get_d() * x(e.row, e.col) * (e.row == e.col ? 1 : 2);
    con.rhs = approximate_rational(rhs, 1000000);
    p.constraints.push_back(con);
  }
  for (auto _ : state) benchmark::DoNotOptimize(sdp_solve(p));
}
BENCHMARK(BM_SdpRandomFeasible)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);

void BM_SimpleSearchGoodman(benchmark::State& state) {
  QuantumGraph a(0, Mode::kSimple);
  a.add_term(cherry_graph(), 1);
  a.add_term(matching_graph(2), -1);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sos_search_simple(a, k, Rational(1, 3)));
}
BENCHMARK(BM_SimpleSearchGoodman)->DenseRange(4, 5)->Unit(benchmark::kMillisecond);

void BM_PreorderRobinson(benchmark::State& state) {
  const auto a = robinson();
  for (auto _ : state) {
    benchmark::DoNotOptimize(preorder_search(a, 3, 3, 1, PerturbSpec::plain_eps(Rational(1, 10))));
  }
}
BENCHMARK(BM_PreorderRobinson)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
