#include "qgraph/density.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgraph {

namespace {

// Neighbors of each vertex that precede it, with the multiplicity of the pair.
std::vector<std::vector<std::pair<int, std::uint32_t>>> back_edges(const LabeledMultigraph& f) {
  const int n = f.num_vertices();
  std::vector<std::vector<std::pair<int, std::uint32_t>>> back(n);
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      if (auto m = f.multiplicity(u + 1, v + 1); m > 0) back[v].emplace_back(u, m);
    }
  }
  return back;
}

void require_unlabeled(const LabeledMultigraph& g, const char* who) {
  if (g.num_labels() != 0) throw std::invalid_argument(std::string(who) + ": graphs must be unlabeled");
}

class WeightedCounter {
 public:
  WeightedCounter(const LabeledMultigraph& f, const LabeledMultigraph& g, bool injective)
      : g_(g), back_(back_edges(f)), injective_(injective), phi_(f.num_vertices()),
        used_(g.num_vertices(), false) {}

  Integer run() {
    total_ = 0;
    recurse(0, Integer(1));
    return total_;
  }

 private:
  void recurse(std::size_t v, const Integer& weight) {
    if (v == phi_.size()) {
      total_ += weight;
      return;
    }
    for (int w = 0; w < g_.num_vertices(); ++w) {
      if (injective_ && used_[w]) continue;
      Integer next = weight;
      for (const auto& [u, m] : back_[v]) {
        const std::uint32_t target = g_.multiplicity(phi_[u] + 1, w + 1);
        if (target == 0) {
          next = 0;
          break;
        }
        if (target != 1) {
          Integer factor;
          mpz_ui_pow_ui(factor.get_mpz_t(), target, m);
          next *= factor;
        }
      }
      if (next == 0) continue;
      phi_[v] = w;
      used_[w] = true;
      recurse(v + 1, next);
      used_[w] = false;
    }
  }

  const LabeledMultigraph& g_;
  std::vector<std::vector<std::pair<int, std::uint32_t>>> back_;
  bool injective_;
  std::vector<int> phi_;
  std::vector<bool> used_;
  Integer total_;
};

Rational power_ratio(const Integer& num, unsigned long base, unsigned long exponent) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), base, exponent);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

void check_psi(std::span<const int> psi, int k, int n) {
  if (static_cast<int>(psi.size()) != k) {
    throw std::invalid_argument("psi must assign every one of the " + std::to_string(k) + " labels");
  }
  for (int image : psi) {
    if (image < 1 || image > n) throw std::invalid_argument("psi image out of range");
  }
}

// Exponent vectors of x (first n entries) and optionally y (n(n+1)/2 more,
// index of y_ij with i <= j is j(j+1)/2 + i, 0-based) accumulated over maps.
class ParametricCounter {
 public:
  ParametricCounter(const LabeledMultigraph& f, int n, std::span<const int> psi,
                    const LabeledMultigraph* simple_target)
      : f_(f), n_(n), target_(simple_target), back_(back_edges(f)), phi_(f.num_vertices()),
        exponents_(n + (target_ ? 0 : n * (n + 1) / 2), 0) {
    for (std::size_t i = 0; i < psi.size(); ++i) phi_[i] = psi[i] - 1;
  }

  Poly run() {
    recurse(0);
    Poly out;
    for (const auto& [key, count] : counts_) {
      std::vector<std::pair<Variable, std::uint32_t>> factors;
      for (int i = 0; i < n_; ++i) {
        if (key[i] > 0) factors.emplace_back(Variable::x(i + 1), key[i]);
      }
      if (!target_) {
        for (int j = 0; j < n_; ++j) {
          for (int i = 0; i <= j; ++i) {
            if (auto e = key[n_ + y_index(i, j)]; e > 0) factors.emplace_back(Variable::y(i + 1, j + 1), e);
          }
        }
      }
      out.add_term(Monomial::from_factors(std::move(factors)), Rational(count));
    }
    return out;
  }

 private:
  static std::size_t y_index(int i, int j) { return static_cast<std::size_t>(j) * (j + 1) / 2 + i; }

  void recurse(int v) {
    if (v == f_.num_vertices()) {
      ++counts_[exponents_];
      return;
    }
    const bool labeled = v < f_.num_labels();
    const int lo = labeled ? phi_[v] : 0;
    const int hi = labeled ? phi_[v] + 1 : n_;
    for (int w = lo; w < hi; ++w) {
      if (target_) {
        bool ok = true;
        for (const auto& [u, m] : back_[v]) {
          if (target_->multiplicity(phi_[u] + 1, w + 1) == 0) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
      } else {
        for (const auto& [u, m] : back_[v]) {
          exponents_[n_ + y_index(std::min(phi_[u], w), std::max(phi_[u], w))] += m;
        }
      }
      phi_[v] = w;
      if (!labeled) ++exponents_[w];
      recurse(v + 1);
      if (!labeled) --exponents_[w];
      if (!target_) {
        for (const auto& [u, m] : back_[v]) {
          exponents_[n_ + y_index(std::min(phi_[u], w), std::max(phi_[u], w))] -= m;
        }
      }
    }
  }

  const LabeledMultigraph& f_;
  int n_;
  const LabeledMultigraph* target_;
  std::vector<std::vector<std::pair<int, std::uint32_t>>> back_;
  std::vector<int> phi_;
  std::vector<std::uint32_t> exponents_;
  std::map<std::vector<std::uint32_t>, Integer> counts_;
};

void require_simple_pair(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  if (!f.is_simple() || !g.is_simple()) {
    throw std::invalid_argument("param_density: both graphs must be simple (use param_density_n for multigraphs)");
  }
  require_unlabeled(g, "param_density");
}

template <class Single>
RationalFn combine(const QuantumGraph& a, int num_weights, Single single) {
  int top = 0;
  for (const auto& [f, c] : a.terms()) top = std::max(top, f.grade());
  RationalFn out{Poly(), static_cast<unsigned>(top), num_weights};
  const Poly g = weight_sum(num_weights);
  for (const auto& [f, c] : a.terms()) {
    RationalFn part = single(f);
    out.numerator += part.numerator * pow(g, top - part.denom_power) * c;
  }
  return out;
}

}  // namespace

Integer hom_count(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  require_unlabeled(f, "hom_count");
  require_unlabeled(g, "hom_count");
  return WeightedCounter(f, g, false).run();
}

Integer inj_count(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  require_unlabeled(f, "inj_count");
  require_unlabeled(g, "inj_count");
  if (f.num_vertices() > g.num_vertices()) return 0;
  return WeightedCounter(f, g, true).run();
}

Rational t_density(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  require_unlabeled(f, "t_density");
  require_unlabeled(g, "t_density");
  if (g.num_vertices() == 0 && f.num_vertices() > 0) {
    throw std::invalid_argument("t_density: target graph has no vertices");
  }
  return power_ratio(hom_count(f, g), g.num_vertices(), f.num_vertices());
}

Rational t_inj_density(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  require_unlabeled(f, "t_inj_density");
  require_unlabeled(g, "t_inj_density");
  if (g.num_vertices() < f.num_vertices()) {
    throw std::invalid_argument("t_inj_density: target has fewer vertices than the pattern");
  }
  Integer falling = 1;
  for (int i = 0; i < f.num_vertices(); ++i) falling *= g.num_vertices() - i;
  Rational q(inj_count(f, g), falling);
  q.canonicalize();
  return q;
}

Rational t_quantum(const QuantumGraph& a, const LabeledMultigraph& g) {
  if (a.num_labels() != 0) throw std::invalid_argument("t_quantum: quantum graph must be unlabeled");
  Rational total = 0;
  for (const auto& [f, c] : a.terms()) total += c * t_density(f, g);
  return total;
}

Rational evaluate(const RationalFn& r, const std::map<Variable, Rational>& point) {
  const Rational den = evaluate(pow(weight_sum(r.num_weights), r.denom_power), point);
  if (den == 0) throw std::domain_error("rational function denominator vanishes");
  return evaluate(r.numerator, point) / den;
}

Rational evaluate_at_ones(const RationalFn& r) {
  std::map<Variable, Rational> point;
  for (int i = 1; i <= r.num_weights; ++i) point[Variable::x(i)] = 1;
  return evaluate(r, point);
}

RationalFn param_density(const LabeledMultigraph& f, const LabeledMultigraph& g) {
  require_unlabeled(f, "param_density");
  return param_density_rel(f, g, {});
}

RationalFn param_density_rel(const LabeledMultigraph& f, const LabeledMultigraph& g, std::span<const int> psi) {
  require_simple_pair(f, g);
  check_psi(psi, f.num_labels(), g.num_vertices());
  ParametricCounter counter(f, g.num_vertices(), psi, &g);
  return {counter.run(), static_cast<unsigned>(f.grade()), g.num_vertices()};
}

RationalFn param_density_n(const LabeledMultigraph& f, int n) {
  require_unlabeled(f, "param_density_n");
  return param_density_n_rel(f, n, {});
}

RationalFn param_density_n_rel(const LabeledMultigraph& f, int n, std::span<const int> psi) {
  if (n < 1) throw std::invalid_argument("param_density_n: n must be at least 1");
  check_psi(psi, f.num_labels(), n);
  ParametricCounter counter(f, n, psi, nullptr);
  return {counter.run(), static_cast<unsigned>(f.grade()), n};
}

RationalFn param_density(const QuantumGraph& a, const LabeledMultigraph& g) {
  if (a.num_labels() != 0) throw std::invalid_argument("param_density: quantum graph must be unlabeled");
  return combine(a, g.num_vertices(), [&](const LabeledMultigraph& f) { return param_density(f, g); });
}

RationalFn param_density_rel(const QuantumGraph& a, const LabeledMultigraph& g, std::span<const int> psi) {
  check_psi(psi, a.num_labels(), g.num_vertices());
  return combine(a, g.num_vertices(), [&](const LabeledMultigraph& f) { return param_density_rel(f, g, psi); });
}

RationalFn param_density_n(const QuantumGraph& a, int n) {
  if (a.num_labels() != 0) throw std::invalid_argument("param_density_n: quantum graph must be unlabeled");
  return combine(a, n, [&](const LabeledMultigraph& f) { return param_density_n(f, n); });
}

RationalFn param_density_n_rel(const QuantumGraph& a, int n, std::span<const int> psi) {
  if (n < 1) throw std::invalid_argument("param_density_n: n must be at least 1");
  check_psi(psi, a.num_labels(), n);
  return combine(a, n, [&](const LabeledMultigraph& f) { return param_density_n_rel(f, n, psi); });
}

Poly specialize_uniform(const RationalFn& r, int n, bool zero_diag) {
  if (n != r.num_weights) {
    throw std::invalid_argument("specialize_uniform: function was built for n = " + std::to_string(r.num_weights));
  }
  Assignment assignment;
  for (int i = 1; i <= n; ++i) {
    assignment[Variable::x(i)] = Poly(Rational(1, n));
    if (zero_diag) assignment[Variable::y(i, i)] = Poly();
  }
  return substitute(r.numerator, assignment);
}

}  // namespace qgraph
