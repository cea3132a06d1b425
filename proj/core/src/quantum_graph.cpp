#include "qgraph/quantum_graph.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qgraph {

namespace {

constexpr unsigned kMaxPerturbationOrder = 30;

LabeledMultigraph normalize_for_mode(const LabeledMultigraph& g, Mode mode) {
  if (mode == Mode::kSimple && !g.is_simple()) {
    throw std::invalid_argument("simple-mode quantum graph cannot contain multiple edges: " + format_graph(g));
  }
  return canonical_form(g);
}

}  // namespace

QuantumGraph::QuantumGraph(int k, Mode mode) : k_(k), mode_(mode) {
  if (k < 0 || k > kMaxVertices) throw std::invalid_argument("label count out of range");
}

QuantumGraph QuantumGraph::basis(const LabeledMultigraph& g, Mode mode, const Rational& c) {
  QuantumGraph q(g.num_labels(), mode);
  q.add_term(g, c);
  return q;
}

QuantumGraph QuantumGraph::one(int k, Mode mode) { return basis(identity_graph(k), mode); }

Rational QuantumGraph::coefficient(const LabeledMultigraph& g) const {
  auto it = terms_.find(canonical_form(g));
  return it == terms_.end() ? Rational(0) : it->second;
}

void QuantumGraph::add_term(const LabeledMultigraph& g, const Rational& c) {
  if (g.num_labels() != k_) {
    throw std::invalid_argument("basis graph has " + std::to_string(g.num_labels()) + " labels, expected " +
                                std::to_string(k_));
  }
  if (c == 0) return;
  auto key = normalize_for_mode(g, mode_);
  auto [it, inserted] = terms_.try_emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void QuantumGraph::check_compatible(const QuantumGraph& other, const char* who) const {
  if (k_ != other.k_) {
    throw std::invalid_argument(std::string(who) + ": label counts differ (" + std::to_string(k_) + " vs " +
                                std::to_string(other.k_) + ")");
  }
  if (mode_ != other.mode_) throw std::invalid_argument(std::string(who) + ": modes differ");
}

QuantumGraph QuantumGraph::operator-() const {
  QuantumGraph out = *this;
  for (auto& [g, c] : out.terms_) c = -c;
  return out;
}

QuantumGraph& QuantumGraph::operator+=(const QuantumGraph& other) {
  check_compatible(other, "add");
  for (const auto& [g, c] : other.terms_) add_term(g, c);
  return *this;
}

QuantumGraph& QuantumGraph::operator-=(const QuantumGraph& other) {
  check_compatible(other, "subtract");
  for (const auto& [g, c] : other.terms_) add_term(g, -c);
  return *this;
}

QuantumGraph& QuantumGraph::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [g, coef] : terms_) coef *= c;
  }
  return *this;
}

QuantumGraph operator*(const QuantumGraph& a, const QuantumGraph& b) {
  a.check_compatible(b, "multiply");
  QuantumGraph out(a.k_, a.mode_);
  for (const auto& [ga, ca] : a.terms_) {
    for (const auto& [gb, cb] : b.terms_) out.add_term(glue(ga, gb, a.mode_), ca * cb);
  }
  return out;
}

QuantumGraph linear_combination(const QuantumGraph& a, const QuantumGraph& b, const Rational& alpha,
                                const Rational& beta) {
  return a * alpha + b * beta;
}

QuantumGraph multiply(const QuantumGraph& a, const QuantumGraph& b) { return a * b; }

QuantumGraph degree_component(const QuantumGraph& a, int d) {
  if (d < 0) throw std::invalid_argument("degree_component: negative degree");
  QuantumGraph out(a.num_labels(), a.mode());
  for (const auto& [g, c] : a.terms()) {
    if (g.grade() == d) out.add_term(g, c);
  }
  return out;
}

QuantumGraph reynolds(const QuantumGraph& a) {
  const int k = a.num_labels();
  QuantumGraph out(k, a.mode());
  if (k <= 1) return a;
  std::vector<int> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 1);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const Rational weight(1, static_cast<unsigned long>(perms.size()));
  for (const auto& [g, c] : a.terms()) {
    std::map<LabeledMultigraph, unsigned long> orbit;
    for (const auto& p : perms) ++orbit[permute_labels(g, p)];
    for (const auto& [h, mult] : orbit) out.add_term(h, c * weight * Rational(mult));
  }
  return out;
}

bool is_label_invariant(const QuantumGraph& a) {
  const int k = a.num_labels();
  if (k <= 1) return true;
  // Transpositions (1 i) generate S_k.
  for (int i = 2; i <= k; ++i) {
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 1);
    std::swap(sigma[0], sigma[i - 1]);
    QuantumGraph moved(k, a.mode());
    for (const auto& [g, c] : a.terms()) moved.add_term(permute_labels(g, sigma), c);
    if (!(moved == a)) return false;
  }
  return true;
}

QuantumGraph boxplus(const QuantumGraph& a) {
  QuantumGraph out(a.num_labels() + 1, a.mode());
  for (const auto& [g, c] : a.terms()) out.add_term(boxplus(g), c);
  return out;
}

QuantumGraph boxplus_reynolds(const QuantumGraph& a) { return reynolds(boxplus(a)); }

QuantumGraph iso_normal_form(const QuantumGraph& a) {
  QuantumGraph out(0, a.mode());
  for (const auto& [g, c] : a.terms()) out.add_term(strip_isolated(unlabel(g)), c);
  return out;
}

Poly to_z_poly(const QuantumGraph& a) {
  Poly p;
  for (const auto& [g, c] : a.terms()) {
    if (g.num_vertices() != g.num_labels()) {
      throw std::invalid_argument("to_z_poly: basis graph has unlabeled vertices: " + format_graph(g));
    }
    std::vector<std::pair<Variable, std::uint32_t>> factors;
    for (const Edge& e : g.edges()) factors.emplace_back(Variable::z(e.u, e.v), e.multiplicity);
    p.add_term(Monomial::from_factors(std::move(factors)), c);
  }
  return p;
}

QuantumGraph from_z_poly(const Poly& p, int k, Mode mode) {
  const Poly source = mode == Mode::kSimple ? reduce_idempotent(p) : p;
  QuantumGraph out(k, mode);
  for (const auto& [m, c] : source.terms()) {
    std::vector<Edge> edges;
    for (const auto& [v, e] : m.factors()) {
      if (v.kind != Variable::Kind::kZ) {
        throw std::invalid_argument("from_z_poly: non-z variable " + format_variable(v));
      }
      if (v.j > k) throw std::invalid_argument("from_z_poly: variable " + format_variable(v) + " exceeds k");
      edges.push_back({v.i, v.j, e});
    }
    out.add_term(LabeledMultigraph::from_edges(k, k, edges), c);
  }
  return out;
}

QuantumGraph k2_power(unsigned j) { return QuantumGraph::basis(multi_edge_graph(j), Mode::kMulti); }

namespace {

void check_perturbation_input(const QuantumGraph& a, const Rational& eps, unsigned r) {
  if (a.num_labels() != 0) throw std::invalid_argument("perturbation needs an unlabeled quantum graph");
  if (a.mode() != Mode::kMulti) throw std::invalid_argument("perturbation needs a multigraph quantum graph");
  if (eps <= 0) throw std::invalid_argument("perturbation needs eps > 0");
  if (r > kMaxPerturbationOrder) throw std::invalid_argument("perturbation order r is capped at 30");
}

}  // namespace

QuantumGraph perturb_slow(const QuantumGraph& a, const Rational& eps, unsigned r) {
  check_perturbation_input(a, eps, r);
  QuantumGraph out = a;
  for (unsigned i = 0; i <= r; ++i) {
    // K2^0 is two isolated vertices; its normal form is the empty graph.
    const LabeledMultigraph g = i == 0 ? LabeledMultigraph(0, 0) : multi_edge_graph(2 * i);
    out.add_term(g, eps / factorial(i));
  }
  return out;
}

QuantumGraph perturb_bounded(const QuantumGraph& a, const Rational& eps, const Rational& d, unsigned r) {
  check_perturbation_input(a, eps, r);
  if (d < 1) throw std::invalid_argument("perturb_bounded needs d >= 1");
  QuantumGraph out = a;
  Rational d_power = 1;
  for (unsigned i = 0; i < 2 * r; ++i) d_power *= d;
  out.add_term(LabeledMultigraph(0, 0), eps);
  const LabeledMultigraph g = r == 0 ? LabeledMultigraph(0, 0) : multi_edge_graph(2 * r);
  out.add_term(g, eps / d_power);
  return out;
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

QuantumGraph parse_quantum_graph(std::string_view text) {
  std::optional<Mode> mode;
  std::optional<int> k;
  std::vector<std::pair<Rational, LabeledMultigraph>> terms;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    const std::size_t base = line_start;
    line_start = line_end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::size_t offset = base + static_cast<std::size_t>(body.data() - line.data());
    try {
      if (body.starts_with("mode:")) {
        if (mode) throw ParseError("duplicate mode header", 0);
        mode = parse_mode(trim(body.substr(5)));
        continue;
      }
      if (body.starts_with("k:")) {
        const Rational kk = parse_rational(body.substr(2));
        if (kk.get_den() != 1 || kk < 0 || kk > kMaxVertices) throw ParseError("invalid label count", 2);
        k = static_cast<int>(kk.get_num().get_si());
        continue;
      }
      const auto bar = body.find('|');
      if (bar == std::string_view::npos) throw ParseError("expected '<rational> | <graph>'", 0);
      if (!mode) throw ParseError("missing 'mode: simple|multi' header before the first term", 0);
      Rational c;
      try {
        c = parse_rational(body.substr(0, bar));
      } catch (const ParseError& e) {
        throw ParseError("bad coefficient", 0);
      }
      LabeledMultigraph g;
      try {
        g = parse_graph(body.substr(bar + 1));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()), bar + 1 + e.position());
      }
      terms.emplace_back(c, g);
    } catch (const ParseError& e) {
      std::string what = e.what();
      if (auto p = what.rfind(" (at position"); p != std::string::npos) what.resize(p);
      throw ParseError(what, offset + e.position());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), offset);
    }
  }
  if (!mode) throw ParseError("missing 'mode: simple|multi' header", 0);
  const int labels = k ? *k : (terms.empty() ? 0 : terms.front().second.num_labels());
  QuantumGraph out(labels, *mode);
  for (const auto& [c, g] : terms) {
    if (g.num_labels() != labels) throw ParseError("all terms must share the same label count", 0);
    try {
      out.add_term(g, c);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), 0);
    }
  }
  return out;
}

std::string format_quantum_graph(const QuantumGraph& a) {
  std::ostringstream out;
  out << "mode: " << to_string(a.mode()) << "\n";
  out << "k: " << a.num_labels() << "\n";
  for (const auto& [g, c] : a.terms()) out << format_rational(c) << " | " << format_graph(g) << "\n";
  return out.str();
}

std::string describe(const QuantumGraph& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, c] : a.terms()) {
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    out += format_rational(abs(c)) + "*[" + format_graph(g) + "]";
  }
  return out;
}

}  // namespace qgraph
