#pragma once

#include <map>
#include <string>
#include <string_view>

#include "qgraph/graph.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/rational.hpp"

namespace qgraph {

/// A finite rational linear combination of canonical k-labeled graphs: an
/// element of the graph algebra A_k (simple mode) or its multigraph
/// counterpart. S_k-invariant elements (the subalgebra B_k) are ordinary
/// QuantumGraphs; reynolds() produces them.
class QuantumGraph {
 public:
  using TermMap = std::map<LabeledMultigraph, Rational>;

  QuantumGraph(int k = 0, Mode mode = Mode::kSimple);

  /// c * g. The graph is canonicalized; in simple mode it must be simple.
  static QuantumGraph basis(const LabeledMultigraph& g, Mode mode, const Rational& c = 1);

  /// The unit E_k.
  static QuantumGraph one(int k, Mode mode);

  int num_labels() const { return k_; }
  Mode mode() const { return mode_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const LabeledMultigraph& g) const;

  /// Adds c * g (g canonicalized and checked against k and mode).
  void add_term(const LabeledMultigraph& g, const Rational& c);

  QuantumGraph operator-() const;
  QuantumGraph& operator+=(const QuantumGraph& other);
  QuantumGraph& operator-=(const QuantumGraph& other);
  QuantumGraph& operator*=(const Rational& c);
  friend QuantumGraph operator+(QuantumGraph a, const QuantumGraph& b) { return a += b; }
  friend QuantumGraph operator-(QuantumGraph a, const QuantumGraph& b) { return a -= b; }
  friend QuantumGraph operator*(QuantumGraph a, const Rational& c) { return a *= c; }
  friend QuantumGraph operator*(const Rational& c, QuantumGraph a) { return a *= c; }
  friend QuantumGraph operator*(const QuantumGraph& a, const QuantumGraph& b);

  friend bool operator==(const QuantumGraph&, const QuantumGraph&) = default;

 private:
  void check_compatible(const QuantumGraph& other, const char* who) const;

  int k_;
  Mode mode_;
  TermMap terms_;
};

/// alpha * a + beta * b.
QuantumGraph linear_combination(const QuantumGraph& a, const QuantumGraph& b, const Rational& alpha,
                                const Rational& beta);

/// Bilinear extension of glue(). Same as `a * b`.
QuantumGraph multiply(const QuantumGraph& a, const QuantumGraph& b);

/// Part supported on graphs with exactly d unlabeled vertices.
QuantumGraph degree_component(const QuantumGraph& a, int d);

/// Average of all k! label permutations of a.
QuantumGraph reynolds(const QuantumGraph& a);

/// True when a is fixed by every label permutation (a lies in B_k).
bool is_label_invariant(const QuantumGraph& a);

/// Applies boxplus() to every basis graph (A_k -> A_{k+1}).
QuantumGraph boxplus(const QuantumGraph& a);

/// reynolds(boxplus(a)) (B_k -> B_{k+1}).
QuantumGraph boxplus_reynolds(const QuantumGraph& a);

/// Unlabels every basis graph, strips isolated vertices and merges terms.
/// Two quantum graphs coincide up to labels and isolated vertices iff their
/// normal forms are equal. The result has k = 0.
QuantumGraph iso_normal_form(const QuantumGraph& a);

/// Degree-zero bridge: a fully labeled graph with multiplicity e_ij on {i,j}
/// corresponds to the monomial prod z_ij^e_ij. Throws std::invalid_argument
/// if a has a basis graph with unlabeled vertices.
Poly to_z_poly(const QuantumGraph& a);

/// Inverse of to_z_poly(); in simple mode exponents are first reduced modulo
/// z^2 - z. Throws if p contains non-z variables or indices above k.
QuantumGraph from_z_poly(const Poly& p, int k, Mode mode);

/// K2^j as an unlabeled multigraph quantum graph (K2^0 is two isolated vertices).
QuantumGraph k2_power(unsigned j);

/// a + eps * sum_{i=0}^{r} (1/i!) K2^{2i}. Requires k = 0, multi mode,
/// eps > 0 and r <= 30.
QuantumGraph perturb_slow(const QuantumGraph& a, const Rational& eps, unsigned r);

/// a + eps * (1 + d^{-2r} K2^{2r}), where 1 is the empty graph. Requires
/// k = 0, multi mode, eps > 0, d >= 1 and r <= 30.
QuantumGraph perturb_bounded(const QuantumGraph& a, const Rational& eps, const Rational& d, unsigned r);

/// Quantum graph file text: a `mode:` header, an optional `k:` header and one
/// `<rational> | <graph line>` per term.
QuantumGraph parse_quantum_graph(std::string_view text);
std::string format_quantum_graph(const QuantumGraph& a);

/// Human-readable one-line sum, e.g. `1*[MG 3 0 : 1-2,1-3] - 1*[MG 4 0 : 1-2,3-4]`.
std::string describe(const QuantumGraph& a);

}  // namespace qgraph
