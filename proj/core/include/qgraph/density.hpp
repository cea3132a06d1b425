#pragma once

#include <span>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/quantum_graph.hpp"
#include "qgraph/rational.hpp"

namespace qgraph {

// Multigraph homomorphisms are weighted: an edge of F with multiplicity m
// mapped onto a pair of multiplicity w in G contributes w^m. For simple
// graphs this is the ordinary count.

/// Weighted number of maps V_F -> V_G. hom_count(empty, g) = 1. Throws
/// std::invalid_argument on labeled input.
Integer hom_count(const LabeledMultigraph& f, const LabeledMultigraph& g);

/// Same weighted sum restricted to injective maps.
Integer inj_count(const LabeledMultigraph& f, const LabeledMultigraph& g);

/// hom(F,G) / |V_G|^|V_F|. Throws when G is empty and F is not.
Rational t_density(const LabeledMultigraph& f, const LabeledMultigraph& g);

/// inj(F,G) / (|V_G| (|V_G|-1) ... (|V_G|-|V_F|+1)). Throws when |V_G| < |V_F|.
Rational t_inj_density(const LabeledMultigraph& f, const LabeledMultigraph& g);

/// Linear extension of t_density to unlabeled quantum graphs.
Rational t_quantum(const QuantumGraph& a, const LabeledMultigraph& g);

/// numerator / g^denom_power with g = x_1 + ... + x_num_weights.
struct RationalFn {
  Poly numerator;
  unsigned denom_power = 0;
  int num_weights = 0;

  friend bool operator==(const RationalFn&, const RationalFn&) = default;
};

/// Evaluates at a point (x and y values); the denominator must not vanish.
Rational evaluate(const RationalFn& r, const std::map<Variable, Rational>& point);

/// Value at x_w = 1 for every weight (all y variables must be absent).
Rational evaluate_at_ones(const RationalFn& r);

/// Vertex-weighted density into a simple target: the numerator sums
/// prod_v x_phi(v) over homomorphisms phi; denom_power = |V_F|.
RationalFn param_density(const LabeledMultigraph& f, const LabeledMultigraph& g);

/// Relative version: homomorphisms extend psi (psi[i-1] is the 1-based image
/// of label i) and only unlabeled vertices contribute x factors;
/// denom_power = |V_F| - k.
RationalFn param_density_rel(const LabeledMultigraph& f, const LabeledMultigraph& g, std::span<const int> psi);

/// Density into the complete graph on n vertices with vertex weights x_i and
/// loop/edge weights y_ij; an edge of multiplicity m contributes y^m.
RationalFn param_density_n(const LabeledMultigraph& f, int n);
RationalFn param_density_n_rel(const LabeledMultigraph& f, int n, std::span<const int> psi);

// Linear extensions; terms are brought to the common denominator g^D with D
// the largest grade occurring in a.
RationalFn param_density(const QuantumGraph& a, const LabeledMultigraph& g);
RationalFn param_density_rel(const QuantumGraph& a, const LabeledMultigraph& g, std::span<const int> psi);
RationalFn param_density_n(const QuantumGraph& a, int n);
RationalFn param_density_n_rel(const QuantumGraph& a, int n, std::span<const int> psi);

/// Substitutes x_i = 1/n (so g = 1) and, with zero_diag, y_ii = 0. Throws if
/// r was produced for a different n.
Poly specialize_uniform(const RationalFn& r, int n, bool zero_diag);

}  // namespace qgraph
