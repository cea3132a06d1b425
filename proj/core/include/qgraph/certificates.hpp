#pragma once

#include <map>
#include <optional>
#include <variant>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/exact_psd.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/quantum_graph.hpp"
#include "qgraph/rational.hpp"
#include "qgraph/sdp.hpp"

namespace qgraph {

/// The error term added to a target before comparing it with a certificate.
struct PerturbSpec {
  enum class Kind { kNone, kEps, kSlow, kBounded };

  Kind kind = Kind::kNone;
  Rational eps;
  Rational d;      // bounded only
  unsigned r = 0;  // slow and bounded

  static PerturbSpec none() { return {}; }
  static PerturbSpec plain_eps(const Rational& eps);
  static PerturbSpec slow(const Rational& eps, unsigned r);
  static PerturbSpec bounded(const Rational& eps, const Rational& d, unsigned r);

  friend bool operator==(const PerturbSpec&, const PerturbSpec&) = default;
};

/// target + eps * 1 (kEps, any mode) or perturb_slow / perturb_bounded.
QuantumGraph apply_perturbation(const QuantumGraph& target, const PerturbSpec& perturb);

/// `none`, `eps:<q>`, `slow:<q>:<r>`, `bounded:<q>:<d>:<r>`.
std::string format_perturb(const PerturbSpec& perturb);
PerturbSpec parse_perturb(std::string_view text);

/// sigma = sum_i weight_i * root_i^2 with nonnegative rational weights.
struct SosSummand {
  Rational weight = 1;
  QuantumGraph root;
};

struct SosCert {
  int k = 0;
  Mode mode = Mode::kSimple;
  PerturbSpec perturb;
  bool restricted_degree0 = false;
  std::vector<SosSummand> summands;
};

/// sigma as an element of A_k. Throws std::invalid_argument on negative
/// weights or summands whose k or mode differ from the certificate's.
QuantumGraph expand(const SosCert& cert);

struct VerifyResult {
  bool accepted = false;
  /// iso_normal_form(sigma) - iso_normal_form(perturbed target); zero iff accepted.
  QuantumGraph difference;
};

/// Exact check that sigma and the perturbed target coincide up to labels and
/// isolated vertices. Throws std::invalid_argument on a mode mismatch.
VerifyResult verify_sos(const SosCert& cert, const QuantumGraph& target, const PerturbSpec& perturb);

/// d + z_ij (plus) or d - z_ij.
struct Generator {
  int i;
  int j;
  bool plus;

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

struct PreorderBlock {
  std::vector<Generator> gens;
  std::vector<Monomial> basis;
  RationalMatrix gram;
};

/// sigma = sum_blocks (m^T G m) * prod_{gen} gen, an element of PO(d +- z_ij).
struct PreorderCert {
  int k = 2;
  Rational d = 1;
  PerturbSpec perturb;
  std::vector<PreorderBlock> blocks;
};

class NonPsdGramError : public std::runtime_error {
 public:
  NonPsdGramError(std::size_t block, std::vector<Rational> witness, Rational value);
  std::size_t block() const { return block_; }
  const std::vector<Rational>& witness() const { return witness_; }
  const Rational& value() const { return value_; }

 private:
  std::size_t block_;
  std::vector<Rational> witness_;
  Rational value_;
};

/// sigma as a polynomial in the z variables. Throws NonPsdGramError if a Gram
/// matrix is not PSD and std::invalid_argument on malformed blocks.
Poly expand(const PreorderCert& cert);

/// Multigraph-mode comparison of sigma with the perturbed target.
VerifyResult verify_preorder(const PreorderCert& cert, const QuantumGraph& target, const PerturbSpec& perturb);

// ---------------------------------------------------------------------------
// Searches. Only exactly verified certificates are ever returned.

enum class SearchStatus { kCertificate, kInfeasible, kIndeterminate };
std::string to_string(SearchStatus status);

struct SimpleSearchResult {
  SearchStatus status = SearchStatus::kIndeterminate;
  SosCert cert;
  /// Minimum of the symmetrized b + eps over {0,1}^{C(k,2)} and a minimizer
  /// (one 0/1 entry per pair in column-major order 12, 13, 23, 14, ...).
  Rational min_value;
  std::vector<int> witness_point;
};

/// Finite-variety search in the simple setting. Requires k >= 2, k <= 5,
/// eps >= 0 and every basis graph of target to have at most k vertices.
SimpleSearchResult sos_search_simple(const QuantumGraph& target, int k, const Rational& eps);

/// Reynolds symmetrization of the target lifted to A_k^0, as a multilinear
/// polynomial in the z variables.
Poly symmetrized_lift(const QuantumGraph& target, int k);

struct MultiSearchResult {
  SearchStatus status = SearchStatus::kIndeterminate;
  SosCert cert;
  PreorderCert preorder;  // preorder_search only
  std::string diagnostics;
  SdpSolution numeric;
  int gram_dimension = 0;
  int constraint_count = 0;
};

/// Gram SDP over z-monomials of degree <= max_degree in A_k^0.
MultiSearchResult sos_search_multi(const QuantumGraph& target, int k, int max_degree, const PerturbSpec& perturb,
                                   const SdpOptions& options = {});

/// Block Gram SDP over PO(d +- z_ij): one block per label-permutation orbit
/// of generator subsets e with |e| <= 2 * max_degree, basis degree
/// floor((2 * max_degree - |e|) / 2).
MultiSearchResult preorder_search(const QuantumGraph& target, int k, int max_degree, const Rational& d,
                                  const PerturbSpec& perturb, const SdpOptions& options = {});

struct SosPolyResult {
  SearchStatus status = SearchStatus::kIndeterminate;  // kCertificate = SOS, kInfeasible = not SOS
  std::vector<Monomial> basis;
  std::optional<RationalMatrix> gram;       // SOS: p = m^T G m exactly
  std::map<Monomial, double, GrlexDescending> dual;  // not SOS: separating functional
  double margin = 0;                        // not SOS: -L(p) with trace normalization
  std::string diagnostics;
};

/// SOS test for a polynomial of even degree, over the monomials of the half
/// Newton polytope. Throws std::invalid_argument for odd degree.
SosPolyResult is_sos_poly(const Poly& p, const SdpOptions& options = {});

/// Minimum margin required to report "not SOS".
inline constexpr double kNotSosMargin = 1e-6;

// ---------------------------------------------------------------------------
// Certificate files

std::string format_certificate(const SosCert& cert);
std::string format_certificate(const PreorderCert& cert);
/// Throws ParseError with a byte offset into text.
std::variant<SosCert, PreorderCert> parse_certificate(std::string_view text);

}  // namespace qgraph
