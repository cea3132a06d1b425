#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgraph {

/// Largest vertex count handled anywhere in the library.
inline constexpr int kMaxVertices = 12;

enum class Mode { kSimple, kMulti };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct Edge {
  int u;  // 1-based
  int v;  // 1-based
  std::uint32_t multiplicity = 1;
};

/// A loopless multigraph on vertices 1..n whose first k vertices carry the
/// labels 1..k. Multiplicities are stored as the upper triangle of the
/// adjacency matrix in column-major order: (1,2), (1,3), (2,3), (1,4), ...
/// This order is also the encoding compared by canonical_form().
class LabeledMultigraph {
 public:
  /// Edgeless graph; `LabeledMultigraph(k, k)` is the identity E_k.
  LabeledMultigraph(int n = 0, int k = 0);

  /// Builds from an edge list; repeated pairs accumulate. Throws
  /// std::invalid_argument on loops, out-of-range vertices, zero
  /// multiplicities, or k > n, and SizeLimitError if n > kMaxVertices.
  static LabeledMultigraph from_edges(int n, int k, std::span<const Edge> edges);

  /// Takes a raw column-major multiplicity vector of length n(n-1)/2.
  static LabeledMultigraph from_encoding(int n, int k, std::vector<std::uint32_t> encoding);

  int num_vertices() const { return n_; }
  int num_labels() const { return k_; }
  /// Number of unlabeled vertices, n - k (the grading of the graph algebra).
  int grade() const { return n_ - k_; }

  /// Multiplicity of the pair {u, v} (1-based); 0 for u == v.
  std::uint32_t multiplicity(int u, int v) const;
  int vertex_degree(int v) const;
  std::uint64_t edge_count() const;
  std::uint32_t max_multiplicity() const;
  bool is_simple() const;
  std::vector<Edge> edges() const;

  const std::vector<std::uint32_t>& encoding() const { return mult_; }

  friend bool operator==(const LabeledMultigraph&, const LabeledMultigraph&) = default;
  friend std::strong_ordering operator<=>(const LabeledMultigraph& a, const LabeledMultigraph& b);

  static std::size_t pair_index(int u0, int v0) {  // 0-based, u0 < v0
    return static_cast<std::size_t>(v0) * (v0 - 1) / 2 + u0;
  }

 private:
  int n_;
  int k_;
  std::vector<std::uint32_t> mult_;
};

struct LabeledMultigraphHash {
  std::size_t operator()(const LabeledMultigraph& g) const;
};

/// E_k: k labeled vertices, no edges.
LabeledMultigraph identity_graph(int k);

/// Representative of the isomorphism class of g under permutations of the
/// unlabeled vertices: the permutation with the lexicographically smallest
/// encoding. Results are memoized in a process-wide, thread-safe cache.
LabeledMultigraph canonical_form(const LabeledMultigraph& g);

bool is_canonical(const LabeledMultigraph& g);

/// Gluing product: disjoint union with equally labeled vertices identified.
/// Multiplicities add; in simple mode they are clamped to 1 afterwards.
LabeledMultigraph glue(const LabeledMultigraph& f, const LabeledMultigraph& g, Mode mode);

/// Adds an isolated vertex carrying the new label k+1.
LabeledMultigraph boxplus(const LabeledMultigraph& g);

/// Forgets all labels (k := 0); result canonical.
LabeledMultigraph unlabel(const LabeledMultigraph& g);

/// Removes every isolated vertex of an unlabeled graph. Throws
/// std::invalid_argument when g has labels.
LabeledMultigraph strip_isolated(const LabeledMultigraph& g);

/// Vertex i <= k receives label sigma[i-1] (a permutation of 1..k).
LabeledMultigraph permute_labels(const LabeledMultigraph& g, std::span<const int> sigma);

/// All multiplicities clamped to at most 1; result canonical.
LabeledMultigraph clamp_simple(const LabeledMultigraph& g);

/// Parses one `MG <n> <k> : <edges>` line; the result is canonical.
LabeledMultigraph parse_graph(std::string_view text);

/// Canonical one-line rendering, e.g. `MG 3 0 : 1-2*2,1-3*2,2-3*2`.
std::string format_graph(const LabeledMultigraph& g);

// Small named graphs used by examples and tests (all unlabeled unless noted).
LabeledMultigraph complete_graph(int n);
LabeledMultigraph edge_graph();                          // K2
LabeledMultigraph multi_edge_graph(std::uint32_t j);     // K2^j: two vertices, j parallel edges
LabeledMultigraph cherry_graph();                        // path on 3 vertices
LabeledMultigraph matching_graph(int edges);             // disjoint copies of K2

}  // namespace qgraph
