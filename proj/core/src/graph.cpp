#include "qgraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "qgraph/rational.hpp"

namespace qgraph {

std::string to_string(Mode mode) { return mode == Mode::kSimple ? "simple" : "multi"; }

Mode parse_mode(std::string_view text) {
  if (text == "simple") return Mode::kSimple;
  if (text == "multi") return Mode::kMulti;
  throw ParseError("unknown mode '" + std::string(text) + "' (expected simple or multi)", 0);
}

namespace {

std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

void check_size(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("graph needs 0 <= k <= n (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
  }
  if (n > kMaxVertices) {
    throw SizeLimitError("graph with " + std::to_string(n) + " vertices exceeds the limit of " +
                         std::to_string(kMaxVertices));
  }
}

std::uint32_t checked_add(std::uint32_t a, std::uint32_t b) {
  if (a > std::numeric_limits<std::uint32_t>::max() - b) {
    throw SizeLimitError("edge multiplicity overflow");
  }
  return a + b;
}

std::uint32_t at(const std::vector<std::uint32_t>& m, int u0, int v0) {
  if (u0 == v0) return 0;
  if (u0 > v0) std::swap(u0, v0);
  return m[LabeledMultigraph::pair_index(u0, v0)];
}

// Branch-and-bound search for the lexicographically smallest column-major
// encoding over all placements of the unlabeled vertices.
class CanonicalSearch {
 public:
  CanonicalSearch(const LabeledMultigraph& g)
      : n_(g.num_vertices()), k_(g.num_labels()), src_(g.encoding()) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.begin() + k_, 0);
    used_.assign(n_, false);
    for (int i = 0; i < k_; ++i) used_[i] = true;
    current_.assign(pair_count(n_), 0);
    for (int v = 1; v < k_; ++v) {
      for (int u = 0; u < v; ++u) current_[LabeledMultigraph::pair_index(u, v)] = at(src_, u, v);
    }
  }

  std::vector<std::uint32_t> run() {
    search(k_);
    return best_;
  }

 private:
  bool twins(int a, int b) const {
    for (int w = 0; w < n_; ++w) {
      if (w == a || w == b) continue;
      if (at(src_, a, w) != at(src_, b, w)) return false;
    }
    return true;
  }

  // True when the encoding prefix [0, len) is lexicographically greater
  // than the same prefix of the best leaf found so far.
  bool worse_than_best(std::size_t len) const {
    if (!have_best_) return false;
    return std::lexicographical_compare(best_.begin(), best_.begin() + len, current_.begin(),
                                        current_.begin() + len);
  }

  void search(int pos) {
    if (pos == n_) {
      if (!have_best_ || current_ < best_) {
        best_ = current_;
        have_best_ = true;
      }
      return;
    }
    const std::size_t base = LabeledMultigraph::pair_index(0, pos);
    std::vector<int> candidates;
    std::vector<std::uint32_t> min_col;
    std::vector<std::uint32_t> col(pos);
    for (int c = 0; c < n_; ++c) {
      if (used_[c]) continue;
      for (int q = 0; q < pos; ++q) col[q] = at(src_, order_[q], c);
      if (candidates.empty() || col < min_col) {
        min_col = col;
        candidates.assign(1, c);
      } else if (col == min_col) {
        candidates.push_back(c);
      }
    }
    // Only candidates producing the smallest next column can lead to the minimum.
    std::copy(min_col.begin(), min_col.end(), current_.begin() + base);
    const std::size_t len = base + pos;

    std::vector<int> explored;
    for (int c : candidates) {
      if (worse_than_best(len)) return;
      // Interchangeable vertices give isomorphic subtrees.
      const bool twin = std::any_of(explored.begin(), explored.end(), [&](int e) { return twins(c, e); });
      if (twin) continue;
      explored.push_back(c);
      used_[c] = true;
      order_[pos] = c;
      search(pos + 1);
      used_[c] = false;
      std::copy(min_col.begin(), min_col.end(), current_.begin() + base);
    }
  }

  int n_;
  int k_;
  const std::vector<std::uint32_t>& src_;
  std::vector<int> order_;
  std::vector<bool> used_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_;
  bool have_best_ = false;
};

class CanonicalCache {
 public:
  std::optional<LabeledMultigraph> find(const LabeledMultigraph& g) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(g);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const LabeledMultigraph& g, const LabeledMultigraph& canon) {
    std::unique_lock lock(mutex_);
    if (map_.size() > kMaxEntries) map_.clear();
    map_.emplace(g, canon);
  }

 private:
  static constexpr std::size_t kMaxEntries = 1u << 21;
  mutable std::shared_mutex mutex_;
  std::unordered_map<LabeledMultigraph, LabeledMultigraph, LabeledMultigraphHash> map_;
};

CanonicalCache& canonical_cache() {
  static CanonicalCache cache;
  return cache;
}

}  // namespace

LabeledMultigraph::LabeledMultigraph(int n, int k) : n_(n), k_(k) {
  check_size(n, k);
  mult_.assign(pair_count(n), 0);
}

LabeledMultigraph LabeledMultigraph::from_edges(int n, int k, std::span<const Edge> edges) {
  LabeledMultigraph g(n, k);
  for (const Edge& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw std::invalid_argument("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                                  " refers to a vertex outside 1.." + std::to_string(n));
    }
    if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
    if (e.multiplicity < 1) throw std::invalid_argument("edge multiplicity must be at least 1");
    auto& slot = g.mult_[pair_index(std::min(e.u, e.v) - 1, std::max(e.u, e.v) - 1)];
    slot = checked_add(slot, e.multiplicity);
  }
  return g;
}

LabeledMultigraph LabeledMultigraph::from_encoding(int n, int k, std::vector<std::uint32_t> encoding) {
  LabeledMultigraph g(n, k);
  if (encoding.size() != g.mult_.size()) {
    throw std::invalid_argument("encoding length does not match vertex count");
  }
  g.mult_ = std::move(encoding);
  return g;
}

std::uint32_t LabeledMultigraph::multiplicity(int u, int v) const {
  if (u < 1 || u > n_ || v < 1 || v > n_) throw std::out_of_range("vertex out of range");
  return at(mult_, u - 1, v - 1);
}

int LabeledMultigraph::vertex_degree(int v) const {
  int d = 0;
  for (int w = 1; w <= n_; ++w) d += static_cast<int>(multiplicity(v, w));
  return d;
}

std::uint64_t LabeledMultigraph::edge_count() const {
  std::uint64_t total = 0;
  for (auto m : mult_) total += m;
  return total;
}

std::uint32_t LabeledMultigraph::max_multiplicity() const {
  std::uint32_t best = 0;
  for (auto m : mult_) best = std::max(best, m);
  return best;
}

bool LabeledMultigraph::is_simple() const {
  return std::all_of(mult_.begin(), mult_.end(), [](std::uint32_t m) { return m <= 1; });
}

std::vector<Edge> LabeledMultigraph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      const auto m = mult_[pair_index(u, v)];
      if (m > 0) out.push_back({u + 1, v + 1, m});
    }
  }
  return out;
}

std::strong_ordering operator<=>(const LabeledMultigraph& a, const LabeledMultigraph& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  if (auto c = a.k_ <=> b.k_; c != 0) return c;
  return a.mult_ <=> b.mult_;
}

std::size_t LabeledMultigraphHash::operator()(const LabeledMultigraph& g) const {
  std::size_t h = static_cast<std::size_t>(g.num_vertices()) * 1315423911u + g.num_labels();
  for (auto m : g.encoding()) h = h * 1099511628211ull ^ (m + 0x9e3779b97f4a7c15ull);
  return h;
}

LabeledMultigraph identity_graph(int k) { return LabeledMultigraph(k, k); }

LabeledMultigraph canonical_form(const LabeledMultigraph& g) {
  if (g.grade() <= 1) return g;
  if (auto hit = canonical_cache().find(g)) return *hit;
  CanonicalSearch search(g);
  LabeledMultigraph canon = LabeledMultigraph::from_encoding(g.num_vertices(), g.num_labels(), search.run());
  canonical_cache().insert(g, canon);
  return canon;
}

bool is_canonical(const LabeledMultigraph& g) { return canonical_form(g) == g; }

LabeledMultigraph glue(const LabeledMultigraph& f, const LabeledMultigraph& g, Mode mode) {
  if (f.num_labels() != g.num_labels()) {
    throw std::invalid_argument("glue: label counts differ (" + std::to_string(f.num_labels()) + " vs " +
                                std::to_string(g.num_labels()) + ")");
  }
  const int k = f.num_labels();
  const int n = f.num_vertices() + g.num_vertices() - k;
  check_size(n, k);
  std::vector<std::uint32_t> m(pair_count(n), 0);
  // f keeps its numbering; g's unlabeled vertices move after f's.
  auto g_index = [&](int v0) { return v0 < k ? v0 : v0 + f.num_vertices() - k; };
  for (int v = 1; v < f.num_vertices(); ++v) {
    for (int u = 0; u < v; ++u) m[LabeledMultigraph::pair_index(u, v)] = at(f.encoding(), u, v);
  }
  for (int v = 1; v < g.num_vertices(); ++v) {
    for (int u = 0; u < v; ++u) {
      const auto mult = at(g.encoding(), u, v);
      if (mult == 0) continue;
      int a = g_index(u), b = g_index(v);
      if (a > b) std::swap(a, b);
      auto& slot = m[LabeledMultigraph::pair_index(a, b)];
      slot = checked_add(slot, mult);
    }
  }
  if (mode == Mode::kSimple) {
    for (auto& x : m) x = std::min<std::uint32_t>(x, 1);
  }
  return canonical_form(LabeledMultigraph::from_encoding(n, k, std::move(m)));
}

LabeledMultigraph boxplus(const LabeledMultigraph& g) {
  const int n = g.num_vertices() + 1;
  const int k = g.num_labels() + 1;
  check_size(n, k);
  std::vector<std::uint32_t> m(pair_count(n), 0);
  // New vertex sits at index k-1; old vertices >= k-1 shift by one.
  auto shift = [&](int v0) { return v0 < k - 1 ? v0 : v0 + 1; };
  for (int v = 1; v < g.num_vertices(); ++v) {
    for (int u = 0; u < v; ++u) {
      m[LabeledMultigraph::pair_index(shift(u), shift(v))] = at(g.encoding(), u, v);
    }
  }
  return canonical_form(LabeledMultigraph::from_encoding(n, k, std::move(m)));
}

LabeledMultigraph unlabel(const LabeledMultigraph& g) {
  return canonical_form(LabeledMultigraph::from_encoding(g.num_vertices(), 0, g.encoding()));
}

LabeledMultigraph strip_isolated(const LabeledMultigraph& g) {
  if (g.num_labels() != 0) {
    throw std::invalid_argument("strip_isolated: graph has labeled vertices");
  }
  std::vector<int> keep;
  for (int v = 1; v <= g.num_vertices(); ++v) {
    if (g.vertex_degree(v) > 0) keep.push_back(v - 1);
  }
  const int n = static_cast<int>(keep.size());
  std::vector<std::uint32_t> m(pair_count(n), 0);
  for (int b = 1; b < n; ++b) {
    for (int a = 0; a < b; ++a) m[LabeledMultigraph::pair_index(a, b)] = at(g.encoding(), keep[a], keep[b]);
  }
  return canonical_form(LabeledMultigraph::from_encoding(n, 0, std::move(m)));
}

LabeledMultigraph permute_labels(const LabeledMultigraph& g, std::span<const int> sigma) {
  const int k = g.num_labels();
  if (static_cast<int>(sigma.size()) != k) {
    throw std::invalid_argument("permute_labels: permutation length differs from label count");
  }
  std::vector<bool> seen(k, false);
  for (int s : sigma) {
    if (s < 1 || s > k || seen[s - 1]) {
      throw std::invalid_argument("permute_labels: not a permutation of 1..k");
    }
    seen[s - 1] = true;
  }
  auto target = [&](int v0) { return v0 < k ? sigma[v0] - 1 : v0; };
  std::vector<std::uint32_t> m(g.encoding().size(), 0);
  for (int v = 1; v < g.num_vertices(); ++v) {
    for (int u = 0; u < v; ++u) {
      int a = target(u), b = target(v);
      if (a > b) std::swap(a, b);
      m[LabeledMultigraph::pair_index(a, b)] = at(g.encoding(), u, v);
    }
  }
  return canonical_form(LabeledMultigraph::from_encoding(g.num_vertices(), k, std::move(m)));
}

LabeledMultigraph clamp_simple(const LabeledMultigraph& g) {
  auto m = g.encoding();
  for (auto& x : m) x = std::min<std::uint32_t>(x, 1);
  return canonical_form(LabeledMultigraph::from_encoding(g.num_vertices(), g.num_labels(), std::move(m)));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class GraphLexer {
 public:
  explicit GraphLexer(std::string_view text) : text_(text.substr(0, text.find('#'))) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  void expect_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) fail("expected '" + std::string(w) + "'");
    pos_ += w.size();
  }

  unsigned long number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer");
    if (pos_ - start > 9) fail_at("integer too large", start);
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LabeledMultigraph parse_graph(std::string_view text) {
  GraphLexer lex(text);
  lex.expect_word("MG");
  const std::size_t n_pos = lex.pos();
  const auto n = lex.number();
  const std::size_t k_pos = lex.pos();
  const auto k = lex.number();
  if (n > static_cast<unsigned long>(kMaxVertices)) {
    lex.fail_at("graph with " + std::to_string(n) + " vertices exceeds the limit of " +
                    std::to_string(kMaxVertices),
                n_pos);
  }
  if (k > n) lex.fail_at("label count exceeds vertex count", k_pos);
  lex.expect(':');

  std::vector<Edge> edges;
  if (!lex.at_end()) {
    do {
      const std::size_t edge_pos = lex.pos();
      const auto u = lex.number();
      lex.expect('-');
      const auto v = lex.number();
      unsigned long m = 1;
      if (lex.consume('*')) {
        const std::size_t m_pos = lex.pos();
        m = lex.number();
        if (m < 1) lex.fail_at("edge multiplicity must be at least 1", m_pos);
      }
      if (u < 1 || u > n || v < 1 || v > n) lex.fail_at("vertex out of range 1.." + std::to_string(n), edge_pos);
      if (u == v) lex.fail_at("loop edge " + std::to_string(u) + "-" + std::to_string(v), edge_pos);
      edges.push_back({static_cast<int>(u), static_cast<int>(v), static_cast<std::uint32_t>(m)});
    } while (lex.consume(','));
    if (!lex.at_end()) lex.fail("unexpected trailing input");
  }
  return canonical_form(LabeledMultigraph::from_edges(static_cast<int>(n), static_cast<int>(k), edges));
}

std::string format_graph(const LabeledMultigraph& g) {
  std::string out = "MG " + std::to_string(g.num_vertices()) + " " + std::to_string(g.num_labels()) + " :";
  bool first = true;
  for (const Edge& e : canonical_form(g).edges()) {
    out += first ? " " : ",";
    first = false;
    out += std::to_string(e.u) + "-" + std::to_string(e.v);
    if (e.multiplicity != 1) out += "*" + std::to_string(e.multiplicity);
  }
  return out;
}

// ---------------------------------------------------------------------------

LabeledMultigraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) edges.push_back({u, v, 1});
  }
  return canonical_form(LabeledMultigraph::from_edges(n, 0, edges));
}

LabeledMultigraph edge_graph() { return multi_edge_graph(1); }

LabeledMultigraph multi_edge_graph(std::uint32_t j) {
  if (j == 0) return LabeledMultigraph(2, 0);
  const Edge e{1, 2, j};
  return LabeledMultigraph::from_edges(2, 0, std::span(&e, 1));
}

LabeledMultigraph cherry_graph() {
  const Edge edges[] = {{1, 2, 1}, {1, 3, 1}};
  return canonical_form(LabeledMultigraph::from_edges(3, 0, edges));
}

LabeledMultigraph matching_graph(int count) {
  std::vector<Edge> edges;
  for (int i = 0; i < count; ++i) edges.push_back({2 * i + 1, 2 * i + 2, 1});
  return canonical_form(LabeledMultigraph::from_edges(2 * count, 0, edges));
}

}  // namespace qgraph
