#include "qgraph/certificates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace qgraph {

// ---------------------------------------------------------------------------
// Perturbations

PerturbSpec PerturbSpec::plain_eps(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("perturbation needs eps > 0");
  return {Kind::kEps, eps, 0, 0};
}

PerturbSpec PerturbSpec::slow(const Rational& eps, unsigned r) {
  if (eps <= 0) throw std::invalid_argument("perturbation needs eps > 0");
  return {Kind::kSlow, eps, 0, r};
}

PerturbSpec PerturbSpec::bounded(const Rational& eps, const Rational& d, unsigned r) {
  if (eps <= 0) throw std::invalid_argument("perturbation needs eps > 0");
  if (d < 1) throw std::invalid_argument("perturbation needs d >= 1");
  return {Kind::kBounded, eps, d, r};
}

QuantumGraph apply_perturbation(const QuantumGraph& target, const PerturbSpec& perturb) {
  switch (perturb.kind) {
    case PerturbSpec::Kind::kNone:
      return target;
    case PerturbSpec::Kind::kEps: {
      QuantumGraph out = target;
      out.add_term(identity_graph(target.num_labels()), perturb.eps);
      return out;
    }
    case PerturbSpec::Kind::kSlow:
      return perturb_slow(target, perturb.eps, perturb.r);
    case PerturbSpec::Kind::kBounded:
      return perturb_bounded(target, perturb.eps, perturb.d, perturb.r);
  }
  return target;
}

std::string format_perturb(const PerturbSpec& p) {
  switch (p.kind) {
    case PerturbSpec::Kind::kNone:
      return "none";
    case PerturbSpec::Kind::kEps:
      return "eps:" + format_rational(p.eps);
    case PerturbSpec::Kind::kSlow:
      return "slow:" + format_rational(p.eps) + ":" + std::to_string(p.r);
    case PerturbSpec::Kind::kBounded:
      return "bounded:" + format_rational(p.eps) + ":" + format_rational(p.d) + ":" + std::to_string(p.r);
  }
  return "none";
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

unsigned parse_order(std::string_view text, std::size_t offset) {
  const Rational r = parse_rational(text);
  if (r.get_den() != 1 || r < 0 || r > 30) throw ParseError("perturbation order must be an integer in 0..30", offset);
  return static_cast<unsigned>(r.get_num().get_ui());
}

}  // namespace

PerturbSpec parse_perturb(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts[0];
  const std::size_t arg = kind.size() + 1;
  try {
    if (kind == "none" && parts.size() == 1) return PerturbSpec::none();
    if (kind == "eps" && parts.size() == 2) return PerturbSpec::plain_eps(parse_rational(parts[1]));
    if (kind == "slow" && parts.size() == 3) {
      return PerturbSpec::slow(parse_rational(parts[1]), parse_order(parts[2], arg + parts[1].size() + 1));
    }
    if (kind == "bounded" && parts.size() == 4) {
      return PerturbSpec::bounded(parse_rational(parts[1]), parse_rational(parts[2]),
                                  parse_order(parts[3], arg + parts[1].size() + parts[2].size() + 2));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), arg);
  }
  throw ParseError("expected none, eps:<q>, slow:<q>:<r> or bounded:<q>:<d>:<r>", 0);
}

// ---------------------------------------------------------------------------
// Sums of squares

namespace {

// Fully labeled simple graphs on k <= 6 vertices as bitmasks over the
// column-major pair order; gluing is bitwise or. Returns false when some
// root does not fit, leaving the general product to the caller.
bool expand_labeled_simple(const SosCert& cert, QuantumGraph& sigma) {
  if (cert.mode != Mode::kSimple || cert.k > 6) return false;
  const int pairs = cert.k * (cert.k - 1) / 2;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> roots;
  for (const auto& s : cert.summands) {
    if (s.weight == 0) continue;
    auto& root = roots.emplace_back();
    for (const auto& [g, c] : s.root.terms()) {
      if (g.grade() != 0) return false;
      std::uint32_t mask = 0;
      for (int t = 0; t < pairs; ++t) {
        if (g.encoding()[t] != 0) mask |= 1u << t;
      }
      root.emplace_back(mask, c);
    }
  }
  const std::size_t points = std::size_t{1} << pairs;
  std::vector<Rational> acc(points);
  std::vector<__int128> small(points);
  std::size_t r = 0;
  Rational wc;
  for (const auto& s : cert.summands) {
    if (s.weight == 0) continue;
    const auto& root = roots[r++];
    // Small integer roots (the indicator polynomials) square in machine integers.
    const bool integral = std::all_of(root.begin(), root.end(), [](const auto& t) {
      return t.second.get_den() == 1 && abs(t.second.get_num()) <= 32768;
    });
    if (integral) {
      std::fill(small.begin(), small.end(), 0);
      std::vector<long> c(root.size());
      for (std::size_t i = 0; i < root.size(); ++i) c[i] = root[i].second.get_num().get_si();
      for (std::size_t i = 0; i < root.size(); ++i) {
        small[root[i].first] += static_cast<__int128>(c[i]) * c[i];
        for (std::size_t j = i + 1; j < root.size(); ++j) {
          small[root[i].first | root[j].first] += 2 * static_cast<__int128>(c[i]) * c[j];
        }
      }
      for (std::size_t m = 0; m < points; ++m) {
        if (small[m] == 0) continue;
        const bool negative = small[m] < 0;
        auto mag = static_cast<unsigned __int128>(negative ? -small[m] : small[m]);
        Integer v(static_cast<unsigned long>(mag >> 64));
        v <<= 64;
        v += static_cast<unsigned long>(mag & ~std::uint64_t{0});
        if (negative) v = -v;
        acc[m] += s.weight * Rational(v);
      }
      continue;
    }
    for (std::size_t i = 0; i < root.size(); ++i) {
      wc = s.weight * root[i].second;
      acc[root[i].first] += wc * root[i].second;
      wc *= 2;
      for (std::size_t j = i + 1; j < root.size(); ++j) acc[root[i].first | root[j].first] += wc * root[j].second;
    }
  }
  for (std::uint32_t mask = 0; mask < acc.size(); ++mask) {
    if (acc[mask] == 0) continue;
    std::vector<std::uint32_t> enc(pairs);
    for (int t = 0; t < pairs; ++t) enc[t] = (mask >> t) & 1u;
    sigma.add_term(LabeledMultigraph::from_encoding(cert.k, cert.k, std::move(enc)), acc[mask]);
  }
  return true;
}

}  // namespace

QuantumGraph expand(const SosCert& cert) {
  QuantumGraph sigma(cert.k, cert.mode);
  for (const auto& s : cert.summands) {
    if (s.weight < 0) throw std::invalid_argument("sum of squares certificate has a negative weight");
    if (s.root.num_labels() != cert.k || s.root.mode() != cert.mode) {
      throw std::invalid_argument("certificate summand does not match the certificate's k and mode");
    }
    if (cert.restricted_degree0) {
      for (const auto& [g, c] : s.root.terms()) {
        if (g.grade() != 0) throw std::invalid_argument("degree-0 certificate has a summand with unlabeled vertices");
      }
    }
  }
  if (expand_labeled_simple(cert, sigma)) return sigma;
  for (const auto& s : cert.summands) {
    if (s.weight == 0 || s.root.is_zero()) continue;
    sigma += (s.root * s.root) * s.weight;
  }
  return sigma;
}

VerifyResult verify_sos(const SosCert& cert, const QuantumGraph& target, const PerturbSpec& perturb) {
  if (cert.mode != target.mode()) throw std::invalid_argument("certificate and target modes differ");
  VerifyResult result;
  result.difference = iso_normal_form(expand(cert)) - iso_normal_form(apply_perturbation(target, perturb));
  result.accepted = result.difference.is_zero();
  return result;
}

// ---------------------------------------------------------------------------
// Preorder certificates

NonPsdGramError::NonPsdGramError(std::size_t block, std::vector<Rational> witness, Rational value)
    : std::runtime_error("Gram matrix of block " + std::to_string(block + 1) + " is not positive semidefinite"),
      block_(block),
      witness_(std::move(witness)),
      value_(std::move(value)) {}

namespace {

Poly generator_product(const std::vector<Generator>& gens, const Rational& d, int k) {
  Poly out(1);
  for (const auto& g : gens) {
    if (g.i < 1 || g.j <= g.i || g.j > k) throw std::invalid_argument("generator pair out of range");
    const Poly z(Variable::z(g.i, g.j));
    out = out * (g.plus ? Poly(d) + z : Poly(d) - z);
  }
  return out;
}

void check_z_monomial(const Monomial& m, int k) {
  for (const auto& [v, e] : m.factors()) {
    if (v.kind != Variable::Kind::kZ || v.j > k) {
      throw std::invalid_argument("basis monomial " + format_monomial(m) + " is not a z-monomial for this k");
    }
  }
}

}  // namespace

Poly expand(const PreorderCert& cert) {
  if (cert.k < 2) throw std::invalid_argument("preorder certificate needs k >= 2");
  if (cert.d < 1) throw std::invalid_argument("preorder certificate needs d >= 1");
  Poly sigma;
  for (std::size_t b = 0; b < cert.blocks.size(); ++b) {
    const auto& block = cert.blocks[b];
    const std::size_t n = block.basis.size();
    if (block.gram.rows() != n || block.gram.cols() != n) {
      throw std::invalid_argument("block " + std::to_string(b + 1) + ": Gram matrix size does not match the basis");
    }
    if (!block.gram.is_symmetric()) {
      throw std::invalid_argument("block " + std::to_string(b + 1) + ": Gram matrix is not symmetric");
    }
    for (const auto& m : block.basis) check_z_monomial(m, cert.k);
    PsdCheck check = psd_check_exact(block.gram);
    if (!check.psd) throw NonPsdGramError(b, std::move(check.witness), check.witness_value);
    Poly quadratic;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (block.gram(r, c) != 0) quadratic.add_term(block.basis[r] * block.basis[c], block.gram(r, c));
      }
    }
    sigma += quadratic * generator_product(block.gens, cert.d, cert.k);
  }
  return sigma;
}

VerifyResult verify_preorder(const PreorderCert& cert, const QuantumGraph& target, const PerturbSpec& perturb) {
  if (target.mode() != Mode::kMulti) throw std::invalid_argument("preorder certificates need a multigraph target");
  VerifyResult result;
  const QuantumGraph sigma = from_z_poly(expand(cert), cert.k, Mode::kMulti);
  result.difference = iso_normal_form(sigma) - iso_normal_form(apply_perturbation(target, perturb));
  result.accepted = result.difference.is_zero();
  return result;
}

std::string to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kCertificate:
      return "certificate";
    case SearchStatus::kInfeasible:
      return "infeasible";
    case SearchStatus::kIndeterminate:
      return "indeterminate";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Simple-mode search on the variety {0,1}^{C(k,2)}

namespace {

constexpr int kMaxSimpleSearchLabels = 5;

std::vector<Variable> pair_variables(int k) {
  std::vector<Variable> vars;  // column-major: z12, z13, z23, z14, ...
  for (int j = 2; j <= k; ++j) {
    for (int i = 1; i < j; ++i) vars.push_back(Variable::z(i, j));
  }
  return vars;
}

std::size_t pair_slot(const Variable& v) { return LabeledMultigraph::pair_index(v.i - 1, v.j - 1); }

}  // namespace

Poly symmetrized_lift(const QuantumGraph& target, int k) {
  if (target.num_labels() != 0) throw std::invalid_argument("target must be unlabeled");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  QuantumGraph lifted(k, target.mode());
  for (const auto& [f, c] : target.terms()) {
    if (f.num_vertices() > k) {
      throw std::invalid_argument("target graph " + format_graph(f) + " has more than k = " + std::to_string(k) +
                                  " vertices");
    }
    std::vector<std::uint32_t> enc = f.encoding();
    enc.resize(static_cast<std::size_t>(k) * (k - 1) / 2, 0);
    lifted.add_term(LabeledMultigraph::from_encoding(k, k, std::move(enc)), c);
  }
  return to_z_poly(reynolds(lifted));
}

SimpleSearchResult sos_search_simple(const QuantumGraph& target, int k, const Rational& eps) {
  if (target.mode() != Mode::kSimple) throw std::invalid_argument("sos_search_simple needs a simple-mode target");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (k > kMaxSimpleSearchLabels) {
    throw SizeLimitError("sos_search_simple supports k <= " + std::to_string(kMaxSimpleSearchLabels));
  }
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  const Poly b = symmetrized_lift(target, k);
  const std::vector<Variable> vars = pair_variables(k);
  const std::size_t npairs = vars.size();

  // Terms as bitmasks over pairs.
  std::vector<std::pair<std::uint32_t, Rational>> terms;
  for (const auto& [m, c] : b.terms()) {
    std::uint32_t mask = 0;
    for (const auto& [v, e] : m.factors()) mask |= 1u << pair_slot(v);
    terms.emplace_back(mask, c);
  }
  const std::uint32_t npoints = 1u << npairs;
  std::vector<Rational> values(npoints);
  SimpleSearchResult result;
  std::uint32_t argmin = 0;
  for (std::uint32_t p = 0; p < npoints; ++p) {
    Rational v = eps;
    for (const auto& [mask, c] : terms) {
      if ((mask & p) == mask) v += c;
    }
    if (p == 0 || v < values[argmin]) argmin = p;
    values[p] = std::move(v);
  }
  result.min_value = values[argmin];
  for (std::size_t t = 0; t < npairs; ++t) result.witness_point.push_back((argmin >> t) & 1u);
  if (result.min_value < 0) {
    result.status = SearchStatus::kInfeasible;
    return result;
  }

  SosCert cert;
  cert.k = k;
  cert.mode = Mode::kSimple;
  cert.restricted_degree0 = true;
  cert.perturb = eps > 0 ? PerturbSpec::plain_eps(eps) : PerturbSpec::none();
  for (std::uint32_t p = 0; p < npoints; ++p) {
    if (values[p] == 0) continue;
    Poly delta(1);
    for (std::size_t t = 0; t < npairs; ++t) {
      const Poly z(vars[t]);
      delta = delta * (((p >> t) & 1u) ? z : Poly(1) - z);
    }
    cert.summands.push_back({values[p], from_z_poly(delta, k, Mode::kSimple)});
  }
  if (verify_sos(cert, target, cert.perturb).accepted) {
    result.status = SearchStatus::kCertificate;
    result.cert = std::move(cert);
  } else {
    result.status = SearchStatus::kIndeterminate;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Gram searches

namespace {

std::vector<Monomial> monomials_up_to(const std::vector<Variable>& vars, int degree) {
  std::vector<Monomial> out{Monomial()};
  std::vector<Monomial> frontier{Monomial()};
  for (int d = 1; d <= degree; ++d) {
    std::set<Monomial, GrlexDescending> next;
    for (const auto& m : frontier) {
      for (const auto& v : vars) next.insert(m * Monomial(v));
    }
    frontier.assign(next.begin(), next.end());
    out.insert(out.end(), frontier.begin(), frontier.end());
  }
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return grlex_compare(a, b) < 0; });
  return out;
}

// Unlabeled, isolate-free class of the fully labeled multigraph z^e.
class ClassCache {
 public:
  explicit ClassCache(int k) : k_(k) {}

  const LabeledMultigraph& of(const Monomial& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    std::vector<Edge> edges;
    for (const auto& [v, e] : m.factors()) edges.push_back({v.i, v.j, e});
    LabeledMultigraph g = strip_isolated(unlabel(LabeledMultigraph::from_edges(k_, k_, edges)));
    return cache_.emplace(m, std::move(g)).first->second;
  }

 private:
  int k_;
  std::map<Monomial, LabeledMultigraph, GrlexDescending> cache_;
};

struct GramBlock {
  std::vector<Generator> gens;
  std::vector<Monomial> basis;
  Poly multiplier;
};

struct GramSystem {
  SdpProblem problem;
  std::vector<LabeledMultigraph> classes;  // one per constraint
  std::vector<LabeledMultigraph> unreachable;
};

GramSystem assemble(const std::vector<GramBlock>& blocks, const QuantumGraph& normal_target, int k) {
  ClassCache cache(k);
  std::map<LabeledMultigraph, std::map<std::tuple<int, int, int>, Rational>> rows;
  GramSystem sys;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    sys.problem.block_dims.push_back(static_cast<int>(blk.basis.size()));
    for (std::size_t r = 0; r < blk.basis.size(); ++r) {
      for (std::size_t c = r; c < blk.basis.size(); ++c) {
        const Monomial base = blk.basis[r] * blk.basis[c];
        for (const auto& [mu, coef] : blk.multiplier.terms()) {
          auto& slot = rows[cache.of(base * mu)][{static_cast<int>(b), static_cast<int>(r), static_cast<int>(c)}];
          slot += coef;
        }
      }
    }
  }
  for (const auto& [g, c] : normal_target.terms()) {
    if (!rows.contains(g)) sys.unreachable.push_back(g);
  }
  for (const auto& [g, entries] : rows) {
    SdpConstraint con;
    for (const auto& [key, v] : entries) {
      if (v != 0) con.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    }
    con.rhs = normal_target.coefficient(g);
    if (con.entries.empty()) {
      if (con.rhs != 0) sys.unreachable.push_back(g);
      continue;
    }
    sys.problem.constraints.push_back(std::move(con));
    sys.classes.push_back(g);
  }
  return sys;
}

QuantumGraph monomial_graph(const Monomial& m, int k) { return from_z_poly(Poly(m, 1), k, Mode::kMulti); }

// sum_t D_t (sum_i L(i,t) m_perm[i])^2 from the exact decomposition of gram.
void append_squares(const RationalMatrix& gram, const std::vector<Monomial>& basis, int k,
                    std::vector<SosSummand>& out) {
  const PsdCheck check = psd_check_exact(gram);
  if (!check.psd) throw std::logic_error("append_squares: Gram matrix is not PSD");
  const auto& ldl = check.decomposition;
  for (std::size_t t = 0; t < basis.size(); ++t) {
    if (ldl.d[t] == 0) continue;
    QuantumGraph root(k, Mode::kMulti);
    for (std::size_t i = t; i < basis.size(); ++i) {
      if (ldl.l(i, t) != 0) root += monomial_graph(basis[ldl.perm[i]], k) * ldl.l(i, t);
    }
    out.push_back({ldl.d[t], std::move(root)});
  }
}

std::string describe_numeric(const SdpSolution& s) {
  std::ostringstream out;
  out << "sdp " << to_string(s.status) << " after " << s.iterations << " iterations; margin " << s.margin
      << ", primal residual " << s.primal_residual << ", dual residual " << s.dual_residual << ", gap " << s.gap;
  return out.str();
}

void check_multi_target(const QuantumGraph& target, int k, int max_degree) {
  if (target.mode() != Mode::kMulti) throw std::invalid_argument("this search needs a multigraph-mode target");
  if (target.num_labels() != 0) throw std::invalid_argument("target must be unlabeled");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (max_degree < 0) throw std::invalid_argument("degree must be nonnegative");
}

template <class Finish>
MultiSearchResult run_gram_search(const std::vector<GramBlock>& blocks, const QuantumGraph& normal_target, int k,
                                  const SdpOptions& options, Finish finish) {
  MultiSearchResult result;
  GramSystem sys = assemble(blocks, normal_target, k);
  result.gram_dimension = sys.problem.total_dimension();
  result.constraint_count = static_cast<int>(sys.problem.constraints.size());
  if (!sys.unreachable.empty()) {
    result.status = SearchStatus::kInfeasible;
    result.diagnostics = "no product of basis elements produces " + format_graph(sys.unreachable.front());
    return result;
  }
  result.numeric = sdp_solve(sys.problem, options);
  result.diagnostics = describe_numeric(result.numeric);
  switch (result.numeric.status) {
    case SdpStatus::kInfeasibleRay:
      result.status = result.numeric.margin > kNotSosMargin ? SearchStatus::kInfeasible : SearchStatus::kIndeterminate;
      return result;
    case SdpStatus::kIndeterminate:
      result.status = SearchStatus::kIndeterminate;
      return result;
    case SdpStatus::kFeasible:
      break;
  }
  auto exact = rationalize_gram(sys.problem, result.numeric.primal);
  if (!exact) {
    result.status = SearchStatus::kIndeterminate;
    result.diagnostics += "; rationalization failed";
    return result;
  }
  if (finish(*exact, result)) {
    result.status = SearchStatus::kCertificate;
  } else {
    result.status = SearchStatus::kIndeterminate;
    result.diagnostics += "; exact verification rejected the rounded certificate";
  }
  return result;
}

}  // namespace

MultiSearchResult sos_search_multi(const QuantumGraph& target, int k, int max_degree, const PerturbSpec& perturb,
                                   const SdpOptions& options) {
  check_multi_target(target, k, max_degree);
  const QuantumGraph normal = iso_normal_form(apply_perturbation(target, perturb));
  std::vector<GramBlock> blocks{{{}, monomials_up_to(pair_variables(k), max_degree), Poly(1)}};
  return run_gram_search(blocks, normal, k, options, [&](const std::vector<RationalMatrix>& grams,
                                                          MultiSearchResult& result) {
    SosCert cert;
    cert.k = k;
    cert.mode = Mode::kMulti;
    cert.perturb = perturb;
    cert.restricted_degree0 = true;
    append_squares(grams[0], blocks[0].basis, k, cert.summands);
    if (!verify_sos(cert, target, perturb).accepted) return false;
    result.cert = std::move(cert);
    return true;
  });
}

namespace {

// Orbit representatives of generator subsets under label permutations.
std::vector<std::vector<Generator>> generator_orbits(int k, int max_size) {
  std::vector<Generator> all;
  for (int j = 2; j <= k; ++j) {
    for (int i = 1; i < j; ++i) {
      all.push_back({i, j, true});
      all.push_back({i, j, false});
    }
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 1);
  do {
    perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  std::set<std::vector<Generator>> reps;
  const std::size_t n = all.size();
  if (n > 20) throw SizeLimitError("preorder search supports at most 10 label pairs");
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    std::vector<Generator> best;
    for (const auto& p : perms) {
      std::vector<Generator> image;
      for (std::size_t t = 0; t < n; ++t) {
        if (!((mask >> t) & 1u)) continue;
        int a = p[all[t].i - 1];
        int b = p[all[t].j - 1];
        image.push_back({std::min(a, b), std::max(a, b), all[t].plus});
      }
      std::sort(image.begin(), image.end());
      if (best.empty() || image < best) best = std::move(image);
    }
    reps.insert(std::move(best));
  }
  std::vector<std::vector<Generator>> out(reps.begin(), reps.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace

MultiSearchResult preorder_search(const QuantumGraph& target, int k, int max_degree, const Rational& d,
                                  const PerturbSpec& perturb, const SdpOptions& options) {
  check_multi_target(target, k, max_degree);
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  const QuantumGraph normal = iso_normal_form(apply_perturbation(target, perturb));
  const std::vector<Variable> vars = pair_variables(k);
  std::vector<GramBlock> blocks;
  for (auto& gens : generator_orbits(k, 2 * max_degree)) {
    const int basis_degree = (2 * max_degree - static_cast<int>(gens.size())) / 2;
    Poly multiplier = generator_product(gens, d, k);
    blocks.push_back({std::move(gens), monomials_up_to(vars, basis_degree), std::move(multiplier)});
  }
  return run_gram_search(blocks, normal, k, options, [&](const std::vector<RationalMatrix>& grams,
                                                          MultiSearchResult& result) {
    PreorderCert cert;
    cert.k = k;
    cert.d = d;
    cert.perturb = perturb;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      bool zero = true;
      for (std::size_t r = 0; r < grams[b].rows() && zero; ++r) {
        for (std::size_t c = 0; c < grams[b].cols(); ++c) {
          if (grams[b](r, c) != 0) {
            zero = false;
            break;
          }
        }
      }
      if (zero) continue;
      cert.blocks.push_back({blocks[b].gens, blocks[b].basis, grams[b]});
    }
    if (!verify_preorder(cert, target, perturb).accepted) return false;
    result.preorder = std::move(cert);
    return true;
  });
}

// ---------------------------------------------------------------------------
// SOS test for polynomials

namespace {

// Exact phase-I simplex (Bland's rule): is there lambda >= 0 with
// a * lambda = rhs? rhs must be nonnegative.
bool feasible_exact(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& rhs) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  // Tableau columns: original, artificials, rhs.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<Rational>> t(rows + 1, std::vector<Rational>(width));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[r][c] = a[r][c];
    t[r][cols + r] = 1;
    t[r][width - 1] = rhs[r];
    basis[r] = cols + r;
  }
  // Objective row: minimize the sum of artificials, stored as reduced costs.
  for (std::size_t c = 0; c < width; ++c) {
    Rational s = 0;
    for (std::size_t r = 0; r < rows; ++r) s += t[r][c];
    t[rows][c] = c >= cols && c < cols + rows ? Rational(0) : -s;
  }
  while (true) {
    std::size_t enter = width;
    for (std::size_t c = 0; c + 1 < width; ++c) {
      if (t[rows][c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter] <= 0) continue;
      Rational ratio = t[r][width - 1] / t[r][enter];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) break;  // unbounded cannot happen in phase I
    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      const Rational f = t[r][enter];
      for (std::size_t c = 0; c < width; ++c) t[r][c] -= f * t[leave][c];
    }
    basis[leave] = enter;
  }
  return t[rows][width - 1] == 0;
}

}  // namespace

SosPolyResult is_sos_poly(const Poly& p, const SdpOptions& options) {
  SosPolyResult result;
  if (p.is_zero()) {
    result.status = SearchStatus::kCertificate;
    result.gram = RationalMatrix(0, 0);
    return result;
  }
  const int degree = p.total_degree();
  if (degree % 2 != 0) throw std::invalid_argument("is_sos_poly: odd degree " + std::to_string(degree));
  const std::vector<Variable> vars = p.variables();

  // Newton polytope of p: exponent vectors of its support.
  std::vector<std::vector<Rational>> hull(vars.size() + 1, std::vector<Rational>(p.size()));
  {
    std::size_t col = 0;
    for (const auto& [m, c] : p.terms()) {
      for (std::size_t v = 0; v < vars.size(); ++v) hull[v][col] = m.exponent(vars[v]);
      hull[vars.size()][col] = 1;
      ++col;
    }
  }
  for (const auto& m : monomials_up_to(vars, degree / 2)) {
    std::vector<Rational> rhs(vars.size() + 1);
    for (std::size_t v = 0; v < vars.size(); ++v) rhs[v] = 2 * m.exponent(vars[v]);
    rhs[vars.size()] = 1;
    if (feasible_exact(hull, rhs)) result.basis.push_back(m);
  }

  const std::size_t n = result.basis.size();
  std::map<Monomial, std::map<std::pair<int, int>, Rational>, GrlexDescending> rows;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) rows[result.basis[r] * result.basis[c]][{r, c}] += 1;
  }
  for (const auto& [m, c] : p.terms()) {
    if (!rows.contains(m)) {
      result.status = SearchStatus::kInfeasible;
      result.margin = std::abs(to_double(c));
      result.dual[m] = c > 0 ? -1.0 : 1.0;
      result.diagnostics = "monomial " + format_monomial(m) + " is not a product of basis monomials";
      return result;
    }
  }
  SdpProblem problem;
  problem.block_dims.push_back(static_cast<int>(n));
  std::vector<Monomial> row_monomials;
  for (const auto& [m, entries] : rows) {
    SdpConstraint con;
    for (const auto& [rc, v] : entries) con.entries.push_back({0, rc.first, rc.second, v});
    con.rhs = p.coefficient(m);
    problem.constraints.push_back(std::move(con));
    row_monomials.push_back(m);
  }
  const SdpSolution sol = sdp_solve(problem, options);
  result.diagnostics = describe_numeric(sol);
  if (sol.status == SdpStatus::kInfeasibleRay) {
    result.margin = sol.margin;
    for (std::size_t i = 0; i < row_monomials.size(); ++i) result.dual[row_monomials[i]] = sol.dual[i];
    result.status = sol.margin > kNotSosMargin ? SearchStatus::kInfeasible : SearchStatus::kIndeterminate;
    return result;
  }
  if (sol.status == SdpStatus::kIndeterminate) return result;
  auto exact = rationalize_gram(problem, sol.primal);
  if (!exact) {
    result.diagnostics += "; rationalization failed";
    return result;
  }
  Poly check;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) check.add_term(result.basis[r] * result.basis[c], (*exact)[0](r, c));
  }
  if (check != p) {
    result.diagnostics += "; exact verification failed";
    return result;
  }
  result.gram = std::move((*exact)[0]);
  result.status = SearchStatus::kCertificate;
  return result;
}

}  // namespace qgraph
