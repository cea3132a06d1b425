#include "qgraph/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qgraph {

int SdpProblem::total_dimension() const {
  int total = 0;
  for (int d : block_dims) total += d;
  return total;
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::kFeasible:
      return "feasible";
    case SdpStatus::kInfeasibleRay:
      return "infeasible";
    case SdpStatus::kIndeterminate:
      return "indeterminate";
  }
  return "?";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Blocks = std::vector<MatrixXd>;

struct Entry {
  int block;
  int row;
  int col;
  double value;
};

struct Row {
  std::vector<Entry> entries;
  double trace = 0;
};

void validate(const SdpProblem& p, const SdpOptions& options) {
  for (int d : p.block_dims) {
    if (d < 1) throw std::invalid_argument("sdp: block dimensions must be positive");
  }
  if (p.total_dimension() > options.max_dim) {
    throw SizeLimitError("sdp: total dimension " + std::to_string(p.total_dimension()) + " exceeds the cap " +
                         std::to_string(options.max_dim));
  }
  for (const auto& c : p.constraints) {
    for (const auto& e : c.entries) {
      if (e.block < 0 || e.block >= static_cast<int>(p.block_dims.size())) {
        throw std::invalid_argument("sdp: constraint refers to a missing block");
      }
      const int d = p.block_dims[e.block];
      if (e.row < 0 || e.col < 0 || e.row >= d || e.col >= d || e.row > e.col) {
        throw std::invalid_argument("sdp: constraint entry out of the block's upper triangle");
      }
    }
  }
}

double inner(const std::vector<Entry>& entries, const Blocks& x) {
  double s = 0;
  for (const auto& e : entries) {
    const double v = x[e.block](e.row, e.col);
    s += e.row == e.col ? e.value * v : e.value * (v + x[e.block](e.col, e.row));
  }
  return s;
}

void add_adjoint(const std::vector<Entry>& entries, double scale, Blocks& out) {
  for (const auto& e : entries) {
    out[e.block](e.row, e.col) += scale * e.value;
    if (e.row != e.col) out[e.block](e.col, e.row) += scale * e.value;
  }
}

Blocks zeros_like(const std::vector<int>& dims) {
  Blocks out;
  for (int d : dims) out.push_back(MatrixXd::Zero(d, d));
  return out;
}

double frob_inner(const Blocks& a, const Blocks& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i].array() * b[i].array()).sum();
  return s;
}

void symmetrize(MatrixXd& a) {
  MatrixXd t = a.transpose();
  a = 0.5 * (a + t);
}

double frob_norm(const Blocks& a) { return std::sqrt(frob_inner(a, a)); }

// Largest step t in (0, inf] keeping x + t dx positive semidefinite.
double max_step(const Blocks& x, const Blocks& dx) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    Eigen::LLT<MatrixXd> llt(x[i]);
    if (llt.info() != Eigen::Success) return 0;
    MatrixXd linv_dx = llt.matrixL().solve(dx[i]);
    MatrixXd s = llt.matrixL().solve(linv_dx.transpose());
    symmetrize(s);
    const double lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (lo < 0) best = std::min(best, -1.0 / lo);
  }
  return best;
}

// Greedy pivoted Cholesky on the constraint Gram matrix: indices of a
// maximal linearly independent subset of constraints.
std::vector<int> independent_rows(const MatrixXd& gram) {
  const int m = static_cast<int>(gram.rows());
  std::vector<int> kept;
  MatrixXd l = MatrixXd::Zero(m, m);
  VectorXd diag = gram.diagonal();
  std::vector<bool> used(m, false);
  for (int step = 0; step < m; ++step) {
    int best = -1;
    for (int i = 0; i < m; ++i) {
      if (!used[i] && (best < 0 || diag(i) > diag(best))) best = i;
    }
    if (best < 0 || diag(best) <= 1e-10 * std::max(1.0, gram.diagonal().maxCoeff())) break;
    used[best] = true;
    const double pivot = std::sqrt(diag(best));
    const int col = static_cast<int>(kept.size());
    for (int i = 0; i < m; ++i) {
      if (used[i] && i != best) continue;
      double v = gram(i, best);
      for (int c = 0; c < col; ++c) v -= l(i, c) * l(best, c);
      l(i, col) = v / pivot;
      if (i != best) diag(i) -= l(i, col) * l(i, col);
    }
    kept.push_back(best);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& o) : problem_(p), options_(o) {}

  SdpSolution run();

 private:
  MatrixXd schur(const Blocks& w, const Blocks& zinv) const;
  VectorXd apply(const Blocks& x) const;
  Blocks adjoint(const VectorXd& y) const;

  const SdpProblem& problem_;
  const SdpOptions& options_;
  std::vector<int> dims_;  // original blocks plus the 1x1 margin slack
  std::vector<Row> rows_;  // scaled, independent constraints, then the cap row
  VectorXd b_;
  VectorXd t_;
};

VectorXd Solver::apply(const Blocks& x) const {
  VectorXd out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out(i) = inner(rows_[i].entries, x);
  return out;
}

Blocks Solver::adjoint(const VectorXd& y) const {
  Blocks out = zeros_like(dims_);
  for (std::size_t i = 0; i < rows_.size(); ++i) add_adjoint(rows_[i].entries, y(i), out);
  return out;
}

MatrixXd Solver::schur(const Blocks& w, const Blocks& zinv) const {
  const int m = static_cast<int>(rows_.size());
  std::vector<std::vector<int>> touching(dims_.size());
  for (int i = 0; i < m; ++i) {
    for (const auto& e : rows_[i].entries) {
      if (touching[e.block].empty() || touching[e.block].back() != i) touching[e.block].push_back(i);
    }
  }
  MatrixXd out = MatrixXd::Zero(m, m);
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    const int d = dims_[b];
    for (int i : touching[b]) {
      MatrixXd g = MatrixXd::Zero(d, d);
      for (const auto& e : rows_[i].entries) {
        if (e.block != static_cast<int>(b)) continue;
        g.noalias() += e.value * w[b].col(e.row) * zinv[b].row(e.col);
        if (e.row != e.col) g.noalias() += e.value * w[b].col(e.col) * zinv[b].row(e.row);
      }
      for (int j : touching[b]) {
        double s = 0;
        for (const auto& e : rows_[j].entries) {
          if (e.block != static_cast<int>(b)) continue;
          s += e.row == e.col ? e.value * g(e.row, e.row) : e.value * (g(e.row, e.col) + g(e.col, e.row));
        }
        out(i, j) += s;
      }
    }
  }
  return 0.5 * (out + out.transpose());
}

SdpSolution Solver::run() {
  SdpSolution sol;
  const int nblocks = static_cast<int>(problem_.block_dims.size());
  const int m_all = static_cast<int>(problem_.constraints.size());

  // Scaled copies of all constraints.
  std::vector<Row> all(m_all);
  VectorXd b_all(m_all);
  std::vector<double> scale(m_all, 1.0);
  for (int i = 0; i < m_all; ++i) {
    const auto& c = problem_.constraints[i];
    std::map<std::tuple<int, int, int>, double> merged;
    for (const auto& e : c.entries) merged[{e.block, e.row, e.col}] += to_double(e.value);
    double norm2 = 0;
    for (const auto& [key, v] : merged) norm2 += std::get<1>(key) == std::get<2>(key) ? v * v : 2 * v * v;
    scale[i] = norm2 > 0 ? std::sqrt(norm2) : 1.0;
    for (const auto& [key, v] : merged) {
      if (v == 0) continue;
      all[i].entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v / scale[i]});
      if (std::get<1>(key) == std::get<2>(key)) all[i].trace += v / scale[i];
    }
    b_all(i) = to_double(c.rhs) / scale[i];
  }

  // Gram matrix of the constraints; b must lie in its range.
  MatrixXd gram = MatrixXd::Zero(m_all, m_all);
  {
    std::map<std::tuple<int, int, int>, std::vector<std::pair<int, double>>> by_position;
    for (int i = 0; i < m_all; ++i) {
      for (const auto& e : all[i].entries) by_position[{e.block, e.row, e.col}].emplace_back(i, e.value);
    }
    for (const auto& [key, list] : by_position) {
      const double w = std::get<1>(key) == std::get<2>(key) ? 1.0 : 2.0;
      for (const auto& [i, vi] : list) {
        for (const auto& [j, vj] : list) gram(i, j) += w * vi * vj;
      }
    }
  }
  if (m_all > 0) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(gram);
    cod.setThreshold(1e-12);
    const VectorXd r = b_all - gram * cod.solve(b_all);
    const double rn = r.norm();
    if (rn > options_.tol * (1 + b_all.norm())) {
      sol.status = SdpStatus::kInfeasibleRay;
      sol.dual.resize(m_all);
      for (int i = 0; i < m_all; ++i) sol.dual[i] = -r(i) / rn / scale[i];
      sol.margin = rn;
      sol.primal_residual = rn;
      for (int b = 0; b < nblocks; ++b) sol.primal.push_back(MatrixXd::Zero(problem_.block_dims[b], problem_.block_dims[b]));
      return sol;
    }
  }
  const std::vector<int> kept = m_all > 0 ? independent_rows(gram) : std::vector<int>{};

  dims_ = problem_.block_dims;
  dims_.push_back(1);
  const int m = static_cast<int>(kept.size()) + 1;
  b_.resize(m);
  t_.resize(m);
  for (int r = 0; r + 1 < m; ++r) {
    rows_.push_back(all[kept[r]]);
    b_(r) = b_all(kept[r]);
    t_(r) = all[kept[r]].trace;
  }
  rows_.push_back(Row{{{nblocks, 0, 0, 1.0}}, 1.0});
  b_(m - 1) = options_.margin_cap;
  t_(m - 1) = 1.0;

  double n_total = 0;
  for (int d : dims_) n_total += d;
  const double xi = std::max({10.0, std::sqrt(n_total), std::sqrt(n_total) * (1 + b_.cwiseAbs().maxCoeff()) / 2});
  const double eta = std::max(10.0, std::sqrt(n_total));
  Blocks w, z;
  for (int d : dims_) {
    w.push_back(xi * MatrixXd::Identity(d, d));
    z.push_back(eta * MatrixXd::Identity(d, d));
  }
  double lambda = 0;
  VectorXd y = VectorXd::Zero(m);

  const double bnorm = 1 + b_.norm();
  bool converged = false;
  bool broke_down = false;
  int iter = 0;
  double relp = 0;
  double reld = 0;
  double relgap = 0;
  for (; iter < options_.max_iter; ++iter) {
    const VectorXd rp = b_ - apply(w) - lambda * t_;
    Blocks rd = adjoint(-y);
    for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= z[k];
    const double rl = -1.0 - t_.dot(y);
    const double wz = frob_inner(w, z);
    const double mu = wz / n_total;
    const double pobj = -lambda;
    const double dobj = b_.dot(y);
    relp = rp.norm() / bnorm;
    reld = (frob_norm(rd) + std::abs(rl)) / 2;
    relgap = std::max(std::abs(pobj - dobj), wz) / (1 + std::abs(pobj) + std::abs(dobj));
    if (relp < options_.tol && reld < options_.tol && relgap < options_.tol) {
      converged = true;
      break;
    }

    Blocks zinv;
    bool ok = true;
    for (const auto& zk : z) {
      Eigen::LLT<MatrixXd> llt(zk);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      MatrixXd inv = llt.solve(MatrixXd::Identity(zk.rows(), zk.cols()));
      symmetrize(inv);
      zinv.push_back(std::move(inv));
    }
    if (!ok) {
      broke_down = true;
      break;
    }
    const MatrixXd mm = schur(w, zinv);
    MatrixXd bordered = MatrixXd::Zero(m + 1, m + 1);
    bordered.topLeftCorner(m, m) = mm;
    bordered.block(0, m, m, 1) = t_;
    bordered.block(m, 0, 1, m) = t_.transpose();
    Eigen::FullPivLU<MatrixXd> lu(bordered);
    if (!lu.isInvertible()) {
      broke_down = true;
      break;
    }

    // Solves for a direction with complementarity target W Z + dW Z + W dZ = rc.
    auto direction = [&](const Blocks& rc, Blocks& dw, Blocks& dz, VectorXd& dy, double& dl) {
      Blocks k(dims_.size());
      for (std::size_t b = 0; b < dims_.size(); ++b) {
        k[b] = rc[b] * zinv[b] - w[b] * rd[b] * zinv[b];
        symmetrize(k[b]);
      }
      VectorXd rhs(m + 1);
      rhs.head(m) = rp - apply(k);
      rhs(m) = rl;
      const VectorXd sol_v = lu.solve(rhs);
      dy = sol_v.head(m);
      dl = sol_v(m);
      dz = adjoint(-dy);
      for (std::size_t b = 0; b < dims_.size(); ++b) dz[b] += rd[b];
      dw.resize(dims_.size());
      for (std::size_t b = 0; b < dims_.size(); ++b) {
        dw[b] = rc[b] * zinv[b] - w[b] * dz[b] * zinv[b];
        symmetrize(dw[b]);
      }
    };

    Blocks rc(dims_.size());
    for (std::size_t b = 0; b < dims_.size(); ++b) rc[b] = -w[b] * z[b];
    Blocks dw, dz;
    VectorXd dy;
    double dl = 0;
    direction(rc, dw, dz, dy, dl);
    const double ap = std::min(1.0, max_step(w, dw));
    const double ad = std::min(1.0, max_step(z, dz));
    Blocks wa = w, za = z;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
      wa[b] += ap * dw[b];
      za[b] += ad * dz[b];
    }
    const double mu_aff = frob_inner(wa, za) / n_total;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    for (std::size_t b = 0; b < dims_.size(); ++b) {
      rc[b] = sigma * mu * MatrixXd::Identity(dims_[b], dims_[b]) - w[b] * z[b] - dw[b] * dz[b];
    }
    direction(rc, dw, dz, dy, dl);
    const double sp = std::min(1.0, 0.95 * max_step(w, dw));
    const double sd = std::min(1.0, 0.95 * max_step(z, dz));
    if (!(sp > 0) || !(sd > 0)) {
      broke_down = true;
      break;
    }
    for (std::size_t b = 0; b < dims_.size(); ++b) {
      w[b] += sp * dw[b];
      z[b] += sd * dz[b];
    }
    lambda += sp * dl;
    y += sd * dy;
  }
  (void)broke_down;

  sol.iterations = iter;
  sol.margin = lambda;
  for (int b = 0; b < nblocks; ++b) {
    sol.primal.push_back(w[b] + lambda * MatrixXd::Identity(dims_[b], dims_[b]));
  }
  sol.dual.assign(m_all, 0.0);
  for (int r = 0; r + 1 < m; ++r) sol.dual[kept[r]] = -y(r) / scale[kept[r]];

  // Residuals against the original (unscaled, all) constraints.
  double res2 = 0;
  for (int i = 0; i < m_all; ++i) {
    double ax = 0;
    for (const auto& e : all[i].entries) {
      const double v = sol.primal[e.block](e.row, e.col);
      ax += e.row == e.col ? e.value * v : 2 * e.value * v;
    }
    const double r = (b_all(i) - ax) * scale[i];
    res2 += r * r;
  }
  sol.primal_residual = std::sqrt(res2);
  sol.dual_residual = reld;
  sol.gap = relgap;

  const double feas_tol = 10 * options_.tol;
  if (converged) {
    if (lambda >= -feas_tol) {
      sol.status = SdpStatus::kFeasible;
    } else {
      sol.status = SdpStatus::kInfeasibleRay;
      double bmu = 0;
      for (int i = 0; i < m_all; ++i) bmu += sol.dual[i] * to_double(problem_.constraints[i].rhs);
      sol.margin = -bmu;
    }
  } else if (relp < options_.tol && lambda > feas_tol) {
    sol.status = SdpStatus::kFeasible;
  } else {
    sol.status = SdpStatus::kIndeterminate;
  }
  return sol;
}

// Sparse exact solve of g y = r; free variables are set to zero.
std::optional<std::vector<Rational>> solve_exact(const std::vector<std::map<int, Rational>>& g,
                                                 const std::vector<Rational>& r) {
  struct PivotRow {
    std::map<int, Rational> coeffs;  // leading coefficient 1
    Rational rhs;
  };
  std::map<int, PivotRow> pivots;  // by leading column
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::map<int, Rational> row;
    for (const auto& [c, v] : g[i]) {
      if (v != 0) row.emplace(c, v);
    }
    Rational rhs = r[i];
    while (!row.empty()) {
      auto lead = row.begin();
      auto it = pivots.find(lead->first);
      if (it == pivots.end()) break;
      const Rational factor = lead->second;
      for (const auto& [c, v] : it->second.coeffs) {
        Rational& slot = row[c];
        slot -= factor * v;
        if (slot == 0) row.erase(c);
      }
      rhs -= factor * it->second.rhs;
    }
    if (row.empty()) {
      if (rhs != 0) return std::nullopt;
      continue;
    }
    const Rational lead = row.begin()->second;
    for (auto& [c, v] : row) v /= lead;
    rhs /= lead;
    const int column = row.begin()->first;
    pivots.emplace(column, PivotRow{std::move(row), std::move(rhs)});
  }
  std::vector<Rational> y(g.size(), 0);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    Rational v = it->second.rhs;
    for (const auto& [c, coef] : it->second.coeffs) {
      if (c != it->first) v -= coef * y[c];
    }
    y[it->first] = v;
  }
  return y;
}

}  // namespace

SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& options) {
  validate(problem, options);
  return Solver(problem, options).run();
}

Rational apply_constraint(const SdpConstraint& c, const std::vector<RationalMatrix>& blocks) {
  Rational s = 0;
  for (const auto& e : c.entries) {
    const Rational& v = blocks[e.block](e.row, e.col);
    if (e.row == e.col) {
      s += e.value * v;
    } else {
      s += 2 * e.value * v;
    }
  }
  return s;
}

namespace {

// Rounds each block entrywise and projects exactly onto {X : A(X) = b}.
std::optional<std::vector<RationalMatrix>> round_and_project(const SdpProblem& problem,
                                                             const std::vector<Eigen::MatrixXd>& numeric) {
  const std::size_t m = problem.constraints.size();

  // Exact Gram matrix of the constraints, <A_i, A_j>.
  std::vector<std::map<int, Rational>> gram(m);
  {
    std::map<std::tuple<int, int, int>, std::vector<std::pair<int, Rational>>> by_position;
    for (std::size_t i = 0; i < m; ++i) {
      std::map<std::tuple<int, int, int>, Rational> merged;
      for (const auto& e : problem.constraints[i].entries) merged[{e.block, e.row, e.col}] += e.value;
      for (const auto& [key, v] : merged) {
        if (v != 0) by_position[key].emplace_back(static_cast<int>(i), v);
      }
    }
    for (const auto& [key, list] : by_position) {
      const int w = std::get<1>(key) == std::get<2>(key) ? 1 : 2;
      for (const auto& [i, vi] : list) {
        for (const auto& [j, vj] : list) {
          Rational& slot = gram[i][j];
          slot += w * vi * vj;
        }
      }
    }
  }

  for (const char* den_text : {"1000000", "1000000000000"}) {
    const Integer max_den(den_text);
    std::vector<RationalMatrix> x;
    for (std::size_t b = 0; b < numeric.size(); ++b) {
      const auto d = static_cast<std::size_t>(problem.block_dims[b]);
      RationalMatrix q(d, d);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r; c < d; ++c) {
          const double v = 0.5 * (numeric[b](r, c) + numeric[b](c, r));
          q(r, c) = approximate_rational(v, max_den);
          q(c, r) = q(r, c);
        }
      }
      x.push_back(std::move(q));
    }
    std::vector<Rational> residual(m);
    bool exact = true;
    for (std::size_t i = 0; i < m; ++i) {
      residual[i] = problem.constraints[i].rhs - apply_constraint(problem.constraints[i], x);
      if (residual[i] != 0) exact = false;
    }
    if (!exact) {
      auto y = solve_exact(gram, residual);
      if (!y) return std::nullopt;  // constraints inconsistent
      for (std::size_t i = 0; i < m; ++i) {
        if ((*y)[i] == 0) continue;
        for (const auto& e : problem.constraints[i].entries) {
          x[e.block](e.row, e.col) += (*y)[i] * e.value;
          if (e.row != e.col) x[e.block](e.col, e.row) += (*y)[i] * e.value;
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (apply_constraint(problem.constraints[i], x) != problem.constraints[i].rhs) return std::nullopt;
      }
    }
    const bool all_psd =
        std::all_of(x.begin(), x.end(), [](const RationalMatrix& q) { return psd_check_exact(q).psd; });
    if (all_psd) return x;
  }
  return std::nullopt;
}

// Columns spanning the numeric range of x, as an exact rational basis: the
// near-kernel eigenvectors are brought to reduced row echelon form, rounded,
// and the complement is read off exactly. Identity when x looks nonsingular.
RationalMatrix range_basis(const Eigen::MatrixXd& x, const Integer& max_den) {
  const auto n = static_cast<std::size_t>(x.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (x + MatrixXd(x.transpose())));
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> kernel_cols;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i) < 1e-6 * scale) kernel_cols.push_back(static_cast<int>(i));
  }
  if (kernel_cols.empty()) return RationalMatrix::identity(n);

  MatrixXd k(kernel_cols.size(), n);
  for (std::size_t r = 0; r < kernel_cols.size(); ++r) k.row(r) = eig.eigenvectors().col(kernel_cols[r]).transpose();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < static_cast<std::size_t>(k.rows()); ++c) {
    Eigen::Index best;
    const double mag = k.col(c).tail(k.rows() - row).cwiseAbs().maxCoeff(&best);
    if (mag < 1e-9) continue;
    k.row(row).swap(k.row(row + best));
    k.row(row) /= k(row, c);
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      if (r != static_cast<Eigen::Index>(row)) k.row(r) -= k(r, c) * k.row(row);
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  RationalMatrix basis(n, free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], f) = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      basis(pivot_col[r], f) = -approximate_rational(k(r, free_cols[f]), max_den);
    }
  }
  return basis;
}

// Facial reduction guessed from the numeric solution: X_b = C_b Y_b C_b^T
// with C_b spanning the numeric range, so Y can be strictly feasible even
// when every feasible X is singular.
std::optional<std::vector<RationalMatrix>> rationalize_on_face(const SdpProblem& problem,
                                                               const std::vector<Eigen::MatrixXd>& numeric,
                                                               const Integer& max_den) {
  std::vector<RationalMatrix> c;
  bool reduced = false;
  for (const auto& x : numeric) {
    c.push_back(range_basis(x, max_den));
    reduced = reduced || c.back().cols() != c.back().rows();
  }
  if (!reduced) return std::nullopt;

  SdpProblem face;
  std::vector<Eigen::MatrixXd> y_numeric;
  for (std::size_t b = 0; b < c.size(); ++b) {
    face.block_dims.push_back(static_cast<int>(c[b].cols()));
    MatrixXd cd(c[b].rows(), c[b].cols());
    for (std::size_t r = 0; r < c[b].rows(); ++r)
      for (std::size_t s = 0; s < c[b].cols(); ++s) cd(r, s) = to_double(c[b](r, s));
    const MatrixXd pinv = (cd.transpose() * cd).ldlt().solve(cd.transpose());
    y_numeric.push_back(pinv * numeric[b] * pinv.transpose());
  }
  for (const auto& con : problem.constraints) {
    std::vector<RationalMatrix> a;
    for (std::size_t b = 0; b < c.size(); ++b) a.emplace_back(c[b].rows(), c[b].rows());
    for (const auto& e : con.entries) {
      a[e.block](e.row, e.col) += e.value;
      if (e.row != e.col) a[e.block](e.col, e.row) += e.value;
    }
    SdpConstraint reduced_con{{}, con.rhs};
    for (std::size_t b = 0; b < c.size(); ++b) {
      const RationalMatrix ab = c[b].transpose() * a[b] * c[b];
      for (std::size_t r = 0; r < ab.rows(); ++r) {
        for (std::size_t s = r; s < ab.cols(); ++s) {
          if (ab(r, s) != 0) {
            reduced_con.entries.push_back({static_cast<int>(b), static_cast<int>(r), static_cast<int>(s), ab(r, s)});
          }
        }
      }
    }
    face.constraints.push_back(std::move(reduced_con));
  }
  auto y = round_and_project(face, y_numeric);
  if (!y) return std::nullopt;
  std::vector<RationalMatrix> x;
  for (std::size_t b = 0; b < c.size(); ++b) x.push_back(c[b] * (*y)[b] * c[b].transpose());
  for (const auto& con : problem.constraints) {
    if (apply_constraint(con, x) != con.rhs) return std::nullopt;
  }
  return x;
}

}  // namespace

std::optional<std::vector<RationalMatrix>> rationalize_gram(const SdpProblem& problem,
                                                            const std::vector<Eigen::MatrixXd>& numeric) {
  if (numeric.size() != problem.block_dims.size()) throw std::invalid_argument("rationalize_gram: block count");
  for (std::size_t b = 0; b < numeric.size(); ++b) {
    if (numeric[b].rows() != problem.block_dims[b] || numeric[b].cols() != problem.block_dims[b]) {
      throw std::invalid_argument("rationalize_gram: block shape mismatch");
    }
  }
  if (auto x = round_and_project(problem, numeric)) return x;
  for (const char* den_text : {"1000000", "1000000000000"}) {
    if (auto x = rationalize_on_face(problem, numeric, Integer(den_text))) return x;
  }
  return std::nullopt;
}

}  // namespace qgraph
