#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "qgraph/exact_psd.hpp"
#include "qgraph/rational.hpp"

namespace qgraph {

/// One stored entry of a symmetric coefficient matrix; row <= col. An
/// off-diagonal entry stands for both (row, col) and (col, row), so it
/// contributes 2 * value * X(row, col) to the inner product.
struct SdpEntry {
  int block;
  int row;
  int col;
  Rational value;
};

/// sum_blocks <A_block, X_block> = rhs.
struct SdpConstraint {
  std::vector<SdpEntry> entries;
  Rational rhs;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<SdpConstraint> constraints;

  int total_dimension() const;
};

enum class SdpStatus { kFeasible, kInfeasibleRay, kIndeterminate };
std::string to_string(SdpStatus status);

struct SdpOptions {
  double tol = 1e-8;
  int max_iter = 200;
  int max_dim = 200;
  /// Upper bound placed on the margin variable; keeps the problem bounded.
  double margin_cap = 1.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kIndeterminate;
  std::vector<Eigen::MatrixXd> primal;
  /// mu with sum_i mu_i A_i PSD and trace(sum_i mu_i A_i) <= 1; for an
  /// infeasible problem b^T mu = -margin.
  std::vector<double> dual;
  /// Feasible: the smallest eigenvalue bound reached (X - margin I PSD).
  /// InfeasibleRay: -b^T mu > 0.
  double margin = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;
  int iterations = 0;
};

/// Solves max lambda s.t. A(X) = b, X - lambda I PSD, lambda <= margin_cap
/// with an infeasible-start primal-dual interior-point method (HKM search
/// direction, Mehrotra predictor-corrector). Throws SizeLimitError when the
/// total dimension exceeds options.max_dim and std::invalid_argument on
/// malformed constraints. Deterministic.
SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& options = {});

/// <A, X> for exact blocks.
Rational apply_constraint(const SdpConstraint& c, const std::vector<RationalMatrix>& blocks);

/// Rounds a numeric solution to rationals (denominators up to 1e6, retrying
/// at 1e12), projects exactly onto the affine constraint space and keeps the
/// result only if every block is exactly PSD.
std::optional<std::vector<RationalMatrix>> rationalize_gram(const SdpProblem& problem,
                                                            const std::vector<Eigen::MatrixXd>& numeric);

}  // namespace qgraph
