#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qgraph/rational.hpp"

namespace qgraph {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_symmetric() const;
  RationalMatrix transpose() const;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// v^T M v.
Rational quadratic_form(const RationalMatrix& m, const std::vector<Rational>& v);

/// P M P^T = L D L^T with P the permutation sending row i to perm[i]
/// (that is, M(perm[i], perm[j]) = (L D L^T)(i, j)), L unit lower triangular.
struct LdlDecomposition {
  std::vector<std::size_t> perm;
  RationalMatrix l;
  std::vector<Rational> d;

  /// M in its original row order.
  RationalMatrix reconstruct() const;
};

struct PsdCheck {
  bool psd = false;
  LdlDecomposition decomposition;  // when psd
  std::vector<Rational> witness;   // when !psd: witness^T M witness < 0
  Rational witness_value;
};

/// Exact PSD test. The elimination runs fraction-free on the integer matrix
/// obtained by clearing denominators, pivoting on positive diagonal entries.
/// Throws std::invalid_argument for non-square or asymmetric input.
PsdCheck psd_check_exact(const RationalMatrix& m);

std::string format_matrix(const RationalMatrix& m);

}  // namespace qgraph
