#include "qgraph/exact_psd.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qgraph {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not match");
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += a(r, k) * b(k, c);
    }
  }
  return out;
}

Rational quadratic_form(const RationalMatrix& m, const std::vector<Rational>& v) {
  if (m.rows() != v.size() || m.cols() != v.size()) throw std::invalid_argument("vector length mismatch");
  Rational total = 0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v[r] == 0) continue;
    Rational row = 0;
    for (std::size_t c = 0; c < v.size(); ++c) row += m(r, c) * v[c];
    total += v[r] * row;
  }
  return total;
}

RationalMatrix LdlDecomposition::reconstruct() const {
  RationalMatrix ld = l;
  for (std::size_t r = 0; r < ld.rows(); ++r) {
    for (std::size_t c = 0; c < ld.cols(); ++c) ld(r, c) *= d[c];
  }
  RationalMatrix permuted = ld * l.transpose();
  RationalMatrix out(permuted.rows(), permuted.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) out(perm[i], perm[j]) = permuted(i, j);
  }
  return out;
}

namespace {

int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// Negative diagonal entry or a negative 2x2 principal minor of m itself.
bool small_witness(const RationalMatrix& m, std::vector<Rational>& witness) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) < 0) {
      witness.assign(n, 0);
      witness[i] = 1;
      return true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational& a = m(i, i);
      const Rational& b = m(i, j);
      const Rational& c = m(j, j);
      if (a * c >= b * b) continue;
      witness.assign(n, 0);
      if (a + c - 2 * abs(b) < 0) {
        witness[i] = 1;
        witness[j] = -sign(b);
      } else if (c > 0) {
        witness[i] = c;
        witness[j] = -b;
      } else {
        witness[i] = -b;
        witness[j] = a;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

PsdCheck psd_check_exact(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("psd_check_exact: matrix is not square");
  if (!m.is_symmetric()) throw std::invalid_argument("psd_check_exact: matrix is not symmetric");
  const std::size_t n = m.rows();
  PsdCheck result;
  if (small_witness(m, result.witness)) {
    result.witness_value = quadratic_form(m, result.witness);
    return result;
  }

  Integer scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m(r, c).get_den_mpz_t());
  }
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c).get_num() * (scale / m(r, c).get_den());
  }

  std::vector<std::size_t> pivots;
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
  // lcol[t] maps a later original index to L(index, pivot t).
  std::vector<std::map<std::size_t, Rational>> lcol;
  std::vector<Rational> d;
  Integer prev = 1;
  std::vector<Rational> schur_witness;  // indexed like `remaining`

  while (!remaining.empty()) {
    // Schur complement entries are a[i][j] / prev with prev > 0.
    auto negative = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t i) { return a[i][i] < 0; });
    if (negative != remaining.end()) {
      schur_witness.assign(remaining.size(), 0);
      schur_witness[negative - remaining.begin()] = 1;
      break;
    }
    auto positive = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t i) { return a[i][i] > 0; });
    if (positive == remaining.end()) {
      for (std::size_t x = 0; x < remaining.size() && schur_witness.empty(); ++x) {
        for (std::size_t y = x + 1; y < remaining.size(); ++y) {
          const Integer& b = a[remaining[x]][remaining[y]];
          if (b != 0) {
            schur_witness.assign(remaining.size(), 0);
            schur_witness[x] = 1;
            schur_witness[y] = b > 0 ? -1 : 1;
            break;
          }
        }
      }
      break;
    }
    const std::size_t k = *positive;
    remaining.erase(positive);
    const Integer p = a[k][k];
    std::map<std::size_t, Rational> column;
    for (std::size_t i : remaining) {
      if (a[i][k] != 0) {
        Rational q(a[i][k], p);
        q.canonicalize();
        column.emplace(i, q);
      }
    }
    for (std::size_t i : remaining) {
      for (std::size_t j : remaining) {
        if (j < i) continue;
        Integer v = p * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
        a[j][i] = std::move(v);
      }
    }
    Rational dk(p, prev * scale);
    dk.canonicalize();
    d.push_back(dk);
    pivots.push_back(k);
    lcol.push_back(std::move(column));
    prev = p;
  }

  if (schur_witness.empty()) {
    result.psd = true;
    LdlDecomposition& ldl = result.decomposition;
    ldl.perm = pivots;
    ldl.perm.insert(ldl.perm.end(), remaining.begin(), remaining.end());
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[ldl.perm[i]] = i;
    ldl.l = RationalMatrix::identity(n);
    for (std::size_t t = 0; t < lcol.size(); ++t) {
      for (const auto& [i, value] : lcol[t]) ldl.l(position[i], t) = value;
    }
    ldl.d = d;
    ldl.d.resize(n, 0);
    return result;
  }

  // Lift: x_pivots = -L11^{-T} L21^T w.
  std::vector<Rational> x(n, 0);
  for (std::size_t r = 0; r < remaining.size(); ++r) x[remaining[r]] = schur_witness[r];
  for (std::size_t t = pivots.size(); t-- > 0;) {
    Rational value = 0;
    for (const auto& [i, l] : lcol[t]) value -= l * x[i];
    x[pivots[t]] = value;
  }
  result.witness = std::move(x);
  result.witness_value = quadratic_form(m, result.witness);
  if (result.witness_value >= 0) throw std::logic_error("psd_check_exact: witness lifting failed");
  return result;
}

std::string format_matrix(const RationalMatrix& m) {
  std::ostringstream out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_rational(m(r, c));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qgraph
