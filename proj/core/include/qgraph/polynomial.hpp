#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgraph/rational.hpp"

namespace qgraph {

/// A polynomial variable: x_i (vertex weight), y_ij with i <= j (edge weight),
/// or z_ij with i < j (labeled edge). Indices are 1-based.
struct Variable {
  enum class Kind : std::uint8_t { kX = 0, kY = 1, kZ = 2 };

  Kind kind;
  int i;
  int j;  // 0 for x

  static Variable x(int i);
  static Variable y(int i, int j);  // stored sorted
  static Variable z(int i, int j);  // stored sorted, requires i != j

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

std::string format_variable(const Variable& v);

/// Sparse monomial: (variable, exponent >= 1) pairs sorted by variable.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(const Variable& v, std::uint32_t exponent = 1);
  static Monomial from_factors(std::vector<std::pair<Variable, std::uint32_t>> factors);

  const std::vector<std::pair<Variable, std::uint32_t>>& factors() const { return factors_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(const Variable& v) const;
  bool is_one() const { return factors_.empty(); }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::pair<Variable, std::uint32_t>> factors_;
  std::uint32_t degree_ = 0;
};

/// Graded lexicographic comparison: total degree first, then the exponent of
/// the earliest variable (x before y before z, indices ascending) decides.
std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b);

/// Orders monomials from largest to smallest in graded-lex order; this is the
/// printing order and the witness-selection order.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_compare(a, b) > 0; }
};

std::string format_monomial(const Monomial& m);

/// Sparse multivariate polynomial with exact rational coefficients.
class Poly {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexDescending>;

  Poly() = default;
  Poly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Poly(int constant) : Poly(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(const Variable& v);
  Poly(const Monomial& m, const Rational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Monomial& m) const;
  /// Constant value when the polynomial has no variables.
  std::optional<Rational> constant_value() const;

  void add_term(const Monomial& m, const Rational& c);

  int total_degree() const;  // -1 for the zero polynomial
  bool is_homogeneous() const;
  std::vector<Variable> variables() const;
  bool only_kind(Variable::Kind kind) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  TermMap terms_;
};

Poly pow(const Poly& p, unsigned e);

/// Simultaneous substitution; unassigned variables survive.
using Assignment = std::map<Variable, Poly>;
Poly substitute(const Poly& p, const Assignment& assignment);

/// Evaluates with every variable assigned; throws if one is missing.
Rational evaluate(const Poly& p, const std::map<Variable, Rational>& point);

/// Drops exponents above 1 (reduction modulo z^2 - z for every variable).
Poly reduce_idempotent(const Poly& p);

/// Sum x_1 + ... + x_n.
Poly weight_sum(int n);

std::string format_poly(const Poly& p);

/// Expression grammar: sums, differences, products (`*` or juxtaposed
/// factors are not allowed; use `*`), powers `^n`, parentheses, rationals
/// `p/q`, variables `x1`, `y12`, `y1_2`, `z12`, `z1_2`.
Poly parse_poly(std::string_view text);

// ---------------------------------------------------------------------------
// Positivity tests on forms in the x-variables

struct PolyaWitness {
  unsigned n;
  Monomial monomial;
  Rational coefficient;
};

struct PolyaResult {
  bool success = false;
  unsigned n = 0;        // least exponent that worked, when success
  Poly product;          // (sum x_i)^n * p, when success
  std::vector<PolyaWitness> witnesses;  // one per tried exponent, when !success
};

/// Least N <= n_max with all coefficients of (x_1 + ... + x_m)^N * p
/// nonnegative (m = largest x index in p). Throws std::invalid_argument for
/// non-homogeneous input or non-x variables.
PolyaResult polya_test(const Poly& p, unsigned n_max);

/// True iff p vanishes at `point` (point[i] is the value of x_{i+1}).
/// Throws std::invalid_argument on a nonpositive coordinate, a
/// non-homogeneous p, or a point that does not cover p's variables.
bool orthant_zero_check(const Poly& p, const std::vector<Rational>& point);

}  // namespace qgraph
