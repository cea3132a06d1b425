#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised by every text parser. `position()` is a 0-based byte offset into
/// the input that was being parsed (a line for line-oriented formats).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised when an input exceeds the desk-scale limits (vertex count, SDP
/// dimension cap, multiplicity range).
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `p/q`, `-p/q` or an integer. Surrounding whitespace is ignored.
Rational parse_rational(std::string_view text);

/// `p/q`, or `p` when the denominator is 1.
std::string format_rational(const Rational& q);

/// Six significant digits, e.g. `0.666667`.
std::string format_decimal(const Rational& q);

/// `p/q (~0.666667)`.
std::string format_rational_with_decimal(const Rational& q);

double to_double(const Rational& q);

/// Best rational approximation of `x` with denominator at most `max_den`,
/// taken from the continued-fraction convergents and semiconvergents of the
/// exact binary value of `x`.
Rational approximate_rational(double x, const Integer& max_den);

Rational factorial(unsigned n);

}  // namespace qgraph
