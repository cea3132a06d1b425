#include "qgraph/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace qgraph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view t = trim(text);
  std::string_view body = t;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den))) {
    throw ParseError("malformed rational '" + std::string(t) + "'", 0);
  }
  Rational q;
  q.get_num() = Integer(std::string(num));
  q.get_den() = slash == std::string_view::npos ? Integer(1) : Integer(std::string(den));
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(t) + "'", slash + 1);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

std::string format_decimal(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", q.get_d());
  return buf;
}

std::string format_rational_with_decimal(const Rational& q) {
  return format_rational(q) + " (~" + format_decimal(q) + ")";
}

Rational approximate_rational(double x, const Integer& max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("approximate_rational: non-finite input");
  Rational exact(x);  // exact binary value
  if (exact.get_den() <= max_den) return exact;

  // Convergents h/k of the continued fraction of `exact`.
  Integer h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  Integer num = exact.get_num(), den = exact.get_den();
  while (den != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const Integer h = a * h_prev + h_prev2;
    const Integer k = a * k_prev + k_prev2;
    if (k > max_den) {
      // Largest semiconvergent that still fits, compared with the last convergent.
      Integer t = (max_den - k_prev2) / k_prev;
      const Rational semi(t * h_prev + h_prev2, t * k_prev + k_prev2);
      const Rational conv(h_prev, k_prev);
      Rational semi_c = semi, conv_c = conv;
      semi_c.canonicalize();
      conv_c.canonicalize();
      return abs(semi_c - exact) < abs(conv_c - exact) ? semi_c : conv_c;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const Integer r = num - a * den;
    num = den;
    den = r;
  }
  Rational out(h_prev, k_prev);
  out.canonicalize();
  return out;
}

Rational factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

}  // namespace qgraph
