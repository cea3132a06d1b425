#include "qgraph/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace qgraph {

Variable Variable::x(int i) {
  if (i < 1) throw std::invalid_argument("variable index must be positive");
  return {Kind::kX, i, 0};
}

Variable Variable::y(int i, int j) {
  if (i < 1 || j < 1) throw std::invalid_argument("variable index must be positive");
  return {Kind::kY, std::min(i, j), std::max(i, j)};
}

Variable Variable::z(int i, int j) {
  if (i < 1 || j < 1) throw std::invalid_argument("variable index must be positive");
  if (i == j) throw std::invalid_argument("z_ii is not a variable (graphs are loopless)");
  return {Kind::kZ, std::min(i, j), std::max(i, j)};
}

std::string format_variable(const Variable& v) {
  switch (v.kind) {
    case Variable::Kind::kX:
      return "x" + std::to_string(v.i);
    case Variable::Kind::kY:
    case Variable::Kind::kZ: {
      const char* prefix = v.kind == Variable::Kind::kY ? "y" : "z";
      if (v.i <= 9 && v.j <= 9) return prefix + std::to_string(v.i) + std::to_string(v.j);
      return prefix + std::to_string(v.i) + "_" + std::to_string(v.j);
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(const Variable& v, std::uint32_t exponent) {
  if (exponent > 0) {
    factors_.emplace_back(v, exponent);
    degree_ = exponent;
  }
}

Monomial Monomial::from_factors(std::vector<std::pair<Variable, std::uint32_t>> factors) {
  std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Monomial m;
  for (const auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == v) {
      m.factors_.back().second += e;
    } else {
      m.factors_.emplace_back(v, e);
    }
    m.degree_ += e;
  }
  return m;
}

std::uint32_t Monomial::exponent(const Variable& v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const auto& f, const Variable& key) { return f.first < key; });
  return it != factors_.end() && it->first == v ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  out.degree_ = degree_ + other.degree_;
  return out;
}

std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  auto ia = a.factors().begin();
  auto ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    if (ia->first != ib->first) {
      // The earlier variable is present only in one of them.
      return ia->first < ib->first ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (ia->second != ib->second) return ia->second <=> ib->second;
    ++ia;
    ++ib;
  }
  if (ia != a.factors().end()) return std::strong_ordering::greater;
  if (ib != b.factors().end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string format_monomial(const Monomial& m) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += "*";
    out += format_variable(v);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial(), constant);
}

Poly::Poly(const Variable& v) { terms_.emplace(Monomial(v), Rational(1)); }

Poly::Poly(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace(m, c);
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.begin()->first.degree());  // descending order
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const auto d = terms_.begin()->first.degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.degree() == d; });
}

std::vector<Variable> Poly::variables() const {
  std::set<Variable> vars;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.factors()) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

bool Poly::only_kind(Variable::Kind kind) const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.factors()) {
      if (v.kind != kind) return false;
    }
  }
  return true;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, coef] : terms_) coef *= c;
  }
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Poly pow(const Poly& p, unsigned e) {
  Poly result(Rational(1));
  Poly base = p;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Poly substitute(const Poly& p, const Assignment& assignment) {
  std::map<std::pair<Variable, std::uint32_t>, Poly> power_cache;
  auto power_of = [&](const Poly& base, const Variable& v, std::uint32_t e) -> const Poly& {
    auto key = std::make_pair(v, e);
    auto it = power_cache.find(key);
    if (it == power_cache.end()) it = power_cache.emplace(key, pow(base, e)).first;
    return it->second;
  };
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Poly term{Rational(c)};
    std::vector<std::pair<Variable, std::uint32_t>> kept;
    for (const auto& [v, e] : m.factors()) {
      auto it = assignment.find(v);
      if (it == assignment.end()) {
        kept.emplace_back(v, e);
      } else {
        term = term * power_of(it->second, v, e);
      }
      if (term.is_zero()) break;
    }
    if (!kept.empty()) term = term * Poly(Monomial::from_factors(std::move(kept)), Rational(1));
    out += term;
  }
  return out;
}

Rational evaluate(const Poly& p, const std::map<Variable, Rational>& point) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = point.find(v);
      if (it == point.end()) throw std::invalid_argument("evaluate: no value for " + format_variable(v));
      Rational factor;
      mpz_pow_ui(factor.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
      mpz_pow_ui(factor.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
      term *= factor;
    }
    total += term;
  }
  return total;
}

Poly reduce_idempotent(const Poly& p) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    auto factors = m.factors();
    for (auto& f : factors) f.second = 1;
    out.add_term(Monomial::from_factors(std::move(factors)), c);
  }
  return out;
}

Poly weight_sum(int n) {
  Poly g;
  for (int i = 1; i <= n; ++i) g.add_term(Monomial(Variable::x(i)), Rational(1));
  return g;
}

std::string format_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Rational mag = abs(c);
    if (m.is_one()) {
      out += format_rational(mag);
    } else if (mag == 1) {
      out += format_monomial(m);
    } else {
      out += format_rational(mag) + "*" + format_monomial(m);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  int small_int(const std::string& s) {
    if (s.size() > 6) fail("index or exponent too large");
    return std::stoi(s);
  }

  Poly expr() {
    Poly result;
    bool negate = false;
    if (consume('-')) {
      negate = true;
    } else {
      consume('+');
    }
    Poly t = term();
    result += negate ? -t : t;
    while (true) {
      if (consume('+')) {
        result += term();
      } else if (consume('-')) {
        result -= term();
      } else {
        break;
      }
    }
    return result;
  }

  Poly term() {
    Poly result = power();
    while (consume('*')) result = result * power();
    return result;
  }

  Poly power() {
    Poly base = atom();
    if (consume('^')) {
      skip_ws();
      base = pow(base, static_cast<unsigned>(small_int(digits())));
    }
    return base;
  }

  Poly atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        num += "/" + digits();
      }
      return Poly(parse_rational(num));
    }
    if (c == 'x' || c == 'y' || c == 'z') {
      const std::size_t start = pos_;
      ++pos_;
      const std::string first = digits();
      if (c == 'x') return Poly(Variable::x(small_int(first)));
      int i = 0, j = 0;
      if (pos_ < text_.size() && text_[pos_] == '_') {
        ++pos_;
        i = small_int(first);
        j = small_int(digits());
      } else if (first.size() == 2) {
        i = first[0] - '0';
        j = first[1] - '0';
      } else {
        pos_ = start;
        fail("ambiguous variable index; use the underscore form, e.g. y1_10");
      }
      if (c == 'y') return Poly(Variable::y(i, j));
      if (i == j) {
        pos_ = start;
        fail("z-variables need two distinct indices");
      }
      return Poly(Variable::z(i, j));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

// ---------------------------------------------------------------------------
// Pólya and orthant tests

namespace {

int max_x_index(const Poly& p) {
  int m = 0;
  for (const auto& v : p.variables()) m = std::max(m, v.i);
  return m;
}

void require_x_form(const Poly& p, const char* who) {
  if (!p.only_kind(Variable::Kind::kX)) {
    throw std::invalid_argument(std::string(who) + ": only x-variables are allowed");
  }
  if (!p.is_homogeneous()) throw std::invalid_argument(std::string(who) + ": polynomial is not homogeneous");
}

}  // namespace

PolyaResult polya_test(const Poly& p, unsigned n_max) {
  require_x_form(p, "polya_test");
  const Poly s = weight_sum(std::max(1, max_x_index(p)));
  PolyaResult result;
  Poly current = p;
  for (unsigned n = 0; n <= n_max; ++n) {
    if (n > 0) current = current * s;
    auto negative = std::find_if(current.terms().begin(), current.terms().end(),
                                 [](const auto& t) { return t.second < 0; });
    if (negative == current.terms().end()) {
      result.success = true;
      result.n = n;
      result.product = current;
      result.witnesses.clear();
      return result;
    }
    result.witnesses.push_back({n, negative->first, negative->second});
  }
  return result;
}

bool orthant_zero_check(const Poly& p, const std::vector<Rational>& point) {
  require_x_form(p, "orthant_zero_check");
  std::map<Variable, Rational> values;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] <= 0) throw std::invalid_argument("orthant_zero_check: coordinates must be positive");
    values.emplace(Variable::x(static_cast<int>(i) + 1), point[i]);
  }
  if (max_x_index(p) > static_cast<int>(point.size())) {
    throw std::invalid_argument("orthant_zero_check: point has fewer coordinates than variables");
  }
  return evaluate(p, values) == 0;
}

}  // namespace qgraph
