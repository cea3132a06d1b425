#include <cctype>
#include <sstream>

#include "qgraph/certificates.hpp"

namespace qgraph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_generator(const Generator& g) {
  return std::string(g.plus ? "d+" : "d-") + format_variable(Variable::z(g.i, g.j));
}

struct Line {
  std::string_view text;  // comment stripped and trimmed
  std::size_t offset;     // of text within the whole input
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view body = trim(line);
    if (!body.empty()) out.push_back({body, start + static_cast<std::size_t>(body.data() - line.data())});
    start = end + 1;
  }
  return out;
}

// Re-anchors a parse error raised on a piece of a line.
[[noreturn]] void rethrow_at(const ParseError& e, std::size_t base) {
  std::string what = e.what();
  if (auto p = what.rfind(" (at position"); p != std::string::npos) what.resize(p);
  throw ParseError(what, base + e.position());
}

// `key=value` words after the leading keyword.
std::map<std::string, std::pair<std::string_view, std::size_t>> header_fields(const Line& line,
                                                                              std::vector<std::string>& flags) {
  std::map<std::string, std::pair<std::string_view, std::size_t>> out;
  std::size_t pos = line.text.find_first_of(" \t");
  while (pos != std::string_view::npos && pos < line.text.size()) {
    pos = line.text.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    std::size_t end = line.text.find_first_of(" \t", pos);
    const std::string_view word = line.text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    const auto eq = word.find('=');
    if (eq == std::string_view::npos) {
      flags.emplace_back(word);
    } else {
      out[std::string(word.substr(0, eq))] = {word.substr(eq + 1), line.offset + pos + eq + 1};
    }
    pos = end;
  }
  return out;
}

int parse_label_count(std::string_view text, std::size_t offset) {
  Rational k;
  try {
    k = parse_rational(text);
  } catch (const ParseError& e) {
    rethrow_at(e, offset);
  }
  if (k.get_den() != 1 || k < 0 || k > kMaxVertices) throw ParseError("invalid label count", offset);
  return static_cast<int>(k.get_num().get_si());
}

PerturbSpec parse_perturb_at(std::string_view text, std::size_t offset) {
  try {
    return parse_perturb(text);
  } catch (const ParseError& e) {
    rethrow_at(e, offset);
  }
}

Rational parse_rational_at(std::string_view text, std::size_t offset) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    rethrow_at(e, offset);
  }
}

SosCert parse_sos(const std::vector<Line>& lines) {
  std::vector<std::string> flags;
  auto fields = header_fields(lines[0], flags);
  SosCert cert;
  if (!fields.contains("k") || !fields.contains("mode")) {
    throw ParseError("sos header needs k=<k> and mode=<simple|multi>", lines[0].offset);
  }
  cert.k = parse_label_count(fields["k"].first, fields["k"].second);
  try {
    cert.mode = parse_mode(fields["mode"].first);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), fields["mode"].second);
  }
  if (fields.contains("perturb")) cert.perturb = parse_perturb_at(fields["perturb"].first, fields["perturb"].second);
  for (const auto& f : flags) {
    if (f != "degree0") throw ParseError("unknown header flag '" + f + "'", lines[0].offset);
    cert.restricted_degree0 = true;
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.text.starts_with("summand")) {
      std::vector<std::string> extra;
      auto sf = header_fields(line, extra);
      if (!extra.empty() || line.text.substr(0, 7) != "summand") throw ParseError("malformed summand line", line.offset);
      SosSummand s;
      s.root = QuantumGraph(cert.k, cert.mode);
      if (sf.contains("weight")) s.weight = parse_rational_at(sf["weight"].first, sf["weight"].second);
      if (s.weight < 0) throw ParseError("summand weight must be nonnegative", sf["weight"].second);
      cert.summands.push_back(std::move(s));
      continue;
    }
    if (cert.summands.empty()) throw ParseError("term before the first 'summand' line", line.offset);
    const auto bar = line.text.find('|');
    if (bar == std::string_view::npos) throw ParseError("expected '<rational> | <graph>'", line.offset);
    const Rational c = parse_rational_at(line.text.substr(0, bar), line.offset);
    LabeledMultigraph g;
    try {
      g = parse_graph(line.text.substr(bar + 1));
    } catch (const ParseError& e) {
      rethrow_at(e, line.offset + bar + 1);
    }
    if (g.num_labels() != cert.k) throw ParseError("summand graph has the wrong label count", line.offset + bar + 1);
    try {
      cert.summands.back().root.add_term(g, c);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line.offset + bar + 1);
    }
  }
  return cert;
}

std::vector<Generator> parse_generators(std::string_view text, std::size_t offset, int k) {
  std::vector<Generator> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    const std::string_view item = trim(raw);
    const std::size_t at = offset + pos + static_cast<std::size_t>(item.data() - raw.data());
    if (item.size() < 3 || item[0] != 'd' || (item[1] != '+' && item[1] != '-')) {
      throw ParseError("generator must look like d+z12 or d-z12", at);
    }
    Poly z;
    try {
      z = parse_poly(item.substr(2));
    } catch (const ParseError& e) {
      rethrow_at(e, at + 2);
    }
    const auto vars = z.variables();
    if (vars.size() != 1 || vars[0].kind != Variable::Kind::kZ || z != Poly(vars[0]) || vars[0].j > k) {
      throw ParseError("generator must name a single z variable with indices at most k", at + 2);
    }
    out.push_back({vars[0].i, vars[0].j, item[1] == '+'});
    pos = end + 1;
  }
  return out;
}

std::vector<Monomial> parse_basis(std::string_view text, std::size_t offset) {
  std::vector<Monomial> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    const std::string_view item = trim(raw);
    const std::size_t at = offset + pos + static_cast<std::size_t>(item.data() - raw.data());
    Poly m;
    try {
      m = parse_poly(item);
    } catch (const ParseError& e) {
      rethrow_at(e, at);
    }
    if (m.size() != 1 || m.terms().begin()->second != 1) throw ParseError("basis entry must be a monomial", at);
    out.push_back(m.terms().begin()->first);
    pos = end + 1;
  }
  return out;
}

PreorderCert parse_preorder(const std::vector<Line>& lines) {
  std::vector<std::string> flags;
  auto fields = header_fields(lines[0], flags);
  if (!flags.empty()) throw ParseError("unknown header flag '" + flags[0] + "'", lines[0].offset);
  if (!fields.contains("k") || !fields.contains("d")) {
    throw ParseError("preorder header needs k=<k> and d=<p/q>", lines[0].offset);
  }
  PreorderCert cert;
  cert.k = parse_label_count(fields["k"].first, fields["k"].second);
  if (cert.k < 2) throw ParseError("preorder certificates need k >= 2", fields["k"].second);
  cert.d = parse_rational_at(fields["d"].first, fields["d"].second);
  if (cert.d < 1) throw ParseError("d must be at least 1", fields["d"].second);
  if (fields.contains("perturb")) cert.perturb = parse_perturb_at(fields["perturb"].first, fields["perturb"].second);

  std::size_t i = 1;
  while (i < lines.size()) {
    const Line& gl = lines[i];
    if (!gl.text.starts_with("gens:")) throw ParseError("expected 'gens:' to start a block", gl.offset);
    PreorderBlock block;
    const std::string_view gtext = gl.text.substr(5);
    if (!trim(gtext).empty()) block.gens = parse_generators(gtext, gl.offset + 5, cert.k);
    if (++i >= lines.size() || !lines[i].text.starts_with("basis:")) {
      throw ParseError("expected 'basis:' after 'gens:'", i < lines.size() ? lines[i].offset : gl.offset);
    }
    const Line& bl = lines[i];
    block.basis = parse_basis(bl.text.substr(6), bl.offset + 6);
    ++i;
    const std::size_t n = block.basis.size();
    block.gram = RationalMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r, ++i) {
      if (i >= lines.size()) throw ParseError("missing Gram rows", bl.offset);
      const Line& row = lines[i];
      std::size_t pos = 0;
      for (std::size_t c = 0; c < n; ++c) {
        pos = row.text.find_first_not_of(" \t", pos);
        if (pos == std::string_view::npos) throw ParseError("Gram row has too few entries", row.offset + row.text.size());
        std::size_t end = row.text.find_first_of(" \t", pos);
        if (end == std::string_view::npos) end = row.text.size();
        block.gram(r, c) = parse_rational_at(row.text.substr(pos, end - pos), row.offset + pos);
        pos = end;
      }
      if (row.text.find_first_not_of(" \t", pos) != std::string_view::npos) {
        throw ParseError("Gram row has too many entries", row.offset + pos);
      }
    }
    if (!block.gram.is_symmetric()) throw ParseError("Gram matrix is not symmetric", bl.offset);
    cert.blocks.push_back(std::move(block));
  }
  return cert;
}

}  // namespace

std::string format_certificate(const SosCert& cert) {
  std::ostringstream out;
  out << "sos k=" << cert.k << " mode=" << to_string(cert.mode) << " perturb=" << format_perturb(cert.perturb);
  if (cert.restricted_degree0) out << " degree0";
  out << "\n";
  for (const auto& s : cert.summands) {
    out << "summand weight=" << format_rational(s.weight) << "\n";
    for (const auto& [g, c] : s.root.terms()) out << format_rational(c) << " | " << format_graph(g) << "\n";
  }
  return out.str();
}

std::string format_certificate(const PreorderCert& cert) {
  std::ostringstream out;
  out << "preorder k=" << cert.k << " d=" << format_rational(cert.d) << " perturb=" << format_perturb(cert.perturb)
      << "\n";
  for (const auto& block : cert.blocks) {
    out << "gens:";
    for (std::size_t i = 0; i < block.gens.size(); ++i) out << (i == 0 ? " " : ", ") << format_generator(block.gens[i]);
    out << "\nbasis:";
    for (std::size_t i = 0; i < block.basis.size(); ++i) out << (i == 0 ? " " : ", ") << format_monomial(block.basis[i]);
    out << "\n" << format_matrix(block.gram);
  }
  return out.str();
}

std::variant<SosCert, PreorderCert> parse_certificate(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty certificate file", 0);
  const std::string_view head = lines[0].text;
  auto keyword = head.substr(0, head.find_first_of(" \t"));
  if (keyword == "sos") return parse_sos(lines);
  if (keyword == "preorder") return parse_preorder(lines);
  throw ParseError("certificate must start with 'sos' or 'preorder'", lines[0].offset);
}

}  // namespace qgraph
