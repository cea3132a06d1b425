#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "qgraph/certificates.hpp"
#include "qgraph/density.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/quantum_graph.hpp"

namespace qgraph::cli {

namespace {

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kUsage, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kUsage, "cannot write " + path.string()};
  out << text;
  if (!out) throw CliError{kUsage, "cannot write " + path.string()};
}

template <class Parse>
auto parse_file(const std::string& path, Parse parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw CliError{kParse, path + ": " + e.what()};
  }
}

// A graph file holds one `MG` line; blank and comment lines are ignored.
LabeledMultigraph parse_graph_file(std::string_view text) {
  std::optional<LabeledMultigraph> graph;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      if (graph) throw ParseError("a graph file holds exactly one graph line", start);
      try {
        graph = parse_graph(line);
      } catch (const ParseError& e) {
        std::string what = e.what();
        what.resize(what.rfind(" (at position"));
        throw ParseError(what, start + e.position());
      }
    }
    start = end + 1;
  }
  if (!graph) throw ParseError("no graph line found", 0);
  return *graph;
}

Poly parse_poly_file(std::string_view text) {
  std::string body;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t hash = line.find('#');
    body += line.substr(0, hash);
    if (hash != std::string_view::npos) body.append(line.size() - hash, ' ');
    body += ' ';
    start = end + 1;
  }
  return parse_poly(body);
}

Rational parse_rational_flag(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw CliError{kUsage, flag + ": " + e.what()};
  }
}

std::string point_text(const std::vector<int>& point) {
  std::string s = "(";
  for (std::size_t i = 0; i < point.size(); ++i) s += (i ? "," : "") + std::to_string(point[i]);
  return s + ")";
}

std::string vector_text(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_rational(v[i]);
  return s + ")";
}

SdpOptions sdp_options_from_env() {
  SdpOptions options;
  if (const char* cap = std::getenv("QGRAPH_MAX_DIM")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end == cap || *end != '\0' || v < 1) throw CliError{kUsage, "QGRAPH_MAX_DIM must be a positive integer"};
    options.max_dim = static_cast<int>(v);
  }
  return options;
}

// ---------------------------------------------------------------------------

struct DensityArgs {
  std::string of;
  std::string target;
  bool inj = false;
};

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const auto f = parse_file(a.of, parse_graph_file);
  const auto g = parse_file(a.target, parse_graph_file);
  if (f.num_labels() != 0 || g.num_labels() != 0) throw CliError{kUsage, "density needs unlabeled graphs (k = 0)"};
  if (a.inj) {
    out << "t_inj = " << format_rational_with_decimal(t_inj_density(f, g)) << "\n";
  } else {
    out << "t = " << format_rational_with_decimal(t_density(f, g)) << "\n";
  }
  return kOk;
}

struct TArgs {
  std::string quantum;
  std::string target;
};

int cmd_t(const TArgs& a, std::ostream& out) {
  const auto q = parse_file(a.quantum, parse_quantum_graph);
  const auto g = parse_file(a.target, parse_graph_file);
  out << "t = " << format_rational_with_decimal(t_quantum(q, g)) << "\n";
  return kOk;
}

struct ParamArgs {
  std::string quantum;
  std::string target;
  int n = 0;
  bool uniform = false;
  bool zero_diag = false;
  bool clear = false;
};

int cmd_param_density(const ParamArgs& a, std::ostream& out) {
  const auto q = parse_file(a.quantum, parse_quantum_graph);
  if (q.num_labels() != 0) throw CliError{kUsage, "param-density needs an unlabeled quantum graph"};
  if (a.target.empty() == (a.n == 0)) throw CliError{kUsage, "give exactly one of --target and --n"};
  if ((a.uniform || a.zero_diag) && a.n == 0) throw CliError{kUsage, "--uniform and --zero-diag need --n"};
  RationalFn r;
  if (!a.target.empty()) {
    const auto g = parse_file(a.target, parse_graph_file);
    r = param_density(q, g);
  } else {
    r = param_density_n(q, a.n);
  }
  if (a.uniform) {
    out << format_poly(specialize_uniform(r, a.n, a.zero_diag)) << "\n";
    return kOk;
  }
  Poly numerator = r.numerator;
  if (a.zero_diag) {
    Assignment zero;
    for (int i = 1; i <= a.n; ++i) zero[Variable::y(i, i)] = Poly();
    numerator = substitute(numerator, zero);
  }
  if (a.clear || r.denom_power == 0) {
    out << format_poly(numerator) << "\n";
  } else {
    out << "(" << format_poly(numerator) << ") / (" << format_poly(weight_sum(r.num_weights)) << ")^"
        << r.denom_power << "\n";
  }
  return kOk;
}

struct PolyaArgs {
  std::string poly;
  unsigned max_n = 0;
};

int cmd_polya(const PolyaArgs& a, std::ostream& out) {
  const Poly p = parse_file(a.poly, parse_poly_file);
  const PolyaResult r = polya_test(p, a.max_n);
  if (r.success) {
    out << "success N=" << r.n << "\n";
    out << "product: " << format_poly(r.product) << "\n";
    return kOk;
  }
  out << "failure: no N <= " << a.max_n << " gives nonnegative coefficients\n";
  out << "N\tmonomial\tcoefficient\n";
  for (const auto& w : r.witnesses) {
    out << w.n << "\t" << format_monomial(w.monomial) << "\t" << format_rational(w.coefficient) << "\n";
  }
  return kReject;
}

struct ObstructArgs {
  std::string poly;
  std::string zero;
};

int cmd_obstruct(const ObstructArgs& a, std::ostream& out) {
  const Poly p = parse_file(a.poly, parse_poly_file);
  std::vector<Rational> point;
  std::stringstream ss(a.zero);
  std::string item;
  while (std::getline(ss, item, ',')) point.push_back(parse_rational_flag(item, "--zero"));
  if (orthant_zero_check(p, point)) {
    out << "zero confirmed: the form vanishes at the interior point " << vector_text(point) << "\n";
    return kOk;
  }
  out << "no zero at " << vector_text(point) << "\n";
  return kReject;
}

struct ProveArgs {
  std::string quantum;
  std::string mode;
  int k = 0;
  int degree = 1;
  std::string epsilon;
  std::string d;
  std::string perturb;
  bool preorder = false;
  std::string out;
};

int cmd_prove(const ProveArgs& a, std::ostream& out) {
  const auto q = parse_file(a.quantum, parse_quantum_graph);
  const Mode mode = a.mode == "simple" ? Mode::kSimple : Mode::kMulti;
  if (q.mode() != mode) {
    throw CliError{kUsage, "--mode " + a.mode + " does not match the quantum graph file (mode " + to_string(q.mode()) +
                               ")"};
  }
  if (q.num_labels() != 0) throw CliError{kUsage, "prove needs an unlabeled quantum graph"};
  const std::optional<Rational> eps =
      a.epsilon.empty() ? std::nullopt : std::optional<Rational>(parse_rational_flag(a.epsilon, "--epsilon"));
  if (eps && *eps < 0) throw CliError{kUsage, "--epsilon must be nonnegative"};

  if (mode == Mode::kSimple) {
    if (!eps) throw CliError{kUsage, "--epsilon is required in simple mode"};
    if (a.preorder || !a.perturb.empty()) throw CliError{kUsage, "--preorder and --perturb need --mode multi"};
    const SimpleSearchResult r = sos_search_simple(q, a.k, *eps);
    if (r.status == SearchStatus::kInfeasible) {
      out << "infeasible: the symmetrized target plus epsilon has minimum "
          << format_rational_with_decimal(r.min_value) << " at z = " << point_text(r.witness_point) << "\n";
      return kReject;
    }
    if (r.status != SearchStatus::kCertificate) {
      out << "indeterminate: the interpolated certificate failed exact verification\n";
      return kIndeterminate;
    }
    write_file(a.out, format_certificate(r.cert));
    out << "certificate: " << r.cert.summands.size() << " squares in A_" << a.k << "^0, minimum value "
        << format_rational_with_decimal(r.min_value) << ", written to " << a.out << "\n";
    return kOk;
  }

  PerturbSpec perturb;
  if (!a.perturb.empty()) {
    if (!eps || *eps == 0) throw CliError{kUsage, "--perturb needs a positive --epsilon"};
    const auto colon = a.perturb.find(':');
    const std::string kind = a.perturb.substr(0, colon);
    if (colon == std::string::npos) throw CliError{kUsage, "--perturb expects slow:<r> or bounded:<r>"};
    const Rational r = parse_rational_flag(a.perturb.substr(colon + 1), "--perturb");
    if (r.get_den() != 1 || r < 0 || r > 30) throw CliError{kUsage, "--perturb order must be an integer in 0..30"};
    const unsigned order = static_cast<unsigned>(r.get_num().get_ui());
    if (kind == "slow") {
      perturb = PerturbSpec::slow(*eps, order);
    } else if (kind == "bounded") {
      if (a.d.empty()) throw CliError{kUsage, "--perturb bounded needs --d"};
      perturb = PerturbSpec::bounded(*eps, parse_rational_flag(a.d, "--d"), order);
    } else {
      throw CliError{kUsage, "--perturb expects slow:<r> or bounded:<r>"};
    }
  } else if (eps && *eps > 0) {
    perturb = PerturbSpec::plain_eps(*eps);
  }
  const SdpOptions options = sdp_options_from_env();
  MultiSearchResult r;
  if (a.preorder) {
    const Rational d = a.d.empty() ? Rational(1) : parse_rational_flag(a.d, "--d");
    r = preorder_search(q, a.k, a.degree, d, perturb, options);
  } else {
    r = sos_search_multi(q, a.k, a.degree, perturb, options);
  }
  out << "gram dimension " << r.gram_dimension << ", " << r.constraint_count << " constraints\n";
  switch (r.status) {
    case SearchStatus::kCertificate:
      write_file(a.out, a.preorder ? format_certificate(r.preorder) : format_certificate(r.cert));
      out << "certificate written to " << a.out << " (" << r.diagnostics << ")\n";
      return kOk;
    case SearchStatus::kInfeasible:
      out << "infeasible: " << r.diagnostics << "\n";
      return kReject;
    case SearchStatus::kIndeterminate:
      out << "indeterminate: " << r.diagnostics << "\n";
      return kIndeterminate;
  }
  return kIndeterminate;
}

struct CheckArgs {
  std::string cert;
  std::string quantum;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const auto cert = parse_file(a.cert, parse_certificate);
  const auto q = parse_file(a.quantum, parse_quantum_graph);
  VerifyResult r;
  try {
    if (const auto* sos = std::get_if<SosCert>(&cert)) {
      r = verify_sos(*sos, q, sos->perturb);
    } else {
      const auto& po = std::get<PreorderCert>(cert);
      r = verify_preorder(po, q, po.perturb);
    }
  } catch (const NonPsdGramError& e) {
    out << "reject: " << e.what() << "; witness v = " << vector_text(e.witness())
        << " gives v^T G v = " << format_rational(e.value()) << "\n";
    return kReject;
  }
  if (r.accepted) {
    out << "accept\n";
    return kOk;
  }
  out << "reject\ndifference: " << describe(r.difference) << "\n";
  return kReject;
}

// ---------------------------------------------------------------------------
// Built-in examples

const char* const kGoodmanQg =
    "# cherry minus two disjoint edges\n"
    "mode: simple\n"
    "k: 0\n"
    "1 | MG 3 0 : 1-2,1-3\n"
    "-1 | MG 4 0 : 1-2,3-4\n";

const char* const kGoodmanCert =
    "# (u - v)^2 with u the edge at the label and v an edge beside it\n"
    "sos k=1 mode=simple perturb=none\n"
    "summand weight=1\n"
    "1 | MG 2 1 : 1-2\n"
    "-1 | MG 3 1 : 2-3\n";

const char* const kGoodmanC =
    "# triangle - 2 (two disjoint edges) + edge\n"
    "mode: simple\n"
    "k: 0\n"
    "1 | MG 3 0 : 1-2,1-3,2-3\n"
    "-2 | MG 4 0 : 1-2,3-4\n"
    "1 | MG 2 0 : 1-2\n";

const char* const kRobinsonQg =
    "# Robinson quantum multigraph\n"
    "mode: multi\n"
    "k: 0\n"
    "1 | MG 2 0 : 1-2*6\n"
    "1 | MG 3 0 : 1-2*2,1-3*2,2-3*2\n"
    "-2 | MG 3 0 : 1-2*4,1-3*2\n";

const char* const kRobinsonPoly =
    "# Robinson polynomial\n"
    "z12^6 + z13^6 + z23^6\n"
    "- z12^4*z13^2 - z12^2*z13^4 - z12^4*z23^2 - z12^2*z23^4 - z13^4*z23^2 - z13^2*z23^4\n"
    "+ 3*z12^2*z13^2*z23^2\n";

int cmd_examples(const std::string& name, const std::string& dir, std::ostream& out) {
  const std::filesystem::path base(dir);
  std::vector<std::pair<std::string, const char*>> files;
  if (name == "goodman") {
    files = {{"goodman.qg", kGoodmanQg}, {"goodman.cert", kGoodmanCert}, {"goodman_c.qg", kGoodmanC}};
  } else if (name == "robinson") {
    files = {{"robinson.qg", kRobinsonQg}, {"robinson.poly", kRobinsonPoly}};
  } else {
    throw CliError{kUsage, "unknown example '" + name + "'; available: goodman, robinson"};
  }
  for (const auto& [file, text] : files) {
    write_file(base / file, text);
    out << "wrote " << (base / file).string() << "\n";
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with quantum graphs: densities, sums of squares and certificates", "qgraph"};
  app.require_subcommand(1);

  DensityArgs density;
  auto* c_density = app.add_subcommand("density", "Exact homomorphism density t(F,G)");
  c_density->add_option("--of", density.of, "Pattern graph file")->required();
  c_density->add_option("--target", density.target, "Target graph file")->required();
  c_density->add_flag("--inj", density.inj, "Injective density");

  TArgs t;
  auto* c_t = app.add_subcommand("t", "Density of a quantum graph in a target graph");
  c_t->add_option("--quantum", t.quantum, "Quantum graph file")->required();
  c_t->add_option("--target", t.target, "Target graph file")->required();

  ParamArgs param;
  auto* c_param = app.add_subcommand("param-density", "Parametrized density as a polynomial");
  c_param->add_option("--quantum", param.quantum, "Quantum graph file")->required();
  c_param->add_option("--target", param.target, "Simple target graph file");
  c_param->add_option("--n", param.n, "Complete weighted target on n vertices")->check(CLI::Range(1, kMaxVertices));
  c_param->add_flag("--uniform", param.uniform, "Substitute x_i = 1/n");
  c_param->add_flag("--zero-diag", param.zero_diag, "Substitute y_ii = 0");
  c_param->add_flag("--clear-denominators", param.clear, "Print the numerator only");

  PolyaArgs polya;
  auto* c_polya = app.add_subcommand("polya", "Polya test on a form in x variables");
  c_polya->add_option("--poly", polya.poly, "Polynomial file")->required();
  c_polya->add_option("--max-n", polya.max_n, "Largest exponent to try")->required()->check(CLI::Range(0, 200));

  ObstructArgs obstruct;
  auto* c_obstruct = app.add_subcommand("obstruct", "Check for a zero in the open positive orthant");
  c_obstruct->add_option("--poly", obstruct.poly, "Polynomial file")->required();
  c_obstruct->add_option("--zero", obstruct.zero, "Comma-separated point, e.g. 1,1")->required();

  ProveArgs prove;
  auto* c_prove = app.add_subcommand("prove", "Search for a certificate");
  c_prove->add_option("--quantum", prove.quantum, "Quantum graph file")->required();
  c_prove->add_option("--mode", prove.mode, "simple or multi")->required()->check(CLI::IsMember({"simple", "multi"}));
  c_prove->add_option("--k", prove.k, "Number of labels")->required()->check(CLI::Range(2, kMaxVertices));
  c_prove->add_option("--degree", prove.degree, "Largest basis degree (multi mode)")->check(CLI::Range(0, 12));
  c_prove->add_option("--epsilon", prove.epsilon, "Error term p/q");
  c_prove->add_option("--d", prove.d, "Multiplicity bound d (preorder and bounded perturbation)");
  c_prove->add_option("--perturb", prove.perturb, "slow:<r> or bounded:<r>");
  c_prove->add_flag("--preorder", prove.preorder, "Search in PO(d +- z_ij)");
  c_prove->add_option("--out", prove.out, "Certificate output file")->required();

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Verify a certificate exactly");
  c_check->add_option("--cert", check.cert, "Certificate file")->required();
  c_check->add_option("--quantum", check.quantum, "Target quantum graph file")->required();

  std::string example;
  std::string example_dir = ".";
  auto* c_examples = app.add_subcommand("examples", "Write built-in example files");
  c_examples->add_option("name", example, "goodman or robinson")->required();
  c_examples->add_option("--dir", example_dir, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (c_density->parsed()) return cmd_density(density, out);
    if (c_t->parsed()) return cmd_t(t, out);
    if (c_param->parsed()) return cmd_param_density(param, out);
    if (c_polya->parsed()) return cmd_polya(polya, out);
    if (c_obstruct->parsed()) return cmd_obstruct(obstruct, out);
    if (c_prove->parsed()) return cmd_prove(prove, out);
    if (c_check->parsed()) return cmd_check(check, out);
    if (c_examples->parsed()) return cmd_examples(example, example_dir, out);
  } catch (const CliError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kIndeterminate;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << "error: no command given\n";
  return kUsage;
}

}  // namespace qgraph::cli
