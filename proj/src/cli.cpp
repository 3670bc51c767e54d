#include "owcad/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <regex>
#include <set>
#include <sstream>

#include "owcad/bench.hpp"
#include "owcad/copositive.hpp"
#include "owcad/owcad.hpp"
#include "owcad/parse.hpp"
#include "owcad/psd.hpp"

namespace owcad {

namespace {

using Json = nlohmann::ordered_json;

// Errors raised by the front end itself; `code` is the machine-readable tag.
struct CliError : std::runtime_error {
  std::string code;
  CliError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

std::string read_all(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path.empty() || path == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw CliError("io_error", "cannot read " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t\r\n"));
    cur.erase(cur.find_last_not_of(" \t\r\n") + 1);
    out.push_back(cur);
  }
  return out;
}

std::vector<std::string> identifiers(const std::string& text) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  std::set<std::string> seen;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ident); it != std::sregex_iterator(); ++it)
    seen.insert(it->str());
  return {seen.begin(), seen.end()};
}

// x2 before x10: compare the alphabetic stem, then the numeric suffix.
bool natural_less(const std::string& a, const std::string& b) {
  auto cut = [](const std::string& s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    return k;
  };
  const std::size_t ka = cut(a), kb = cut(b);
  const std::string sa = a.substr(0, ka), sb = b.substr(0, kb);
  if (sa != sb) return sa < sb;
  const std::string na = a.substr(ka), nb = b.substr(kb);
  if (na.size() != nb.size()) return na.size() < nb.size();
  return na < nb;
}

struct PolyInput {
  Context ctx;
  MPoly f;
};

PolyInput read_poly(const std::string& path, const std::string& order, std::istream& in) {
  const std::string text = read_all(path, in);
  std::vector<std::string> used = identifiers(text);
  std::vector<std::string> names;
  if (order.empty()) {
    names = used;
    std::sort(names.begin(), names.end(), natural_less);
  } else {
    names = split(order, ',');
    for (const auto& n : names)
      if (n.empty()) throw CliError("usage", "empty name in --order");
  }
  if (names.empty()) throw CliError("usage", "the polynomial has no variables");
  Context ctx(names);
  MPoly f = parse_poly(text, ctx);
  for (const auto& n : names)
    if (std::find(used.begin(), used.end(), n) == used.end())
      throw CliError("order_mismatch", "variable " + n + " of --order does not occur in the input");
  return {std::move(ctx), std::move(f)};
}

Json point(const std::vector<Rat>& p) {
  Json a = Json::array();
  for (const auto& r : p) a.push_back(r.get_str());
  return a;
}

Json samples_json(const std::vector<SamplePoint>& s) {
  Json a = Json::array();
  for (const auto& p : s) a.push_back(point(p.coords));
  return a;
}

Json names_json(const Context& ctx) { return Json(ctx.names()); }

std::string show(const MPoly& f, const Context& ctx) {
  if (f.is_constant()) return f.constant_value().get_str();
  return to_string(f, ctx);
}

// --- matrices ---

Rat parse_entry(const Json& e) {
  if (e.is_number_integer()) return Rat(Int(e.dump()));
  if (e.is_string()) {
    Rat r;
    if (r.set_str(e.get<std::string>(), 10) != 0) throw CliError("invalid_matrix", "bad entry " + e.dump());
    r.canonicalize();
    return r;
  }
  throw CliError("invalid_matrix", "entries must be integers or \"p/q\" strings, got " + e.dump());
}

Rat parse_entry(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0) throw CliError("invalid_matrix", "bad entry '" + s + "'");
  r.canonicalize();
  return r;
}

struct MatrixInput {
  QForm q;
  Int scale = 1;  // every entry was multiplied by this
};

MatrixInput read_matrix(const std::string& path, bool affine_csv, std::istream& in) {
  const std::string text = read_all(path, in);
  std::vector<std::vector<Rat>> M;
  bool affine = affine_csv;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::exception& e) {
      throw CliError("invalid_matrix", e.what());
    }
    if (!doc.contains("A") || !doc["A"].is_array()) throw CliError("invalid_matrix", "missing array \"A\"");
    for (const auto& row : doc["A"]) {
      if (!row.is_array()) throw CliError("invalid_matrix", "rows of \"A\" must be arrays");
      M.emplace_back();
      for (const auto& e : row) M.back().push_back(parse_entry(e));
    }
    affine = false;
    if (doc.contains("n")) {
      if (!doc["n"].is_number_unsigned()) throw CliError("invalid_matrix", "\"n\" must be a nonnegative integer");
      const auto n = doc["n"].get<std::size_t>();
      if (M.size() == n + 1) affine = true;
      else if (M.size() != n) throw CliError("invalid_matrix", "\"A\" must have n or n+1 rows");
    }
  } else {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#')
        continue;
      M.emplace_back();
      for (const auto& cell : split(line, ',')) M.back().push_back(parse_entry(cell));
    }
  }
  if (M.empty()) throw CliError("invalid_matrix", "empty matrix");
  Int den = 1;
  for (const auto& row : M)
    for (const auto& r : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
  std::vector<std::vector<Int>> Z;
  for (const auto& row : M) {
    Z.emplace_back();
    for (const auto& r : row) Z.back().push_back(Int(r.get_num() * (den / r.get_den())));
  }
  MatrixInput m;
  m.scale = den;
  try {
    m.q = QForm::from_matrix(Z, affine);
  } catch (const std::invalid_argument& e) {
    throw CliError("invalid_matrix", e.what());
  }
  return m;
}

// --- subcommands ---

Json cmd_owcad(const PolyInput& p) {
  OwcadOutput o = open_weak_cad(p.f);
  Json levels = Json::array();
  for (unsigned j = 1; j < o.n; ++j) {
    Json b = Json::array();
    for (const auto& g : o.branch_factors[j - 1]) b.push_back(show(g, p.ctx));
    levels.push_back({{"j", j},
                      {"h", show(o.h[j - 1], p.ctx)},
                      {"hp", show(o.hp[j - 1], p.ctx)},
                      {"branches", std::move(b)}});
  }
  return {{"command", "owcad"}, {"order", names_json(p.ctx)}, {"n", o.n}, {"levels", std::move(levels)}};
}

Json sample_json(const std::string& command, const std::string& method, const Context& ctx,
                 const std::vector<SamplePoint>& s, const LiftStats& st, bool with_samples) {
  Json j = {{"command", command}};
  if (!method.empty()) j["method"] = method;
  j["order"] = names_json(ctx);
  j["count"] = s.size();
  j["per_level"] = st.per_level;
  if (with_samples) j["samples"] = samples_json(s);
  return j;
}

Json cmd_psd(const PolyInput& p, const std::string& method, bool trace) {
  if (p.f.is_zero()) throw CliError("invalid_argument", "the zero polynomial");
  PsdVerdict v = method == "opencad" ? psd_via_open_cad(p.f) : psd_hp_two(p.f, p.ctx.names());
  Json j = {{"command", "psd"}, {"method", method}, {"order", names_json(p.ctx)}, {"answer", to_string(v.answer)}};
  j["witness"] = v.witness ? point(v.witness->coords) : Json(nullptr);
  j["fallback"] = v.fallback;
  if (trace) j["trace"] = v.trace;
  return j;
}

Json cmd_cmt(const MatrixInput& m, const CmtOptions& opts) {
  CopositivityVerdict v = cmt(m.q, opts);
  Json j = {{"command", "cmt"}, {"n", m.q.n}, {"answer", to_string(v.answer)}};
  j["witness"] = v.witness ? point(*v.witness) : Json(nullptr);
  j["genericity_flags"] = v.genericity_flags;
  j["faces"] = v.faces;
  j["cache_hits"] = v.cache_hits;
  j["samples"] = v.samples;
  j["escalated"] = v.escalated;
  if (m.scale != 1) j["scale"] = m.scale.get_str();
  return j;
}

Json cmd_bench(unsigned trials, unsigned degree, std::uint64_t seed) {
  if (trials == 0) throw CliError("usage", "--trials must be at least 1");
  auto rows = bench_roots(trials, degree, seed);
  Json r = Json::array();
  bool all = true;
  for (const auto& row : rows) {
    r.push_back({{"trial", row.trial},
                 {"bp_zy", row.bp_zy},
                 {"bp_yz", row.bp_yz},
                 {"hp", row.hp},
                 {"dominance", row.dominance}});
    all = all && row.dominance;
  }
  return {{"command", "bench-roots"}, {"trials", trials}, {"degree", degree}, {"seed", seed},
          {"rows", std::move(r)}, {"all_dominant", all}};
}

Json error_json(const std::string& code, const std::string& msg) {
  return {{"error", {{"code", code}, {"message", msg}}}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Open weak CAD, polynomial semi-definiteness and copositivity", "owcad"};
  app.require_subcommand(1);

  std::string input, order, method = "hptwo", matrix_path, psd_method = "hptwo";
  unsigned j = 1, trials = 100, degree = 8;
  std::uint64_t seed = 1;
  bool no_samples = false, trace = false, two_point = false, escalate = false, affine = false;

  auto poly_options = [&](CLI::App* c) {
    c->add_option("input", input, "polynomial file; '-' or omitted reads stdin");
    c->add_option("--order", order, "comma separated variables, lowest first (last is projected first)");
  };
  CLI::App* c_owcad = app.add_subcommand("owcad", "open weak CAD projection polynomials");
  poly_options(c_owcad);
  CLI::App* c_open = app.add_subcommand("opencad", "open CAD sample points");
  poly_options(c_open);
  c_open->add_flag("--no-samples", no_samples, "print counts only");
  CLI::App* c_sample = app.add_subcommand("sample", "open sample by a chosen scheme");
  poly_options(c_sample);
  c_sample->add_option("--method", method, "hptwo, reduced or opencad")
      ->check(CLI::IsMember({"hptwo", "reduced", "opencad"}));
  c_sample->add_option("--j", j, "reduced open CAD w.r.t. [xn..x_{j+1}]");
  c_sample->add_flag("--no-samples", no_samples, "print counts only");
  CLI::App* c_psd = app.add_subcommand("psd", "decide f >= 0 on R^n");
  poly_options(c_psd);
  c_psd->add_option("--method", psd_method, "hptwo or opencad")->check(CLI::IsMember({"hptwo", "opencad"}));
  c_psd->add_flag("--trace", trace, "include the subproblem trace");
  CLI::App* c_cmt = app.add_subcommand("cmt", "decide copositivity of a quadratic form");
  c_cmt->add_option("--matrix,matrix", matrix_path, "JSON {\"n\":k,\"A\":[[...]]} or CSV; '-' reads stdin");
  c_cmt->add_flag("--two-point", two_point, "at most two samples per fiber");
  c_cmt->add_flag("--escalate", escalate, "decide inconclusive cases by the PSD test of the quartic lift");
  c_cmt->add_flag("--affine", affine, "CSV input carries the affine border as last row and column");
  CLI::App* c_bench = app.add_subcommand("bench-roots", "real root counts of Bp chains against Hp");
  c_bench->add_option("--trials", trials, "number of random polynomials");
  c_bench->add_option("--degree", degree, "total degree bound");
  c_bench->add_option("--seed", seed, "generator seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kDecided;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kDecided;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << error_json("usage", e.what()).dump(2) << "\n";
    return kError;
  }

  Json result;
  int code = kDecided;
  try {
    if (c_owcad->parsed()) {
      result = cmd_owcad(read_poly(input, order, in));
    } else if (c_open->parsed()) {
      PolyInput p = read_poly(input, order, in);
      LiftStats st;
      auto s = open_cad(p.f, &st);
      result = sample_json("opencad", "", p.ctx, s, st, !no_samples);
    } else if (c_sample->parsed()) {
      PolyInput p = read_poly(input, order, in);
      LiftStats st;
      std::vector<SamplePoint> s;
      if (method == "hptwo") {
        s = hp_two(p.f, &st);
      } else if (method == "opencad") {
        s = open_cad(p.f, &st);
      } else {
        const unsigned n = p.ctx.size();
        if (j < 1 || j >= n) throw CliError("usage", "--j must satisfy 1 <= j < " + std::to_string(n));
        s = reduced_open_cad(p.f, j, std::nullopt, &st);
      }
      result = sample_json("sample", method, p.ctx, s, st, !no_samples);
      if (method == "reduced") result["j"] = j;
    } else if (c_psd->parsed()) {
      result = cmd_psd(read_poly(input, order, in), psd_method, trace);
    } else if (c_cmt->parsed()) {
      result = cmd_cmt(read_matrix(matrix_path, affine, in), {.two_point = two_point, .escalate = escalate});
      if (result["answer"] == to_string(CopositiveAnswer::Inconclusive)) code = kInconclusive;
    } else {
      // wall clock goes to stderr so stdout stays byte-identical between runs
      const auto t0 = std::chrono::steady_clock::now();
      result = cmd_bench(trials, degree, seed);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      err << "bench-roots: " << trials << " trials in " << dt.count() << " s\n";
    }
  } catch (const CliError& e) {
    result = error_json(e.code, e.what());
    code = kError;
  } catch (const UndeclaredVariable& e) {
    result = error_json("undeclared_variable", e.what());
    result["error"]["line"] = e.line();
    result["error"]["column"] = e.column();
    code = kError;
  } catch (const ParseError& e) {
    result = error_json("parse_error", e.what());
    result["error"]["line"] = e.line();
    result["error"]["column"] = e.column();
    code = kError;
  } catch (const WellDefinednessBreach& e) {
    result = error_json("not_well_defined", e.what());
    code = kError;
  } catch (const DegenerateFiber& e) {
    result = error_json("degenerate_fiber", e.what());
    code = kError;
  } catch (const std::invalid_argument& e) {
    result = error_json("invalid_argument", e.what());
    code = kError;
  } catch (const std::domain_error& e) {
    result = error_json("domain_error", e.what());
    code = kError;
  } catch (const std::exception& e) {
    result = error_json("internal", e.what());
    code = kError;
  }
  out << result.dump(2) << "\n";
  return code;
}

}  // namespace owcad
