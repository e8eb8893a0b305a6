#include "lpd/cli.hpp"

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lpd/cohomology_report.hpp"
#include "lpd/compact_solver.hpp"
#include "lpd/index_core.hpp"
#include "lpd/riemann_roch.hpp"
#include "lpd/verify.hpp"

namespace lpd {

namespace {

struct RunConfig {
  std::string p;
  int q = 1;
  int dim = 2;
  int genus = 0;
  int degree = 1;
  std::string dimtable;
  std::string format;
  std::string out;
  std::uint64_t seed = 2024;
  bool fast = false;
  // riemann-roch
  int mu_min = -10, mu_max = 10;
  // solve
  std::string case_path;
  std::string family = "radial-phase";
  int n = 256;
  // verify
  std::string suite = "all";
};

struct Output {
  std::string text;
  int code = exit_ok;
};

std::string join(const std::vector<Rational>& xs, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + to_string(xs[i]);
  return s;
}

Output cmd_indices(const RunConfig& c) {
  const IndexBundle b = make_index_bundle(parse_exponent(c.p), c.q, c.dim);
  const std::string nu = to_string(b.nu.upper) + (b.nu.upper_inclusive ? " (inclusive)" : " (exclusive)");
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"p", b.p.str()},
      {"q", std::to_string(b.q)},
      {"d", std::to_string(b.d)},
      {"a", std::to_string(b.a)},
      {"c", std::to_string(b.c)},
      {"s", to_string(b.s)},
      {"k(p,s)", std::to_string(b.k_of_s)},
      {"w(p)", to_string(b.w)},
      {"nu_max", nu},
      {"breakpoints", join(b.breakpoints, " ")},
  };
  std::ostringstream out;
  if (c.format == "json") {
    nlohmann::json j;
    j["p"] = b.p.str();
    j["q"] = b.q;
    j["d"] = b.d;
    j["a"] = b.a;
    j["c"] = b.c;
    j["s"] = to_string(b.s);
    j["k_of_s"] = b.k_of_s;
    j["w"] = to_string(b.w);
    j["nu_max"] = {{"value", to_string(b.nu.upper)}, {"inclusive", b.nu.upper_inclusive}};
    j["breakpoints"] = nlohmann::json::array();
    for (const Rational& x : b.breakpoints) j["breakpoints"].push_back(to_string(x));
    out << j.dump(2) << "\n";
  } else if (c.format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << "\"" << k << "\",\"" << v << "\"\n";
  } else {
    for (const auto& [k, v] : rows) out << k << " = " << v << "\n";
  }
  return {out.str()};
}

Output cmd_report(const RunConfig& c) {
  const DimensionSource src = c.dimtable.empty() ? DimensionSource::from_curve(CurveData{c.genus, c.degree})
                                                 : DimensionSource::from_table(load_dim_table(c.dimtable));
  const std::vector<BandRow> rows = band_table(src, c.dim, c.q);
  if (c.format == "json") return {rows_to_json(rows).dump(2) + "\n"};
  if (c.format == "csv") return {render_csv(rows)};
  return {render_markdown(rows, c.q)};
}

Output cmd_riemann_roch(const RunConfig& c) {
  if (c.mu_min > c.mu_max) throw std::invalid_argument("--mu-min exceeds --mu-max");
  const CurveData curve{c.genus, c.degree};
  const DimTable t = computed_table(curve, c.mu_min, c.mu_max);
  if (c.format == "json") return {to_json(t).dump(2) + "\n"};
  std::ostringstream out;
  if (c.format == "csv") {
    out << "mu,degree,h0,h1\n";
    for (const auto& [mu, e] : t.entries) out << mu << "," << curve.degree(mu) << "," << e.h0 << "," << e.h1 << "\n";
  } else {
    out << "| mu | deg | h0 | h1 |\n| --- | --- | --- | --- |\n";
    for (const auto& [mu, e] : t.entries) {
      out << "| " << mu << " | " << curve.degree(mu) << " | " << e.h0 << " | " << e.h1 << " |\n";
    }
  }
  return {out.str()};
}

Output cmd_solve(const RunConfig& c) {
  FormFamily family;
  SolverConfig cfg;
  if (!c.case_path.empty()) {
    std::ifstream in(c.case_path);
    if (!in) throw std::invalid_argument("cannot open case file '" + c.case_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("malformed case file: ") + e.what());
    }
    std::tie(family, cfg) = load_case(j);
  } else {
    family = family_by_name(c.family, c.dim);
    cfg.p = parse_exponent(c.p.empty() ? "2" : c.p);
    cfg.n = c.n;
  }
  const SolverReport r = solve_compact_support(family, cfg);
  const int code = r.passed() ? exit_ok : exit_failure;
  if (c.format == "json") return {to_json(r).dump(2) + "\n", code};
  if (c.format == "csv") return {to_csv(r), code};
  std::ostringstream out;
  out.precision(4);
  out << "family " << r.family << ", d = " << r.d << ", q = " << r.q << ", p = " << r.p.str() << ", a = " << r.weight
      << ", n = " << r.n << "\n";
  out << "closure defect " << r.closure_defect << (r.closure_ok ? " (ok)" : " (not closed)") << "\n";
  if (r.error) out << "error: " << *r.error << "\n";
  out << "| annulus | relative residual |\n| --- | --- |\n";
  for (const AnnulusReport& a : r.annuli) out << "| [" << a.r_in << ", " << a.r_out << ") | " << a.relative() << " |\n";
  out << (r.passed() ? "PASS" : "FAIL") << "\n";
  return {out.str(), code};
}

Output cmd_verify(const RunConfig& c) {
  verify::Options opt;
  opt.fast = c.fast;
  opt.seed = c.seed;
  const std::vector<verify::PropertyResult> results = verify::run_suite(c.suite, opt);
  const int code = verify::all_passed(results) ? exit_ok : exit_failure;
  std::ostringstream out;
  if (c.format == "json") {
    out << verify::to_json(results).dump(2) << "\n";
  } else if (c.format == "csv") {
    out << "suite,name,status,detail\n";
    for (const auto& r : results) {
      out << r.suite << ",\"" << r.name << "\"," << (r.passed ? "pass" : "fail") << ",\"" << r.detail << "\"\n";
    }
  } else {
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " -- " << r.detail << "\n";
    }
  }
  return {out.str(), code};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"L^p Dolbeault obstruction spaces of cone singularities"};
  app.name("lpdolbeault");
  app.require_subcommand(1, 1);
  RunConfig c;

  const auto formats = CLI::IsMember({"json", "csv", "md"});
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "json | csv | md")->check(formats);
    sub->add_option("--out", c.out, "write output here instead of stdout");
  };

  CLI::App* indices = app.add_subcommand("indices", "index bundle a, c, s, k(p,s), w(p), nu, breakpoints");
  indices->add_option("--p", c.p, "exponent: integer, fraction or inf")->required();
  indices->add_option("--q", c.q, "form degree");
  indices->add_option("--dim", c.dim, "dimension d");
  common(indices);

  CLI::App* report = app.add_subcommand("report", "band table of dim H^q_(p)(D*, O)");
  report->add_option("--genus", c.genus, "genus of X when d = 2");
  report->add_option("--degree", c.degree, "degree e of N^{-1}");
  report->add_option("--dim", c.dim, "dimension d");
  report->add_option("--q", c.q, "form degree");
  report->add_option("--dimtable", c.dimtable, "JSON table of h^q(X, O(N^-mu))")->check(CLI::ExistingFile);
  common(report);

  CLI::App* rr = app.add_subcommand("riemann-roch", "h0 and h1 of N^-mu on a curve");
  rr->add_option("--genus", c.genus, "0 or 1");
  rr->add_option("--degree", c.degree, "degree e of N^{-1}");
  rr->add_option("--mu-min", c.mu_min, "first twist");
  rr->add_option("--mu-max", c.mu_max, "last twist");
  common(rr);

  CLI::App* solve = app.add_subcommand("solve", "compact-support dbar solve on the punctured ball");
  solve->add_option("--case", c.case_path, "JSON case file; overrides the flags below")->check(CLI::ExistingFile);
  solve->add_option("--family", c.family, "test form family")->check(CLI::IsMember(family_names()));
  solve->add_option("--dim", c.dim, "dimension d");
  solve->add_option("--p", c.p, "exponent (default 2)");
  solve->add_option("--n", c.n, "fiber grid size");
  common(solve);

  CLI::App* ver = app.add_subcommand("verify", "property suites");
  ver->add_option("--suite", c.suite, "indices | rr | solver | geometry | all")->check(CLI::IsMember(verify::suite_names()));
  ver->add_flag("--fast", c.fast, "reduced grids and relaxed tolerances");
  ver->add_option("--seed", c.seed, "Monte-Carlo seed");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  if (c.format.empty()) c.format = cmd == solve || cmd == ver ? "json" : "md";

  Output result;
  try {
    if (cmd == indices) result = cmd_indices(c);
    else if (cmd == report) result = cmd_report(c);
    else if (cmd == rr) result = cmd_riemann_roch(c);
    else if (cmd == solve) result = cmd_solve(c);
    else result = cmd_verify(c);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }

  if (c.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(c.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << c.out << "'\n";
      return exit_usage;
    }
    file << result.text;
  }
  return result.code;
}

}  // namespace lpd
