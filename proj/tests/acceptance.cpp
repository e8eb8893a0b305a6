// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lpd/cli.hpp"
#include "lpd/cohomology_report.hpp"
#include "lpd/riemann_roch.hpp"
#include "lpd/verify.hpp"

namespace {

using lpd::verify::PropertyResult;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string report(std::vector<const char*> args) {
  args.insert(args.begin(), "lpdolbeault");
  std::ostringstream out, err;
  if (lpd::run_cli(static_cast<int>(args.size()), args.data(), out, err) != 0) return "error: " + err.str();
  return out.str();
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<bool(std::string&)> check;
};

bool collect(const std::vector<PropertyResult>& results, std::string& detail) {
  bool ok = true;
  for (const PropertyResult& r : results) {
    if (!detail.empty()) detail += "; ";
    detail += r.detail;
    ok = ok && r.passed;
  }
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "genus-0 band table", 1,
       [](std::string& d) {
         const std::string got = report({"report", "--genus", "0", "--degree", "1", "--dim", "2", "--q", "1"});
         const std::string want =
             "| p | dim H^1_(p)(D*, O) |\n| --- | --- |\n| p > 4/3 | =0 |\n| p = 4/3 | ≤1 |\n| p < 4/3 | =1 |\n";
         const auto rows = lpd::band_table(lpd::CurveData{0, 1}, 2, 1);
         d = std::to_string(rows.size()) + " bands";
         return got == want && rows.size() == 3;
       }},
      {2, "genus-1 band table vs golden", 1,
       [](std::string& d) {
         const std::string got = report({"report", "--genus", "1", "--degree", "1", "--dim", "2", "--q", "1"});
         const std::string want = slurp(LPD_GOLDEN_DIR "/genus1_q1.md");
         const bool ok = !want.empty() && got == want;
         d = ok ? "7 bands, byte-identical" : "differs from golden";
         return ok;
       }},
      {3, "index identities", 5,
       [](std::string& d) { return collect({lpd::verify::index_identities(200)}, d); }},
      {4, "Riemann-Roch, Serre duality, P^1 vanishing", 1,
       [](std::string& d) {
         return collect({lpd::verify::riemann_roch_identities(), lpd::verify::cp1_vanishing_crosscheck()}, d);
       }},
      {5, "Cauchy transform disc oracle", 60,
       [](std::string& d) { return collect({lpd::verify::disc_oracle(256, 0.02, 1.5)}, d); }},
      {6, "homotopy formula residual in C^2", 120,
       [](std::string& d) { return collect({lpd::verify::homotopy_refinement({64, 128, 256}, 0.05)}, d); }},
      {7, "compact-support solve, radial phase data", 120,
       [](std::string& d) { return collect({lpd::verify::compact_solver_residual(256, 0.05)}, d); }},
      {8, "blow-up L^p transfer: classifier and Monte-Carlo scaling", 60,
       [](std::string& d) {
         return collect({lpd::verify::classifier_grid(), lpd::verify::transfer_scaling(2024, 4000)}, d);
       }},
      {9, "P^1 criterion for genus 0, 1 and a genus-2 table", 1,
       [](std::string& d) {
         const auto g0 = lpd::cp1_criterion(lpd::CurveData{0, 1});
         const auto g1 = lpd::cp1_criterion(lpd::CurveData{1, 1});
         const auto g2 = lpd::cp1_criterion(
             lpd::DimensionSource::from_table(lpd::load_dim_table(LPD_GOLDEN_DIR "/genus2_generic.json")));
         d = "lower bounds " + std::to_string(g0.lower) + ", " + std::to_string(g1.lower) + ", " +
             std::to_string(g2.lower);
         return g0.vanishes && !g1.vanishes && !g2.vanishes && g0.lower == 0 && g1.lower == 1 && g2.lower == 2;
       }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    if (!in_time) detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    ok = ok && in_time;
    failures += !ok;
    std::printf("%s AC%d %s [%.2f s] %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
