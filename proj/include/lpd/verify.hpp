#pragma once

// Property suites behind `lpdolbeault verify`. Each check is deterministic
// and returns a named pass/fail line with a short measured detail.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lpd::verify {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  bool fast = false;  // n = 64 grids, relaxed tolerances
  std::uint64_t seed = 2024;
};

/// "indices" | "rr" | "solver" | "geometry" | "all".
std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite.
std::vector<PropertyResult> run_suite(const std::string& suite, const Options& opt = {});
bool all_passed(const std::vector<PropertyResult>& results);
nlohmann::json to_json(const std::vector<PropertyResult>& results);

// Individual properties.
PropertyResult index_identities(int grid_points = 200);
PropertyResult riemann_roch_identities();
PropertyResult cp1_vanishing_crosscheck();
PropertyResult genus_tables();
PropertyResult disc_oracle(int n, double tolerance = 0.02, double min_gain = 1.5);
PropertyResult homotopy_refinement(const std::vector<int>& ns, double tolerance = 0.05);
PropertyResult compact_solver_residual(int n, double tolerance = 0.05);
PropertyResult weight_crosscheck(int n, double tolerance = 0.05);
PropertyResult classifier_grid();
PropertyResult exponent_identities();
PropertyResult chart_round_trip();
PropertyResult volume_ratio(std::uint64_t seed);
PropertyResult transfer_scaling(std::uint64_t seed, int samples = 4000);

}  // namespace lpd::verify
