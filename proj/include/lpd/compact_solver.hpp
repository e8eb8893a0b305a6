#pragma once

// dbar with compact support on the punctured ball of C^d (X = CP^{d-1}):
// pull a closed (0,q)-form back to each blow-up chart, solve fiber-wise with
// the weighted transform t^a I(t^{-a} .), a = a(p, q, d), and measure how
// well dbar eta reproduces omega on annuli around the puncture.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lpd/fiber_transform.hpp"
#include "lpd/index_core.hpp"

namespace lpd {

using CVec = std::vector<std::complex<double>>;

/// A dbar-closed (0,q)-form on C^d \ {0}; coefficients listed in the order
/// of ext::masks_of_degree(d, q).
struct FormFamily {
  std::string name;
  int d = 2;
  int q = 1;
  double support = 0.9;  // omega = 0 for |z| >= support
  std::function<CVec(const CVec& z)> omega;
  /// A primitive of degree q - 1 when one is known in closed form.
  std::function<CVec(const CVec& z)> primitive;
};

/// u = chi(|z|) zbar_1 / |z|, omega = dbar u. Bounded u, |omega| ~ 1/|z|.
FormFamily radial_phase_family(int d);
/// u = chi(|z|) zbar_1, smooth across 0.
FormFamily smooth_family(int d);
/// dbar(u dzbar_2) with u from radial_phase_family; d >= 3.
FormFamily radial_phase_q2_family(int d);
FormFamily zero_family(int d, int q);
/// "radial-phase" | "smooth" | "radial-phase-q2" | "zero"; throws std::invalid_argument.
FormFamily family_by_name(const std::string& name, int d);
std::vector<std::string> family_names();

struct SolverConfig {
  Exponent p = Exponent::finite(2);
  std::optional<int> weight;  // overrides a(p, q, d)
  int n = 256;
  double extent = 1;
  int w_rings = 4;  // polar sampling of each |w_k| <= 1
  int w_angles = 8;
  double w_step = 1e-2;
  std::vector<std::pair<double, double>> annuli = {{0.05, 0.1}, {0.1, 0.2}, {0.2, 0.4}, {0.4, 0.8}};
  double tolerance = 0.05;
  double closure_tolerance = 1e-4;
  double ball_radius = 1;
  bool keep_samples = false;
};

struct AnnulusReport {
  double r_in = 0, r_out = 0;
  double omega_l1 = 0;
  double residual_l1 = 0;   // || dbar eta - omega ||_1
  double eta_lp = 0;        // || eta ||_{L^p(annulus)}
  std::optional<double> primitive_error;  // || eta - u ||_1 / || u ||_1

  double relative() const { return omega_l1 > 0 ? residual_l1 / omega_l1 : residual_l1; }
};

/// eta (ambient coefficients) at one chart base point, on the fiber grid.
struct ChartSample {
  int chart = 0;
  CVec w;
  double area = 0;  // quadrature weight of w
  std::vector<Field<double>> eta;
};

struct SolverReport {
  std::string family;
  int d = 2, q = 1;
  Exponent p = Exponent::finite(2);
  int weight = 0;
  int n = 0;
  FiberGrid<double> grid;
  double closure_defect = 0;
  bool closure_ok = false;
  bool support_ok = false;
  std::optional<std::string> error;  // closure / support / weight violation
  bool weight_violation = false;
  double tolerance = 0.05;
  std::vector<AnnulusReport> annuli;
  std::vector<ChartSample> samples;  // only with keep_samples

  bool passed() const;
};

/// Max |dbar omega| over max |single derivative term|, by centered
/// differences at deterministic points of the ball.
double closure_defect(const FormFamily& f, double ball_radius = 1);
/// omega vanishes identically on 0.98 R <= |z| <= R.
bool support_ok(const FormFamily& f, double ball_radius = 1);

SolverReport solve_compact_support(const FormFamily& f, const SolverConfig& cfg);

/// Per annulus || eta_1 - eta_2 ||_1 / || eta_1 ||_1; both runs need keep_samples
/// and the same grids.
std::vector<double> eta_difference(const SolverReport& a, const SolverReport& b,
                                   const std::vector<std::pair<double, double>>& annuli);

/// Case file: {"family", "dim", "p", "weight"?, "n", "extent", "w_rings",
/// "w_angles", "w_step", "annuli", "tolerance", "closure_tolerance"}.
std::pair<FormFamily, SolverConfig> load_case(const nlohmann::json& j);
nlohmann::json to_json(const SolverReport& r);
std::string to_csv(const SolverReport& r);

}  // namespace lpd
