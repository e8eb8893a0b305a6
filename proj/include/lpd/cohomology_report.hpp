#pragma once

// Lower/upper bounds for dim H^q_(p)(D*, O) obtained by summing the
// cohomology of N^{-mu} from c(p,q,d) and from a(p,q,d) respectively, and
// the piecewise-constant band tables in p built from them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lpd/index_core.hpp"
#include "lpd/riemann_roch.hpp"

namespace lpd {

class missing_dimension_data : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CohomologyBand {
  enum class Status { exact_zero, exact_n, interval };

  Exponent p = Exponent::infinity();
  int q = 1;
  int d = 2;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  Status status = Status::exact_zero;

  bool exact() const { return lower == upper; }
};

/// Where the dimensions of H^q(X, O(N^{-mu})) come from for one (d, q).
struct DimensionSource {
  std::optional<CurveData> curve;
  std::optional<DimTable> table;

  static DimensionSource from_curve(CurveData c) { return {c, std::nullopt}; }
  static DimensionSource from_table(DimTable t) { return {std::nullopt, std::move(t)}; }
};

/// q <= d - 2: the group vanishes for every p.
bool low_degree_vanishing(int d, int q);

/// Throws missing_dimension_data when neither the curve (d = 2) nor a
/// matching table determines h^q.
CohomologyBand band(const DimensionSource& source, int d, int q, const Exponent& p);
CohomologyBand band(const CurveData& curve, int d, int q, const Exponent& p);

/// A contiguous range of exponents with exact endpoints; hi may be inf.
struct ExponentRange {
  Exponent lo = Exponent::finite(1);
  bool lo_inclusive = true;
  Exponent hi = Exponent::infinity();
  bool hi_inclusive = true;

  bool is_point() const { return lo == hi && lo_inclusive && hi_inclusive; }
};

struct BandRow {
  ExponentRange range;
  CohomologyBand band;
};

/// One row per breakpoint, per open interval between breakpoints and for
/// p = inf; adjacent rows with identical bounds are merged. Rows are ordered
/// by decreasing p.
std::vector<BandRow> band_table(const DimensionSource& source, int d, int q);
std::vector<BandRow> band_table(const CurveData& curve, int d, int q);

/// X = CP^1 test at p = 2: true iff the lower bound at p = 2 vanishes.
struct Cp1Verdict {
  bool vanishes = false;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};
Cp1Verdict cp1_criterion(const DimensionSource& source);
Cp1Verdict cp1_criterion(const CurveData& curve);

/// H^q(CP^k, O(N^{-mu})) = 0 for mu >= q - 2k. Verifiable by Riemann-Roch
/// only for k = 1; larger k is recorded as an assumption.
struct CpkVanishing {
  bool verified = false;
  int k = 1;
  int q = 1;
  int claimed_from = 0;
  int checked_up_to = 0;
  std::string note;
};
CpkVanishing cpk_vanishing_check(int k, int q);

// Rendering. Status strings: "=0", "=n", "≤n", "∈{lo,...,hi}".
enum class IntervalStyle { auto_select, at_most, enumerate };
std::string render_status(const CohomologyBand& band, IntervalStyle style = IntervalStyle::auto_select);
std::string render_range(const ExponentRange& range);
std::string render_markdown(const std::vector<BandRow>& rows, int q);
std::string render_csv(const std::vector<BandRow>& rows);
nlohmann::json rows_to_json(const std::vector<BandRow>& rows);

}  // namespace lpd
