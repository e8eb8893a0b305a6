#include "lpd/cohomology_report.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lpd {

bool low_degree_vanishing(int d, int q) {
  check_degree(q, d);
  return q <= d - 2;
}

namespace {

DimTable resolve_table(const DimensionSource& source, int d, int q) {
  if (source.table && source.table->form_degree == q) return *source.table;
  if (source.curve && d == 2) {
    if (q == 2) return zero_table(2);
    // a(p, 1, 2) >= a(1, 1, 2) = 1 + q - 2d, so that is the lowest mu needed.
    return computed_table(*source.curve, 1 + q - 2 * d, vanishing_threshold(*source.curve));
  }
  throw missing_dimension_data("no dimension data for H^" + std::to_string(q) +
                               "(X, O(N^-mu)) with d = " + std::to_string(d) +
                               "; supply a dimension table");
}

std::int64_t sum_from(const DimTable& table, std::int64_t from_mu) {
  try {
    return obstruction_sum(table, static_cast<int>(from_mu));
  } catch (const std::out_of_range& e) {
    throw missing_dimension_data(e.what());
  }
}

CohomologyBand::Status classify(std::int64_t lower, std::int64_t upper) {
  if (lower != upper) return CohomologyBand::Status::interval;
  return lower == 0 ? CohomologyBand::Status::exact_zero : CohomologyBand::Status::exact_n;
}

}  // namespace

CohomologyBand band(const DimensionSource& source, int d, int q, const Exponent& p) {
  check_degree(q, d);
  CohomologyBand b;
  b.p = p;
  b.q = q;
  b.d = d;
  if (!low_degree_vanishing(d, q)) {
    const DimTable table = resolve_table(source, d, q);
    b.lower = sum_from(table, c_index(p, q, d));
    b.upper = sum_from(table, a_index(p, q, d));
  }
  b.status = classify(b.lower, b.upper);
  return b;
}

CohomologyBand band(const CurveData& curve, int d, int q, const Exponent& p) {
  return band(DimensionSource::from_curve(curve), d, q, p);
}

std::vector<BandRow> band_table(const DimensionSource& source, int d, int q) {
  std::vector<BandRow> rows;
  if (low_degree_vanishing(d, q)) {
    rows.push_back({ExponentRange{}, band(source, d, q, Exponent::finite(1))});
    return rows;
  }

  const std::vector<Rational> bps = breakpoints(q, d);
  auto push = [&](ExponentRange range, const Exponent& sample) {
    rows.push_back({range, band(source, d, q, sample)});
  };
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const Exponent here = Exponent::finite(bps[i]);
    push({here, true, here, true}, here);
    if (i + 1 < bps.size()) {
      const Exponent next = Exponent::finite(bps[i + 1]);
      push({here, false, next, false}, Exponent::finite((bps[i] + bps[i + 1]) / 2));
    } else {
      push({here, false, Exponent::infinity(), false}, Exponent::finite(bps[i] + 1));
    }
  }
  push({Exponent::infinity(), true, Exponent::infinity(), true}, Exponent::infinity());

  std::vector<BandRow> merged;
  for (const BandRow& row : rows) {
    if (!merged.empty() && merged.back().band.lower == row.band.lower &&
        merged.back().band.upper == row.band.upper) {
      merged.back().range.hi = row.range.hi;
      merged.back().range.hi_inclusive = row.range.hi_inclusive;
    } else {
      merged.push_back(row);
    }
  }
  std::reverse(merged.begin(), merged.end());
  return merged;
}

std::vector<BandRow> band_table(const CurveData& curve, int d, int q) {
  return band_table(DimensionSource::from_curve(curve), d, q);
}

Cp1Verdict cp1_criterion(const DimensionSource& source) {
  const CohomologyBand b = band(source, 2, 1, Exponent::finite(2));
  return {b.lower == 0, b.lower, b.upper};
}

Cp1Verdict cp1_criterion(const CurveData& curve) {
  return cp1_criterion(DimensionSource::from_curve(curve));
}

CpkVanishing cpk_vanishing_check(int k, int q) {
  if (k < 1 || q < 1 || q > k) throw std::invalid_argument("need k >= 1 and 1 <= q <= k");
  CpkVanishing out;
  out.k = k;
  out.q = q;
  out.claimed_from = q - 2 * k;
  if (k != 1) {
    out.note = "recorded, not verified: CP^k with k >= 2 has no curve Riemann-Roch check";
    return out;
  }
  // The universal bundle on CP^1 restricts with degree -1.
  const CurveData line{0, 1};
  const int mu0 = vanishing_threshold(line);
  out.checked_up_to = std::max(out.claimed_from, mu0) + 16;
  out.verified = true;
  for (int mu = out.claimed_from; mu <= out.checked_up_to; ++mu) {
    if (h1(line, mu) != 0) out.verified = false;
  }
  std::ostringstream note;
  note << "h1(CP^1, O(N^-mu)) = 0 for " << out.claimed_from << " <= mu <= " << out.checked_up_to
       << "; h1 at mu = " << out.claimed_from - 1 << " is " << h1(line, out.claimed_from - 1);
  out.note = note.str();
  return out;
}

std::string render_status(const CohomologyBand& b, IntervalStyle style) {
  if (b.exact()) return "=" + std::to_string(b.lower);
  if (style == IntervalStyle::auto_select) {
    style = b.lower == 0 ? IntervalStyle::at_most : IntervalStyle::enumerate;
  }
  if (style == IntervalStyle::at_most && b.lower == 0) return "≤" + std::to_string(b.upper);
  std::string out = "∈{";
  for (std::int64_t n = b.lower; n <= b.upper; ++n) {
    if (n != b.lower) out += ",";
    out += std::to_string(n);
  }
  return out + "}";
}

std::string render_range(const ExponentRange& r) {
  if (r.is_point()) return "p = " + r.lo.str();
  const bool from_one = r.lo.is_one() && r.lo_inclusive;
  const bool to_inf = r.hi.is_infinite() && r.hi_inclusive;
  if (from_one && to_inf) return "all p";
  const std::string lo_op = r.lo_inclusive ? " ≤ " : " < ";
  const std::string hi_op = r.hi_inclusive ? " ≤ " : " < ";
  if (to_inf) return std::string("p") + (r.lo_inclusive ? " ≥ " : " > ") + r.lo.str();
  if (from_one) return "p" + hi_op + r.hi.str();
  return r.lo.str() + lo_op + "p" + hi_op + r.hi.str();
}

namespace {

// Within one table, "≤n" is kept only when no interval row has a nonzero
// lower bound; otherwise every interval row is enumerated.
IntervalStyle table_style(const std::vector<BandRow>& rows) {
  for (const BandRow& row : rows) {
    if (!row.band.exact() && row.band.lower > 0) return IntervalStyle::enumerate;
  }
  return IntervalStyle::at_most;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string render_markdown(const std::vector<BandRow>& rows, int q) {
  const IntervalStyle style = table_style(rows);
  std::ostringstream out;
  out << "| p | dim H^" << q << "_(p)(D*, O) |\n";
  out << "| --- | --- |\n";
  for (const BandRow& row : rows) {
    out << "| " << render_range(row.range) << " | " << render_status(row.band, style) << " |\n";
  }
  return out.str();
}

std::string render_csv(const std::vector<BandRow>& rows) {
  const IntervalStyle style = table_style(rows);
  std::ostringstream out;
  out << "range,lower,upper,status\n";
  for (const BandRow& row : rows) {
    out << csv_quote(render_range(row.range)) << "," << row.band.lower << "," << row.band.upper
        << "," << csv_quote(render_status(row.band, style)) << "\n";
  }
  return out.str();
}

nlohmann::json rows_to_json(const std::vector<BandRow>& rows) {
  const IntervalStyle style = table_style(rows);
  nlohmann::json out = nlohmann::json::array();
  for (const BandRow& row : rows) {
    nlohmann::json p;
    if (row.range.is_point()) {
      p = row.range.lo.str();
    } else {
      p = nlohmann::json::object();
      p[row.range.lo_inclusive ? "ge" : "gt"] = row.range.lo.str();
      p[row.range.hi_inclusive ? "le" : "lt"] = row.range.hi.str();
    }
    out.push_back({{"p", p},
                   {"lower", row.band.lower},
                   {"upper", row.band.upper},
                   {"status", render_status(row.band, style)}});
  }
  return out;
}

}  // namespace lpd
