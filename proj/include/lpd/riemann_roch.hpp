#pragma once

// Dimensions of H^0 and H^1 of the line bundles N^{-mu} on the exceptional
// curve of a two-dimensional cone. Genus 0 and 1 are determined by degree
// alone; anything else comes in as a user-supplied table.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace lpd {

/// genus g >= 0; bundle_degree e >= 1 with deg N^{-mu} = e * mu.
struct CurveData {
  int genus = 0;
  int bundle_degree = 1;

  void validate() const;
  std::int64_t degree(int mu) const { return static_cast<std::int64_t>(bundle_degree) * mu; }
};

class unsupported_genus : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

std::int64_t h0(const CurveData& curve, int mu);
std::int64_t h1(const CurveData& curve, int mu);

/// Least mu0 >= 0 with h1(mu) = 0 for all mu >= mu0.
int vanishing_threshold(const CurveData& curve);

/// Sum of h1(mu) over mu >= from_mu.
std::int64_t obstruction_sum(const CurveData& curve, int from_mu);

struct DimEntry {
  std::int64_t h0 = 0;
  std::int64_t h1 = 0;
  friend bool operator==(const DimEntry&, const DimEntry&) = default;
};

/// mu -> (h0, h1). For a table describing H^q with q > 1 (higher-dimensional
/// exceptional sets) the h1 column holds dim H^q and `form_degree` says which q.
struct DimTable {
  enum class Source { computed, user_supplied };

  int genus = 0;
  int bundle_degree = 1;
  int form_degree = 1;
  Source source = Source::computed;
  std::map<int, DimEntry> entries;
  /// Entries at or above this mu have h1 = 0 even when absent.
  std::optional<int> h1_zero_from;

  /// h1 at mu; absent entries are 0 at or above h1_zero_from, otherwise an error.
  std::int64_t h1_at(int mu) const;
};

/// Exact table over [mu_min, mu_max] with the vanishing tail declared.
DimTable computed_table(const CurveData& curve, int mu_min, int mu_max);

/// A table with every entry zero, e.g. H^2 of a curve.
DimTable zero_table(int form_degree);

/// Throws std::invalid_argument on malformed input.
DimTable parse_dim_table(const nlohmann::json& j);
DimTable load_dim_table(const std::string& path);
nlohmann::json to_json(const DimTable& table);

/// Throws std::invalid_argument when the table declares no vanishing tail.
int vanishing_threshold(const DimTable& table);
std::int64_t obstruction_sum(const DimTable& table, int from_mu);

}  // namespace lpd
