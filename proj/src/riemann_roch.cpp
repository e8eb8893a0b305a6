#include "lpd/riemann_roch.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace lpd {

void CurveData::validate() const {
  if (genus < 0) throw std::invalid_argument("genus must be >= 0");
  if (bundle_degree < 1) throw std::invalid_argument("bundle degree must be >= 1");
}

namespace {

void require_exact_mode(const CurveData& curve) {
  curve.validate();
  if (curve.genus > 1) {
    throw unsupported_genus("genus " + std::to_string(curve.genus) +
                            " is not determined by degree; supply a dimension table");
  }
}

}  // namespace

std::int64_t h0(const CurveData& curve, int mu) {
  require_exact_mode(curve);
  const std::int64_t deg = curve.degree(mu);
  if (curve.genus == 0) return std::max<std::int64_t>(0, deg + 1);
  // Elliptic curve: negative degree has no sections, the trivial bundle has
  // the constants, and positive degree gives deg by Riemann-Roch.
  if (deg < 0) return 0;
  if (deg == 0) return 1;
  return deg;
}

std::int64_t h1(const CurveData& curve, int mu) {
  return h0(curve, mu) - (curve.degree(mu) + 1 - curve.genus);
}

int vanishing_threshold(const CurveData& curve) {
  curve.validate();
  const int canonical = 2 * curve.genus - 2;
  // floor((2g-2)/e) + 1 with floor toward -inf
  int q = canonical / curve.bundle_degree;
  if (canonical % curve.bundle_degree != 0 && canonical < 0) --q;
  return std::max(0, q + 1);
}

std::int64_t obstruction_sum(const CurveData& curve, int from_mu) {
  const int mu0 = vanishing_threshold(curve);
  std::int64_t total = 0;
  for (int mu = from_mu; mu < mu0; ++mu) total += h1(curve, mu);
  return total;
}

std::int64_t DimTable::h1_at(int mu) const {
  if (auto it = entries.find(mu); it != entries.end()) return it->second.h1;
  if (h1_zero_from && mu >= *h1_zero_from) return 0;
  throw std::out_of_range("dimension table has no entry for mu = " + std::to_string(mu));
}

DimTable computed_table(const CurveData& curve, int mu_min, int mu_max) {
  DimTable t;
  t.genus = curve.genus;
  t.bundle_degree = curve.bundle_degree;
  t.form_degree = 1;
  t.source = DimTable::Source::computed;
  for (int mu = mu_min; mu <= mu_max; ++mu) t.entries[mu] = {h0(curve, mu), h1(curve, mu)};
  t.h1_zero_from = vanishing_threshold(curve);
  return t;
}

DimTable zero_table(int form_degree) {
  DimTable t;
  t.form_degree = form_degree;
  t.source = DimTable::Source::computed;
  t.h1_zero_from = std::numeric_limits<int>::min();
  return t;
}

DimTable parse_dim_table(const nlohmann::json& j) {
  try {
    DimTable t;
    t.source = DimTable::Source::user_supplied;
    t.genus = j.at("genus").get<int>();
    t.bundle_degree = j.value("bundle_degree", 1);
    t.form_degree = j.value("q", 1);
    if (t.genus < 0 || t.bundle_degree < 1 || t.form_degree < 1) {
      throw std::invalid_argument("dimension table: genus >= 0, bundle_degree >= 1, q >= 1 required");
    }
    for (const auto& [key, value] : j.at("entries").items()) {
      int mu = 0;
      std::size_t used = 0;
      try {
        mu = std::stoi(key, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used == 0 || used != key.size()) {
        throw std::invalid_argument("dimension table: bad mu key '" + key + "'");
      }
      DimEntry e{value.at("h0").get<std::int64_t>(), value.at("h1").get<std::int64_t>()};
      if (e.h0 < 0 || e.h1 < 0) throw std::invalid_argument("dimension table: negative dimension");
      t.entries[mu] = e;
    }
    if (j.contains("h1_zero_from")) t.h1_zero_from = j.at("h1_zero_from").get<int>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("dimension table: ") + e.what());
  }
}

DimTable load_dim_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dimension table '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("dimension table '" + path + "': " + e.what());
  }
  return parse_dim_table(j);
}

nlohmann::json to_json(const DimTable& table) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [mu, e] : table.entries) {
    entries[std::to_string(mu)] = {{"h0", e.h0}, {"h1", e.h1}};
  }
  nlohmann::json j = {{"genus", table.genus},
                      {"bundle_degree", table.bundle_degree},
                      {"entries", entries}};
  if (table.form_degree != 1) j["q"] = table.form_degree;
  if (table.h1_zero_from) j["h1_zero_from"] = *table.h1_zero_from;
  return j;
}

int vanishing_threshold(const DimTable& table) {
  if (!table.h1_zero_from) {
    throw std::invalid_argument("dimension table declares no vanishing tail (h1_zero_from)");
  }
  int last_nonzero = -1;
  for (const auto& [mu, e] : table.entries) {
    if (e.h1 != 0 && mu >= *table.h1_zero_from) {
      throw std::invalid_argument("dimension table has h1 != 0 at mu = " + std::to_string(mu) +
                                  " above its declared vanishing tail");
    }
    if (e.h1 != 0) last_nonzero = std::max(last_nonzero, mu);
  }
  return std::max(0, last_nonzero + 1);
}

std::int64_t obstruction_sum(const DimTable& table, int from_mu) {
  const int mu0 = vanishing_threshold(table);
  std::int64_t total = 0;
  for (int mu = from_mu; mu < mu0; ++mu) total += table.h1_at(mu);
  return total;
}

}  // namespace lpd
