#pragma once

// JSON report documents and the flat CSV census table.
//
// Exact rationals are written twice: as "num/den" strings (authoritative) and
// as doubles for plotting.  Runtimes are whole milliseconds and are 0 unless
// timing was requested, which keeps reports byte-stable.

#include <hyperslice/irreddetect.hpp>
#include <hyperslice/projective.hpp>
#include <hyperslice/rational.hpp>
#include <hyperslice/slicestats.hpp>
#include <hyperslice/version.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace hyperslice {

using Json = nlohmann::ordered_json;

inline Json rational_json(const ExactRational& x) { return Json{{"exact", to_string(x)}, {"approx", to_double(x)}}; }

inline Json coords_json(const std::vector<Elem>& v) {
  Json a = Json::array();
  for (auto e : v) a.push_back(e.v);
  return a;
}

inline std::string format_coords(const Field& k, const std::vector<Elem>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ":";
    s += k.format(v[i]);
  }
  return s + "]";
}

inline Json report_header(const std::string& command, std::uint64_t seed) {
  return Json{{"tool", "hyperslice"}, {"version", kVersion}, {"command", command}, {"seed", seed}};
}

inline std::uint64_t whole_ms(double ms) { return static_cast<std::uint64_t>(std::llround(ms)); }

inline Json stats_json(const SliceStats& s) {
  Json j;
  j["mean"] = rational_json(s.mean);
  j["variance"] = rational_json(s.variance);
  j["domain_size"] = s.domain_size;
  j["image_size"] = s.image_size;
  j["max_fiber"] = s.max_fiber;
  j["collision_sum"] = s.collision_sum;
  if (s.hyperplanes) j["hyperplanes"] = s.hyperplanes;
  return j;
}

inline Json mc_json(const McStats& s) {
  Json j;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["mean"] = rational_json(s.mean);
  j["variance"] = rational_json(s.variance);
  j["se_mean"] = s.se_mean;
  j["se_variance"] = s.se_variance;
  return j;
}

inline Json verdict_json(const Field& k, const SliceVerdict& v) {
  Json j;
  j["hyperplane"] = format_coords(k, v.hyperplane.coords);
  j["verdict"] = std::string(to_string(v.kind));
  j["reason"] = std::string(to_string(v.reason));
  j["mode"] = std::string(to_string(v.mode));
  j["counts"] = v.counts;
  return j;
}

inline Json census_json(const CensusReport& rep, const std::string& scenario, std::uint64_t seed) {
  Json j = report_header("census", seed);
  j["scenario"] = scenario;
  j["r"] = rep.r;
  j["codim"] = rep.codim;
  j["theoretical_exponent"] = rep.theoretical_exponent();
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json o;
    o["q"] = row.q;
    o["total_hyperplanes"] = row.total_hyperplanes;
    o["very_bad"] = row.very_bad;
    o["good"] = row.good;
    o["equals_x"] = row.equals_x;
    o["mode"] = std::string(to_string(row.mode));
    o["runtime_ms"] = whole_ms(row.runtime_ms);
    o["reasons"] = {{"Empty", row.empty}, {"CountLow", row.count_low}, {"CountHigh", row.count_high}};
    o["variety_points"] = row.variety_points;
    o["estimated_dimension"] = row.estimated_dimension;
    o["stats"] = stats_json(row.stats);
    o["chebyshev_bound"] = rational_json(row.chebyshev_bound);
    o["very_bad_fraction"] = rational_json(row.very_bad_fraction);
    if (row.disagreements) o["disagreements"] = *row.disagreements;
    Json hs = Json::array();
    for (const auto& h : row.very_bad_hyperplanes) hs.push_back(coords_json(h.coords));
    o["very_bad_hyperplanes"] = std::move(hs);
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  if (rep.fit) {
    j["fit"] = {{"exponent", rep.fit->exponent},
                {"intercept", rep.fit->intercept},
                {"residual", rep.fit->residual},
                {"points", rep.fit->points}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = rep.fit_error;
  }
  return j;
}

inline std::string census_csv(const CensusReport& rep) {
  std::ostringstream out;
  out << "q,total_hyperplanes,very_bad,good,equals_x,mode,runtime_ms\n";
  for (const auto& row : rep.rows)
    out << row.q << ',' << row.total_hyperplanes << ',' << row.very_bad << ',' << row.good << ',' << row.equals_x << ','
        << to_string(row.mode) << ',' << whole_ms(row.runtime_ms) << '\n';
  return out.str();
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hyperslice
