#pragma once

// CSV and JSON serialization of estimates, tables and sweeps. Floats use 17
// significant digits; exact rationals are written as p/q.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pdim/dimension.hpp"
#include "pdim/measures.hpp"
#include "pdim/percolation.hpp"
#include "pdim/rational.hpp"
#include "pdim/saw.hpp"
#include "pdim/spectral.hpp"

namespace pdim {

inline constexpr const char* kToolName = "pdimlab";
inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Quotes a CSV field when needed.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns) : os_(os), width_(columns.size()) { row(columns); }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_field(fields[i]);
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t width_;
};

// Resolved configuration echoed into every output file.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline void write_csv_header(std::ostream& os, const ConfigEcho& config) {
  os << "# " << kToolName << ' ' << kToolVersion << '\n';
  for (const auto& [k, v] : config) os << "# " << k << '=' << v << '\n';
}

inline Json config_json(const ConfigEcho& config) {
  Json j = Json::object();
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  Json c = Json::object();
  for (const auto& [k, v] : config) c[k] = v;
  j["config"] = c;
  return j;
}

// ---------------------------------------------------------------------------
// lambda_c estimates.

inline const std::vector<std::string>& estimate_columns() {
  static const std::vector<std::string> c = {"group", "measure", "L", "trials", "theta", "lambda_hat", "ci_low", "ci_high", "capped", "seed"};
  return c;
}

inline std::vector<std::string> estimate_row(const std::string& group, const std::string& measure, const LambdaCEstimate& e) {
  const bool has = e.lambda_hat.has_value();
  return {group,
          measure,
          std::to_string(e.escape_radius),
          std::to_string(e.trials),
          fmt17(e.theta),
          has ? fmt17(*e.lambda_hat) : "",
          has ? fmt17(e.ci.low) : "",
          has ? fmt17(e.ci.high) : "",
          e.capped ? "true" : "false",
          std::to_string(e.seed)};
}

inline Json estimate_json(const LambdaCEstimate& e) {
  Json j = Json::object();
  j["lambda_hat"] = e.lambda_hat ? Json(*e.lambda_hat) : Json(nullptr);
  j["ci"] = e.lambda_hat ? Json::array({e.ci.low, e.ci.high}) : Json(nullptr);
  j["bracket"] = e.lambda_hat ? Json::array({e.bracket.low, e.bracket.high}) : Json(nullptr);
  j["capped"] = e.capped;
  if (e.capped) j["cap_reason"] = e.cap_reason;
  j["window_crossing"] = e.window_crossing ? Json(*e.window_crossing) : Json(nullptr);
  j["L"] = e.escape_radius;
  j["trials"] = e.trials;
  j["truncated_trials"] = e.truncated_trials;
  j["theta"] = e.theta;
  j["criterion"] = to_string(e.criterion);
  j["seed"] = e.seed;
  j["caveat"] = e.caveat;
  Json probes = Json::array();
  for (const auto& p : e.probes) {
    probes.push_back({{"lambda", p.lambda},
                      {"survival", p.survival.estimate},
                      {"survival_ci", {p.survival.ci.low, p.survival.ci.high}},
                      {"persistence", p.persistence.estimate},
                      {"persistence_ci", {p.persistence.ci.low, p.persistence.ci.high}},
                      {"escaped", p.survival.successes}});
  }
  j["probes"] = probes;
  return j;
}

// ---------------------------------------------------------------------------
// Walk tables.

inline void write_saw_csv(std::ostream& os, const SawTable& t) {
  CsvWriter w(os, {"group", "measure", "n", "sigma_n", "exact_flag", "nu_upper"});
  for (const auto& e : t.entries) {
    w.row({t.group, t.measure, std::to_string(e.n), e.exact ? to_string(*e.exact) : fmt17(e.value), e.exact ? "true" : "false",
           e.n >= 1 ? fmt17(std::pow(e.value, 1.0 / e.n)) : ""});
  }
}

inline void write_return_csv(std::ostream& os, const ReturnTable& t) {
  CsvWriter w(os, {"group", "measure", "n", "p_n", "mode"});
  for (int n = 0; n <= t.n_max(); ++n) {
    w.row({t.group, t.measure, std::to_string(n), fmt17(t.p[static_cast<std::size_t>(n)]), to_string(t.mode)});
  }
}

inline Json spectral_json(const ReturnTable& t, const RhoEstimate& rho, const std::optional<CheegerReport>& cheeger) {
  Json j = Json::object();
  j["group"] = t.group;
  j["measure"] = t.measure;
  j["mode"] = to_string(t.mode);
  j["n_max"] = t.n_max();
  j["rho_hat"] = rho.rho;
  j["rho_at_n"] = rho.m;
  j["root_sequence"] = rho.root_sequence;
  if (cheeger) {
    Json rows = Json::array();
    for (const auto& r : cheeger->rows) rows.push_back({{"set", r.label}, {"size", r.size}, {"boundary", r.boundary}, {"ratio", r.ratio}});
    j["cheeger"] = {{"degree", cheeger->degree},
                    {"iota_upper", cheeger->iota_upper},
                    {"sets", rows},
                    {"bounds", {{"raw", cheeger->bound_raw}, {"degree_normalized", cheeger->bound_normalized}}}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Sweeps.

inline Json sweep_json(const SweepReport& r) {
  Json j = Json::object();
  j["group"] = r.group;
  j["family"] = r.family;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json params = Json::object();
    for (const auto& [k, v] : p.params) params[k] = v;
    Json q = Json::object();
    q["params"] = params;
    q["measure"] = p.measure;
    q["lambda_hat"] = p.has_lambda() ? Json(p.lambda()) : Json(nullptr);
    q["ci"] = p.has_lambda() ? Json::array({p.ci().low, p.ci().high}) : Json(nullptr);
    q["capped"] = p.capped();
    q["delta_atom"] = p.delta_atom;
    if (p.exact_delta) q["delta_atom_exact"] = to_string(*p.exact_delta);
    q["seed"] = p.seed;
    if (p.closed_form) q["closed_form"] = true;
    if (p.estimate && p.estimate->window_crossing) q["window_crossing"] = *p.estimate->window_crossing;
    if (!p.error.empty()) q["error"] = p.error;
    pts.push_back(q);
  }
  j["points"] = pts;
  Json v = Json::array();
  for (const auto& x : r.verdicts) v.push_back({{"name", x.name}, {"holds", x.holds}, {"detail", x.detail}});
  j["verdicts"] = v;
  if (!r.upper_bound.empty()) j["upper_bound"] = r.upper_bound;
  return j;
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  CsvWriter w(os, {"group", "family", "params", "measure", "lambda_hat", "ci_low", "ci_high", "capped", "delta_atom", "seed"});
  for (const auto& p : r.points) {
    std::string params;
    for (const auto& [k, v] : p.params) params += (params.empty() ? "" : ";") + k + "=" + fmt17(v);
    const bool has = p.has_lambda();
    w.row({r.group, r.family, params, p.measure, has ? fmt17(p.lambda()) : "", has ? fmt17(p.ci().low) : "",
           has ? fmt17(p.ci().high) : "", p.capped() ? "true" : "false", fmt17(p.delta_atom), std::to_string(p.seed)});
  }
}

// ---------------------------------------------------------------------------
// Giant component.

inline void write_giant_csv(std::ostream& os, std::size_t n, double lambda, std::uint64_t seed,
                            const std::vector<GiantComponentResult>& samples) {
  CsvWriter w(os, {"n", "lambda", "sample", "largest_fraction", "components", "seed"});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t comps = 0;
    for (const auto& [size, count] : samples[i].size_histogram) comps += count;
    w.row({std::to_string(n), fmt17(lambda), std::to_string(i), fmt17(samples[i].largest_fraction), std::to_string(comps),
           std::to_string(seed)});
  }
}

}  // namespace pdim
