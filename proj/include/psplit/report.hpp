#pragma once

// Run configuration and report serialization (JSON object per run, flat CSV
// per table).
//
// Frozen column names:
//   spectrum:   eps, j, p, E, E_cos, in_S, zero_cos
//   ground:     eps, vacuum_eps_energy, additive_energy, bruteforce_min, degeneracy, unique, matches_vacuum_eps
//   i1_eps:     eps, I1_eps, I1_eps_imag, finite_difference, limit, fd_minus_limit
//   kernel:     g, kernel_re, kernel_im
//   asymptote:  eps, eta, cutoff, damped, value, eps_times_value, error_estimate, lattice_kernel_im

#include <algorithm>
#include <cstdio>
#include <deque>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psplit/trig_poly.hpp"

namespace psplit {

using json = nlohmann::ordered_json;

struct RunConfig {
  LatticeConfig lattice;
  std::vector<double> eps{0.1};
  std::vector<Harmonic> f_harmonics{{1, cplx(0.5, 0.0)}};
  std::optional<double> eta;
  std::optional<double> cutoff;
  std::string format = "json";
  std::string out;
  bool corrupt_current_sign = false;  // negative-control hook for the verify suite

  TrigPoly smearing() const { return TrigPoly(lattice.box_length(), f_harmonics); }

  /// Validates and puts sweeps in parameter order.
  void resolve() {
    lattice.validate();
    if (eps.empty()) throw ConfigError("at least one eps value is required");
    for (double e : eps)
      if (!std::isfinite(e)) throw ConfigError("eps must be finite");
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    if (eta && !(*eta > 0.0)) throw ConfigError("eta must be positive");
    if (cutoff && !(*cutoff > 0.0)) throw ConfigError("cutoff must be positive");
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
    const TrigPoly f = smearing();  // enforces conjugate symmetry
    if (f.max_harmonic() > 2 * lattice.n_max) throw ConfigError("f harmonic exceeds 2*n_max");
  }
};

/// "n:re:im"
inline Harmonic parse_harmonic(const std::string& text) {
  Harmonic h;
  double re = 0.0;
  double im = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d:%lf:%lf%c", &h.n, &re, &im, &tail) != 3) {
    throw ConfigError("harmonic '" + text + "' is not of the form n:re:im");
  }
  h.c = cplx(re, im);
  return h;
}

inline json to_json(const RunConfig& c) {
  json j;
  j["mass"] = c.lattice.mass;
  j["delta_p"] = c.lattice.delta_p;
  j["n_max"] = c.lattice.n_max;
  j["box_length"] = c.lattice.box_length();
  j["cutoff_momentum"] = c.lattice.cutoff();
  j["eps"] = c.eps;
  json fh = json::array();
  for (const auto& h : c.f_harmonics) fh.push_back({h.n, h.c.real(), h.c.imag()});
  j["f_harmonics"] = fh;
  j["eta"] = c.eta ? json(*c.eta) : json(nullptr);
  j["cutoff"] = c.cutoff ? json(*c.cutoff) : json(nullptr);
  j["format"] = c.format;
  return j;
}

/// Reads the same keys the command line accepts. Unknown keys are errors.
inline RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {}) {
  static const std::vector<std::string> known = {"mass", "delta_p", "n_max", "eps", "f_harmonics",
                                                 "eta", "cutoff", "format", "out"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [k, _] : j.items())
      if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
    if (j.contains("mass")) base.lattice.mass = j.at("mass").get<double>();
    if (j.contains("delta_p")) base.lattice.delta_p = j.at("delta_p").get<double>();
    if (j.contains("n_max")) base.lattice.n_max = j.at("n_max").get<int>();
    if (j.contains("eps")) {
      const auto& e = j.at("eps");
      base.eps = e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()};
    }
    if (j.contains("f_harmonics")) {
      base.f_harmonics.clear();
      for (const auto& h : j.at("f_harmonics")) {
        if (h.is_string()) {
          base.f_harmonics.push_back(parse_harmonic(h.get<std::string>()));
        } else {
          const auto v = h.get<std::vector<double>>();
          if (v.size() != 3 || v[0] != std::floor(v[0])) throw ConfigError("harmonic must be [n, re, im]");
          base.f_harmonics.push_back({static_cast<int>(v[0]), cplx(v[1], v[2])});
        }
      }
    }
    if (j.contains("eta")) base.eta = j.at("eta").get<double>();
    if (j.contains("cutoff")) base.cutoff = j.at("cutoff").get<double>();
    if (j.contains("format")) base.format = j.at("format").get<std::string>();
    if (j.contains("out")) base.out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return base;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline Check residual_check(std::string name, double residual, double tolerance, std::string detail = {}) {
  return {std::move(name), residual < tolerance, residual, tolerance, std::move(detail)};
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<Check> checks;
  std::deque<Table> tables;  // table() hands out references that must survive later pushes
  json summary = json::object();
  std::vector<std::string> warnings;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  int exit_code() const { return all_pass() ? 0 : 1; }

  Table& table(const std::string& name, std::vector<std::string> columns) {
    tables.push_back({name, std::move(columns), {}});
    return tables.back();
  }
};

inline json to_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["config"] = to_json(r.config);
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"max_residual", c.max_residual},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  json tables = json::object();
  for (const auto& t : r.tables) tables[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = tables;
  j["summary"] = r.summary;
  j["warnings"] = r.warnings;
  return j;
}

namespace detail {

inline std::string csv_cell(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace detail

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << detail::csv_cell(row[c]);
    os << '\n';
  }
}

}  // namespace psplit
