#pragma once

// Batch commands behind the psplit CLI. Each returns a self-describing Report;
// exit status is 0 when every check passes and 1 otherwise. Configuration
// errors surface as ConfigError (exit 2 at the CLI).

#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "psplit/anomaly.hpp"
#include "psplit/checks.hpp"
#include "psplit/report.hpp"
#include "psplit/symbolic.hpp"
#include "psplit/vacuum.hpp"

namespace psplit {

inline constexpr double kIdentityTolerance = 1e-10;

namespace detail {

// Fixed sample points inside the box, as fractions of L.
inline std::vector<double> sample_points(const LatticeConfig& cfg) {
  std::vector<double> out;
  for (double frac : {0.0, 0.137, 0.42, 0.613, 0.871}) out.push_back(frac * cfg.box_length());
  return out;
}

template <class Fn>
auto sweep(const std::vector<double>& values, Fn fn) {
  using R = decltype(fn(0.0));
  std::vector<std::future<R>> jobs;
  for (double v : values) jobs.push_back(std::async(std::launch::async, fn, v));
  std::vector<R> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

inline json step_list(const std::vector<sym::DerivationStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps) arr.push_back({{"step", s.label}, {"expr", sym::to_string(s.expr)}});
  return arr;
}

}  // namespace detail

inline Report cmd_verify(RunConfig cfg) {
  cfg.resolve();
  Report r;
  r.command = "verify";
  r.config = cfg;
  const LatticeConfig& lat = cfg.lattice;
  const auto zs = detail::sample_points(lat);

  LatticeConfig car_lat = lat;
  car_lat.n_max = std::min(lat.n_max, 2);
  r.checks.push_back(residual_check("car_suite", car_suite_residual(car_lat), 1e-12,
                                    "all basis states at n_max=" + std::to_string(car_lat.n_max)));

  r.checks.push_back(residual_check("spinor_invariants", spinor_invariant_residual(lat), 1e-12));

  {
    const ModeOperator H = build_H0(lat);
    const FockVector vac = vacuum(lat);
    double res = apply(H, vac).norm2();
    for (double e : cfg.eps) res = std::max(res, apply(build_H0_eps(lat, e), vac).norm2());
    r.checks.push_back(residual_check("vacuum_zero_energy", std::sqrt(res), kIdentityTolerance));
  }

  {
    double res = hermiticity_residual(build_H0(lat));
    for (double e : cfg.eps) res = std::max(res, hermiticity_residual(build_H0_eps(lat, e)));
    for (double z : zs) res = std::max(res, hermiticity_residual(build_rho(z, lat)));
    res = std::max(res, hermiticity_residual(build_F(cfg.smearing(), lat)));
    r.checks.push_back(residual_check("hermiticity", res, kIdentityTolerance, "H0, H0_eps, rho(z), F"));
  }

  {
    const Mat2 current = cfg.corrupt_current_sign ? mat2::scale(mat2::sigma_x(), -1.0) : mat2::sigma_x();
    double res = 0.0;
    for (double z : zs) res = std::max(res, continuity_residual(z, lat, current));
    if (!cfg.corrupt_current_sign) res = std::max(res, continuity_pair_residual_max(lat));
    r.checks.push_back(residual_check("continuity", res, kIdentityTolerance, "[H0, rho(z)] = i dJ/dz"));
  }

  {
    double res = 0.0;
    for (double e : cfg.eps) {
      ModeOperator raw = build_H0_eps_unrenormalized(lat, e);
      raw += ModeOperator::scalar(lat, xi_R_eps(lat, e));
      res = std::max(res, max_abs_diff(raw, build_H0_eps(lat, e)));
    }
    r.checks.push_back(residual_check("split_hamiltonian_renormalization", res, kIdentityTolerance));
  }

  {
    double res45 = 0.0;
    double res46 = 0.0;
    for (double e : cfg.eps) {
      for (double z : zs) {
        res45 = std::max(res45, split_continuity_residual(z, e, lat));
        res46 = std::max(res46, split_commutator_expansion_residual(z, e, lat));
      }
    }
    r.checks.push_back(
        residual_check("split_continuity_boulware", res45, kIdentityTolerance, "[H0_eps, rho(z)] = i dJ(z;eps)/dz"));
    r.checks.push_back(residual_check("split_commutator_expansion", res46, kIdentityTolerance));
  }

  r.summary["all_pass"] = r.all_pass();
  return r;
}

inline Report cmd_anomaly(RunConfig cfg) {
  cfg.resolve();
  Report r;
  r.command = "anomaly";
  r.config = cfg;
  const LatticeConfig& lat = cfg.lattice;
  const TrigPoly f = cfg.smearing();

  const double spectral = compute_I2_spectral(f, lat);
  const bool fits = slot_count(lat) <= kMaxSlots;
  const cplx direct = fits ? compute_I2_direct_complex(f, lat) : cplx{};
  r.summary["I2_spectral"] = spectral;
  r.summary["I2_direct"] = fits ? json(direct.real()) : json();
  r.summary["I2_direct_imag"] = fits ? json(direct.imag()) : json();
  if (!fits) r.warnings.push_back("direct I2 skipped: lattice exceeds " + std::to_string(kMaxSlots) + " Fock slots");
  const sym::SymExpr formal = sym::derive_I1_formal();
  r.summary["I1_formal"] = sym::to_string(formal);
  r.summary["continuum_limit_I1"] = continuum_I1_limit(f, 1.0).limit;

  if (fits) {
    // Relative agreement, falling back to absolute when both routes vanish (f constant).
    const double scale = std::max(std::abs(spectral), std::abs(direct.real()));
    const double gap = std::abs(spectral - direct.real());
    r.checks.push_back(scale < 1e-12 ? residual_check("I2_routes_agree", gap, 1e-12, "absolute, both routes vanish")
                                     : residual_check("I2_routes_agree", gap / scale, 1e-10, "relative |spectral - direct|"));
    r.checks.push_back(residual_check("I2_direct_real", std::abs(direct.imag()), 1e-12));
  }
  r.checks.push_back({"I2_nonnegative", spectral >= 0.0, spectral, 0.0, "I2_spectral >= 0"});
  r.checks.push_back({"I1_formal_zero", formal.is_zero(), static_cast<double>(formal.size()), 0.0,
                      "symbolic I1 has no surviving terms"});

  Table& i1 = r.table("i1_eps", {"eps", "I1_eps", "I1_eps_imag", "finite_difference", "limit", "fd_minus_limit"});
  double worst_imag = 0.0;
  const auto rows = detail::sweep(cfg.eps, [&](double e) {
    EpsRow row;
    row.eps = e;
    const cplx v = compute_I1_eps_complex(f, e, lat);
    row.I1_eps = v.real();
    row.I1_eps_imag = v.imag();
    if (e != 0.0) row.continuum = continuum_I1_limit(f, e);
    return row;
  });
  for (const auto& row : rows) {
    worst_imag = std::max(worst_imag, std::abs(row.I1_eps_imag));
    const bool has_fd = row.eps != 0.0;
    i1.rows.push_back({row.eps, row.I1_eps, row.I1_eps_imag, has_fd ? json(row.continuum.finite_difference) : json(),
                       has_fd ? json(row.continuum.limit) : json(),
                       has_fd ? json(row.continuum.finite_difference - row.continuum.limit) : json()});
  }
  r.checks.push_back(residual_check("I1_eps_real", worst_imag, 1e-12));

  Table& kernel = r.table("kernel", {"g", "kernel_re", "kernel_im"});
  std::vector<double> gs;
  for (double e : cfg.eps) {
    gs.push_back(-e);
    gs.push_back(e);
  }
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  for (double g : gs) {
    const cplx k = vev_kernel(g, lat);
    kernel.rows.push_back({g, k.real(), k.imag()});
  }

  r.summary["derivation"] = {{"formal", detail::step_list(sym::derive_I1_transcript(false))},
                             {"split", detail::step_list(sym::derive_I1_transcript(true))}};
  return r;
}

inline Report cmd_vacuum(RunConfig cfg) {
  cfg.resolve();
  Report r;
  r.command = "vacuum";
  r.config = cfg;
  const LatticeConfig& lat = cfg.lattice;
  const bool brute = slot_count(lat) <= kMaxEnumerationSlots;
  if (!brute) r.warnings.push_back("brute-force enumeration skipped: more than 24 slots");

  Table& spectrum = r.table("spectrum", {"eps", "j", "p", "E", "E_cos", "in_S", "zero_cos"});
  Table& ground = r.table("ground", {"eps", "vacuum_eps_energy", "additive_energy", "bruteforce_min", "degeneracy",
                                     "unique", "matches_vacuum_eps"});

  struct Row {
    SplitSpectrum spec;
    double vacuum_energy = 0.0;
    double additive = 0.0;
    std::optional<EnergyReport> ground;
  };
  const auto rows = detail::sweep(cfg.eps, [&](double e) {
    Row row;
    row.spec = negative_set(e, lat);
    row.vacuum_energy = expectation(build_vacuum_eps(e, lat), build_H0_eps(lat, e)).real();
    row.additive = redefined_vacuum_energy(e, lat);
    if (brute) row.ground = ground_state_bruteforce(e, lat, 1);
    return row;
  });

  double worst_formula = 0.0;
  bool ground_ok = true;
  for (const auto& row : rows) {
    const double e = row.spec.eps;
    if (!cutoff_resolves_split(e, lat)) {
      r.warnings.push_back("eps=" + json(e).dump() +
                           ": cutoff*|eps| <= pi/2, no negative-energy modes are representable on this lattice");
    }
    for (const auto& m : row.spec.modes)
      spectrum.rows.push_back({e, m.j, m.p, m.energy, m.split_energy, m.negative, m.zero});
    worst_formula = std::max(worst_formula, std::abs(row.vacuum_energy - row.additive));
    if (row.ground) {
      const auto& g = *row.ground;
      const bool agrees = std::abs(g.energy - row.vacuum_energy) <= 1e-10 * std::max(1.0, std::abs(g.energy));
      ground_ok = ground_ok && agrees && g.matches_redefined_vacuum;
      ground.rows.push_back({e, row.vacuum_energy, row.additive, g.energy, g.degeneracy, g.degeneracy == 1,
                             g.matches_redefined_vacuum});
    } else {
      ground.rows.push_back({e, row.vacuum_energy, row.additive, json(), json(), json(), json()});
    }
  }
  r.checks.push_back(residual_check("vacuum_eps_energy_additive", worst_formula, 1e-12,
                                    "<0,eps|H0_eps|0,eps> against sum over S_eps of 2 E cos(p eps)"));
  if (brute) {
    r.checks.push_back({"ground_state_is_vacuum_eps", ground_ok, 0.0, 1e-10,
                        "enumerated minimum equals |0,eps> and the minimizer set matches"});
  }
  return r;
}

inline Report cmd_kernel(RunConfig cfg) {
  cfg.resolve();
  Report r;
  r.command = "kernel";
  r.config = cfg;
  Table& t = r.table("asymptote",
                     {"eps", "eta", "cutoff", "damped", "value", "eps_times_value", "error_estimate", "lattice_kernel_im"});
  for (double e : cfg.eps)
    if (!(e > 0.0)) throw ConfigError("kernel requires eps > 0");
  struct Row {
    double eps, eta, cutoff;
    KernelAsymptote k;
    cplx lattice;
  };
  const auto rows = detail::sweep(cfg.eps, [&](double e) {
    Row row{e, cfg.eta.value_or(e * e), cfg.cutoff.value_or(default_cutoff(e)), {}, {}};
    row.k = kernel_asymptote(e, row.eta, row.cutoff, cfg.lattice.mass);
    row.lattice = vev_kernel(e, cfg.lattice);
    return row;
  });
  for (const auto& row : rows) {
    t.rows.push_back({row.eps, row.eta, row.cutoff, row.k.samples.front(), row.k.value, row.eps * row.k.value,
                      row.k.error_estimate, row.lattice.imag()});
  }
  return r;
}

inline Report cmd_derive(RunConfig cfg) {
  cfg.resolve();
  Report r;
  r.command = "derive";
  r.config = cfg;
  const sym::SymExpr formal = sym::derive_I1_formal();
  const sym::SymExpr charge = sym::derive_charge_charge();
  const sym::SymExpr split = sym::derive_I1_split();
  r.summary["formal"] = detail::step_list(sym::derive_I1_transcript(false));
  r.summary["split"] = detail::step_list(sym::derive_I1_transcript(true));
  r.summary["charge_charge"] = sym::to_string(charge);
  r.checks.push_back({"I1_formal_zero", formal.is_zero(), static_cast<double>(formal.size()), 0.0, ""});
  r.checks.push_back({"charge_charge_zero", charge.is_zero(), static_cast<double>(charge.size()), 0.0, ""});
  r.checks.push_back({"I1_split_nonzero", !split.is_zero(), static_cast<double>(split.size()), 0.0, ""});
  return r;
}

inline Report run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "verify") return cmd_verify(cfg);
  if (name == "anomaly") return cmd_anomaly(cfg);
  if (name == "vacuum") return cmd_vacuum(cfg);
  if (name == "kernel") return cmd_kernel(cfg);
  if (name == "derive") return cmd_derive(cfg);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace psplit
