// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "psplit/psplit.hpp"

using namespace psplit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const LatticeConfig kUnit{1.0, 1.0, 2};

Outcome car_suite() {
  const double res = car_suite_residual(kUnit);
  return {res < 1e-12, fmt("n_max=2, 10 slots, max residual %.3g", res)};
}

Outcome free_spectrum() {
  const EnergyReport r = ground_state_bruteforce(0.0, kUnit);
  // Second pass through the operator algebra on every basis state.
  const ModeOperator h = build_H0(kUnit);
  double lowest_excited = std::numeric_limits<double>::infinity();
  double vacuum_energy = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slot_count(kUnit)); ++bits) {
    const double e = expectation(basis_vector(kUnit, OccupationState::from_bits(bits)), h).real();
    if (bits == 0) vacuum_energy = e;
    else lowest_excited = std::min(lowest_excited, e);
  }
  const bool ok = r.energy == 0.0 && r.degeneracy == 1 && r.minimizer == OccupationState{} && vacuum_energy == 0.0 &&
                  lowest_excited > 0.0;
  return {ok, fmt("min %.3g (degeneracy %llu) at |0>, lowest other %.6g", r.energy,
                  static_cast<unsigned long long>(r.degeneracy), lowest_excited)};
}

Outcome continuity() {
  std::mt19937 rng(2024);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const LatticeConfig cfg{1.0, 1.0, n};
    std::uniform_real_distribution<double> z(0.0, cfg.box_length());
    for (int k = 0; k < 5; ++k) worst = std::max(worst, continuity_residual(z(rng), cfg));
    worst = std::max(worst, continuity_pair_residual_max(cfg));
  }
  return {worst < 1e-12, fmt("n_max=1..4, 5 random z each, max residual %.3g", worst)};
}

Outcome juxtaposition() {
  const sym::SymExpr formal = sym::derive_I1_formal();
  const TrigPoly f = TrigPoly::cosine(kUnit.box_length(), 1);
  const double direct = compute_I2_direct(f, kUnit);
  const double spectral = compute_I2_spectral(f, kUnit);
  const double rel = std::abs(direct - spectral) / spectral;
  const bool ok = formal.is_zero() && spectral > 0.0 && rel < 1e-10;
  return {ok, fmt("formal I1 = %s, I2 direct %.15g, spectral %.15g, rel diff %.3g", sym::to_string(formal).c_str(),
                  direct, spectral, rel)};
}

Outcome point_split_sign() {
  const LatticeConfig cfg{1.0, 1.0, 60};
  const TrigPoly f = TrigPoly::cosine(cfg.box_length(), 1);
  const double i1 = compute_I1_eps(f, 0.1, cfg);
  const double i2 = compute_I2_spectral(f, cfg);
  const bool regime = cfg.cutoff() * 0.1 > std::numbers::pi && cfg.mass * 0.1 < 1.0;
  return {regime && i1 > 0.0 && i2 > 0.0, fmt("n_max=60, eps=0.1: I1_eps %.6g, I2 %.6g", i1, i2)};
}

Outcome kernel_asymptote_check() {
  std::string d;
  double previous_gap = std::numeric_limits<double>::infinity();
  bool monotone = true;
  double last = 0.0;
  for (double eps : {0.1, 0.05, 0.01}) {
    last = eps * kernel_asymptote(eps, 1.0).value;
    const double gap = std::abs(1.0 - last);
    monotone = monotone && gap < previous_gap;
    previous_gap = gap;
    d += fmt("%s%.6f", d.empty() ? "eps*K = " : ", ", last);
  }
  return {monotone && last >= 0.95 && last <= 1.05, d + (monotone ? " (monotone)" : " (not monotone)")};
}

Outcome continuum_rate() {
  const TrigPoly f = TrigPoly::cosine(2.0 * std::numbers::pi, 1);
  const ContinuumLimit a = continuum_I1_limit(f, 0.1);
  const ContinuumLimit b = continuum_I1_limit(f, 0.05);
  const double ratio = std::abs(a.finite_difference - a.limit) / std::abs(b.finite_difference - b.limit);
  return {std::abs(ratio - 4.0) <= 0.15 * 4.0, fmt("gap ratio eps 0.1 / 0.05 = %.6f", ratio)};
}

Outcome excitation_energies() {
  const LatticeConfig cfg{1.0, 1.0, 3};
  double worst = 0.0;
  bool signs = true;
  for (double eps : {0.0, 0.5, 2.0})
    for (int q = -cfg.n_max; q <= cfg.n_max; ++q)
      for (Species s : {Species::electron, Species::positron}) {
        const double p = cfg.momentum(q);
        const double e = excitation_energy(q, s, eps, cfg);
        worst = std::max(worst, std::abs(e - dispersion(p, cfg.mass) * std::cos(p * eps)));
        const double phase = std::abs(p) * eps;
        if (phase > std::numbers::pi / 2 && phase < 1.5 * std::numbers::pi) signs = signs && e < 0.0;
      }
  return {worst < 1e-12 && signs, fmt("n_max=3, eps {0, 0.5, 2}, max deviation %.3g", worst)};
}

Outcome split_continuity() {
  const LatticeConfig cfg{1.0, 1.0, 3};
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> z(0.0, cfg.box_length());
  double worst = 0.0;
  for (double eps : {0.3, 1.7})
    for (int k = 0; k < 3; ++k) worst = std::max(worst, split_continuity_residual(z(rng), eps, cfg));
  return {worst < 1e-10, fmt("n_max=3, eps {0.3, 1.7}, max residual %.3g", worst)};
}

Outcome redefined_vacuum() {
  const LatticeConfig cfg{1.0, 1.0, 3};
  const EnergyReport r = ground_state_bruteforce(2.0, cfg);
  const double state = expectation(build_vacuum_eps(2.0, cfg), build_H0_eps(cfg, 2.0)).real();
  const double closed = 4.0 * (std::sqrt(2.0) * std::cos(2.0) + std::sqrt(5.0) * std::cos(4.0));
  const bool ok = std::abs(r.energy - state) < 1e-10 && std::abs(r.energy - closed) < 1e-10 && r.degeneracy == 1 &&
                  r.matches_redefined_vacuum && r.energy < 0.0;
  return {ok, fmt("2^14 states: min %.12f, |0,eps> %.12f, degeneracy %llu", r.energy, state,
                  static_cast<unsigned long long>(r.degeneracy))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  RunConfig c;
  c.lattice.n_max = 4;
  c.eps = {0.05, 0.1, 0.3};
  c.f_harmonics = {{1, 0.5}, {3, cplx(0.2, -0.1)}};
  const std::string a = to_json(cmd_anomaly(c)).dump(2);
  const std::string b = to_json(cmd_anomaly(c)).dump(2);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("psplit_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string args =
      " anomaly --n-max 4 --eps 0.05 0.1 0.3 --f-harmonic 1:0.5:0 3:0.2:-0.1 2>/dev/null --out ";
  const int ra = std::system((std::string(PSPLIT_CLI_PATH) + args + (dir / "a.json").string()).c_str());
  const int rb = std::system((std::string(PSPLIT_CLI_PATH) + args + (dir / "b.json").string()).c_str());
  const std::string fa = slurp(dir / "a.json");
  const std::string fb = slurp(dir / "b.json");
  fs::remove_all(dir);
  const bool ok = a == b && ra == 0 && rb == 0 && !fa.empty() && fa == fb && fa == a + "\n";
  return {ok, fmt("in-process %zu bytes, CLI %zu bytes, identical: %s", a.size(), fa.size(), ok ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "CAR suite", 10.0, car_suite},
      {2, "free Hamiltonian spectrum", 0.0, free_spectrum},
      {3, "continuity", 0.0, continuity},
      {4, "anomaly juxtaposition", 5.0, juxtaposition},
      {5, "point-split sign", 0.0, point_split_sign},
      {6, "kernel asymptote", 5.0, kernel_asymptote_check},
      {7, "continuum limit rate", 0.0, continuum_rate},
      {8, "excitation energies", 0.0, excitation_energies},
      {9, "split continuity", 0.0, split_continuity},
      {10, "redefined vacuum", 30.0, redefined_vacuum},
      {11, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over %.0f s budget]", c.budget_s);
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << fmt(" (%.3f s)", secs) << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
