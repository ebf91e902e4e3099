#pragma once

// Spectrum of the point-split Hamiltonian and the redefined vacuum.
//
// H0_eps is diagonal in the occupation basis with single-particle energy
// E_j cos(p_j eps) for both species, so every basis-state energy is additive.

#include <algorithm>
#include <bit>
#include <limits>
#include <numbers>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "psplit/field_ops.hpp"

namespace psplit {

inline constexpr double kZeroCosTolerance = 1e-12;
inline constexpr int kMaxEnumerationSlots = 24;

struct SplitMode {
  int j = 0;
  double p = 0.0;
  double energy = 0.0;
  double split_energy = 0.0;  // E_j cos(p_j eps)
  bool negative = false;
  bool zero = false;
};

struct SplitSpectrum {
  double eps = 0.0;
  std::vector<SplitMode> modes;
  std::vector<int> negative_set;
  std::vector<int> zero_set;
};

struct EnergyReport {
  std::string label;
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
  OccupationState minimizer;               // first minimizer in enumeration order
  bool matches_redefined_vacuum = false;   // minimizer set == predicted set
};

inline SplitSpectrum negative_set(double eps, const LatticeConfig& cfg) {
  SplitSpectrum s;
  s.eps = eps;
  for (int j = -cfg.n_max; j <= cfg.n_max; ++j) {
    SplitMode m;
    m.j = j;
    m.p = cfg.momentum(j);
    m.energy = dispersion(m.p, cfg.mass);
    const double c = std::cos(m.p * eps);
    m.split_energy = m.energy * c;
    m.zero = std::abs(c) <= kZeroCosTolerance;
    m.negative = !m.zero && c < 0.0;
    if (m.negative) s.negative_set.push_back(j);
    if (m.zero) s.zero_set.push_back(j);
    s.modes.push_back(m);
  }
  return s;
}

/// Whether the finite cutoff admits negative-energy excitations at this eps.
inline bool cutoff_resolves_split(double eps, const LatticeConfig& cfg) {
  return cfg.cutoff() * std::abs(eps) > std::numbers::pi / 2.0;
}

inline ModeOperator excitation_operator(SlotIndex slot, const LatticeConfig& cfg) {
  return ModeOperator::creator(cfg, slot);
}

/// Coefficient of a_q^dagger a_q in H0_eps.
inline double excitation_energy_readoff(int q, Species species, double eps, const LatticeConfig& cfg) {
  const int s = SlotIndex{species, q}.linear(cfg);
  const Signature sig{{static_cast<std::uint16_t>(s)}, {static_cast<std::uint16_t>(s)}};
  return build_H0_eps(cfg, eps).coefficient(sig).real();
}

/// <0| a_q H0_eps a_q^dagger |0> through Fock-space application.
inline double excitation_energy_fock(int q, Species species, double eps, const LatticeConfig& cfg) {
  const FockVector state = apply_create(SlotIndex{species, q}, vacuum(cfg));
  return expectation(state, build_H0_eps(cfg, eps)).real();
}

inline double excitation_energy(int q, Species species, double eps, const LatticeConfig& cfg) {
  cfg.require(q);
  const double fock = excitation_energy_fock(q, species, eps, cfg);
  const double readoff = excitation_energy_readoff(q, species, eps, cfg);
  if (std::abs(fock - readoff) > 1e-12 * std::max(1.0, std::abs(readoff))) {
    throw std::logic_error("excitation energy routes disagree");
  }
  return fock;
}

/// prod_{q in S_eps} d_q^dagger b_q^dagger |0>, creators applied in canonical
/// slot order (electrons before positrons, ascending j), which leaves amplitude +1.
inline FockVector build_vacuum_eps(double eps, const LatticeConfig& cfg) {
  const SplitSpectrum spec = negative_set(eps, cfg);
  std::vector<int> slots;
  for (int j : spec.negative_set) slots.push_back(electron(j).linear(cfg));
  for (int j : spec.negative_set) slots.push_back(positron(j).linear(cfg));
  FockVector v = vacuum(cfg);
  for (auto it = slots.rbegin(); it != slots.rend(); ++it) v = apply_create(*it, v);
  return v;
}

/// Single-slot energies of H0_eps in slot order.
inline std::vector<double> slot_energies(double eps, const LatticeConfig& cfg) {
  const SplitSpectrum spec = negative_set(eps, cfg);
  std::vector<double> out;
  for (int rep = 0; rep < 2; ++rep)
    for (const auto& m : spec.modes) out.push_back(m.split_energy);
  return out;
}

inline double basis_energy(const OccupationState& s, const std::vector<double>& energies) {
  double e = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k)
    if (s.test(static_cast<int>(k))) e += energies[k];
  return e;
}

/// Sum over S_eps of 2 E_q cos(p_q eps).
inline double redefined_vacuum_energy(double eps, const LatticeConfig& cfg) {
  double e = 0.0;
  for (const auto& m : negative_set(eps, cfg).modes)
    if (m.negative) e += 2.0 * m.split_energy;
  return e;
}

/// Exhaustive minimum of H0_eps over all occupation basis states.
inline EnergyReport ground_state_bruteforce(double eps, const LatticeConfig& cfg, unsigned threads = 0) {
  const int slots = slot_count(cfg);
  if (slots > kMaxEnumerationSlots) {
    throw ConfigError("enumeration needs 2(2 n_max + 1) <= " + std::to_string(kMaxEnumerationSlots));
  }
  const std::vector<double> energies = slot_energies(eps, cfg);
  const SplitSpectrum spec = negative_set(eps, cfg);

  // Predicted minimizers: negative modes filled, positive modes empty, zero modes free.
  std::uint64_t required = 0;
  std::uint64_t free_mask = 0;
  const int per = cfg.modes_per_species();
  for (int k = 0; k < per; ++k) {
    const auto& m = spec.modes[static_cast<std::size_t>(k)];
    for (int off : {0, per}) {
      if (m.negative) required |= std::uint64_t{1} << (k + off);
      if (m.zero) free_mask |= std::uint64_t{1} << (k + off);
    }
  }

  const std::uint64_t total = std::uint64_t{1} << slots;
  const double tol = 1e-9 * std::max(1.0, std::abs(redefined_vacuum_energy(eps, cfg)));

  struct Partial {
    double min = 0.0;
    std::uint64_t first = 0;
    std::uint64_t count = 0;
    bool predicted = true;
  };
  // Pass 1 finds the minimum per chunk, pass 2 counts within tolerance of the global one.
  const unsigned n_threads = std::max(1U, threads == 0 ? std::min(8U, std::thread::hardware_concurrency()) : threads);
  const std::uint64_t chunk = (total + n_threads - 1) / n_threads;
  std::vector<Partial> parts(n_threads);

  auto energy_of = [&](std::uint64_t bits) { return basis_energy(OccupationState::from_bits(bits), energies); };

  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        Partial p;
        p.min = std::numeric_limits<double>::infinity();
        const std::uint64_t lo = t * chunk;
        const std::uint64_t hi = std::min(total, lo + chunk);
        for (std::uint64_t b = lo; b < hi; ++b) {
          const double e = energy_of(b);
          if (e < p.min) {
            p.min = e;
            p.first = b;
          }
        }
        parts[t] = p;
      });
    }
  }
  double global = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) global = std::min(global, p.min);
  std::uint64_t first = total;
  for (const auto& p : parts)
    if (p.min <= global + tol) first = std::min(first, p.first);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        Partial& p = parts[t];
        p.count = 0;
        p.predicted = true;
        const std::uint64_t lo = t * chunk;
        const std::uint64_t hi = std::min(total, lo + chunk);
        for (std::uint64_t b = lo; b < hi; ++b) {
          if (std::abs(energy_of(b) - global) > tol) continue;
          ++p.count;
          if ((b & ~free_mask) != required) p.predicted = false;
        }
      });
    }
  }

  EnergyReport r;
  r.label = "ground state of H0_eps";
  r.energy = energy_of(first);
  r.minimizer = OccupationState::from_bits(first);
  r.matches_redefined_vacuum = true;
  for (const auto& p : parts) {
    r.degeneracy += p.count;
    r.matches_redefined_vacuum = r.matches_redefined_vacuum && p.predicted;
  }
  const std::uint64_t expected = std::uint64_t{1} << std::popcount(free_mask);
  r.matches_redefined_vacuum = r.matches_redefined_vacuum && r.degeneracy == expected;
  return r;
}

}  // namespace psplit
