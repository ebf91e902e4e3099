#pragma once

// Identity suites shared by the verify command and the test binaries.

#include <algorithm>
#include <vector>

#include "psplit/field_ops.hpp"

namespace psplit {

/// Max residual of {a_s, a_t^dagger} = delta_st, {a_s, a_t} = 0,
/// {a_s^dagger, a_t^dagger} = 0 over every basis state and slot pair.
inline double car_suite_residual(const LatticeConfig& cfg) {
  const int slots = slot_count(cfg);
  if (slots > 20) throw ConfigError("CAR suite enumerates at most 2^20 basis states");
  double worst = 0.0;
  auto diff = [&](const FockVector& lhs, const FockVector& rhs) {
    const FockVector d = lhs - rhs;
    for (const auto& [_, a] : d.terms()) worst = std::max(worst, std::abs(a));
  };
  const FockVector zero(cfg);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots); ++bits) {
    const FockVector v = basis_vector(cfg, OccupationState::from_bits(bits));
    for (int s = 0; s < slots; ++s) {
      for (int t = 0; t < slots; ++t) {
        const FockVector mixed = apply_annihilate(s, apply_create(t, v)) + apply_create(t, apply_annihilate(s, v));
        diff(mixed, s == t ? v : zero);
        diff(apply_annihilate(s, apply_annihilate(t, v)) + apply_annihilate(t, apply_annihilate(s, v)), zero);
        diff(apply_create(s, apply_create(t, v)) + apply_create(t, apply_create(s, v)), zero);
      }
    }
  }
  return worst;
}

/// Eigen-residual, normalization, orthogonality and completeness of every spinor.
inline double spinor_invariant_residual(const LatticeConfig& cfg) {
  double worst = 0.0;
  for (int j = -cfg.n_max; j <= cfg.n_max; ++j) {
    const ModeSpinor up = spinor(Band::positive, j, cfg);
    const ModeSpinor dn = spinor(Band::negative, j, cfg);
    for (const auto& s : {up, dn}) {
      const Spinor hu = mat2::apply(mat2::dirac(s.p, cfg.mass), s.u);
      for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(hu[c] - s.lambda() * s.energy * s.u[c]));
      worst = std::max(worst, std::abs(mat2::dot(s.u, s.u) - 1.0));
    }
    worst = std::max(worst, std::abs(mat2::dot(up.u, dn.u)));
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const cplx sum = up.u[r] * std::conj(up.u[c]) + dn.u[r] * std::conj(dn.u[c]);
        worst = std::max(worst, std::abs(sum - (r == c ? 1.0 : 0.0)));
      }
    }
  }
  return worst;
}

/// Continuity identity checked pair by pair on the spinors.
inline double continuity_pair_residual_max(const LatticeConfig& cfg) {
  const auto modes = mode_table(cfg);
  double worst = 0.0;
  for (const auto& a : modes)
    for (const auto& b : modes) worst = std::max(worst, continuity_pair_residual(a, b));
  return worst;
}

}  // namespace psplit
