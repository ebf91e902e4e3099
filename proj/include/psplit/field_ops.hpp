#pragma once

// Field-level operators expanded into mode operators.
//
//   psi(z)        = sum_j ( b_j phi_{+,j}(z) + d_j^dagger phi_{-,j}(z) )
//   psi^dagger(z) = sum_j ( b_j^dagger phi_{+,j}^dagger(z) + d_j phi_{-,j}^dagger(z) )
//
// Writing A_{+,j} = b_j and A_{-,j} = d_j^dagger, a bilinear
// psi^dagger(x) M psi(y) is sum_{a,b} phi_a^dagger(x) M phi_b(y) A_a^dagger A_b.
// The position dependence lives entirely in the phases e^{-i p_a x} e^{i p_b y},
// so z-derivatives are applied analytically as factors i (p_b - p_a).

#include <span>
#include <vector>

#include "psplit/mode_operator.hpp"
#include "psplit/trig_poly.hpp"

namespace psplit {

inline std::vector<ModeSpinor> mode_table(const LatticeConfig& cfg) {
  std::vector<ModeSpinor> out;
  out.reserve(static_cast<std::size_t>(2 * cfg.modes_per_species()));
  for (Band band : {Band::positive, Band::negative})
    for (int j = -cfg.n_max; j <= cfg.n_max; ++j) out.push_back(spinor(band, j, cfg));
  return out;
}

/// A_a^dagger as a ladder operator.
inline LadderOp field_dagger(const ModeSpinor& a, const LatticeConfig& cfg) {
  return a.band == Band::positive ? cr(electron(a.j).linear(cfg)) : an(positron(a.j).linear(cfg));
}

/// A_b as a ladder operator.
inline LadderOp field_plain(const ModeSpinor& b, const LatticeConfig& cfg) {
  return b.band == Band::positive ? an(electron(b.j).linear(cfg)) : cr(positron(b.j).linear(cfg));
}

/// sum_{a,b} weight(a, b) A_a^dagger A_b, normal ordered.
template <class Weight>
ModeOperator build_mode_bilinear(const LatticeConfig& cfg, Weight&& weight) {
  const auto modes = mode_table(cfg);
  ModeOperator out(cfg);
  for (const auto& a : modes) {
    for (const auto& b : modes) {
      const cplx w = weight(a, b);
      if (w == cplx{}) continue;
      const LadderOp word[] = {field_dagger(a, cfg), field_plain(b, cfg)};
      out.add_word(word, w);
    }
  }
  return out;
}

/// scale * d^{left} psi^dagger(z + left_shift) M d^{right} psi(z + right_shift)
struct FieldBilinear {
  Mat2 matrix = mat2::identity();
  double left_shift = 0.0;
  double right_shift = 0.0;
  int left_derivatives = 0;
  int right_derivatives = 0;
  cplx scale = 1.0;
};

namespace detail {

inline cplx ipow(cplx x, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Sum of field bilinears at z, optionally differentiated `z_derivatives`
/// times with respect to z as a whole.
inline ModeOperator build_field(const LatticeConfig& cfg, std::span<const FieldBilinear> parts, double z,
                                int z_derivatives = 0) {
  const double inv_len = 1.0 / cfg.box_length();
  return build_mode_bilinear(cfg, [&](const ModeSpinor& a, const ModeSpinor& b) {
    cplx w{};
    for (const auto& f : parts) {
      w += f.scale * mat2::sandwich(a.u, f.matrix, b.u) *
           std::polar(1.0, -a.p * (z + f.left_shift) + b.p * (z + f.right_shift)) *
           detail::ipow(cplx(0.0, -a.p), f.left_derivatives) * detail::ipow(cplx(0.0, b.p), f.right_derivatives);
    }
    return w * inv_len * detail::ipow(cplx(0.0, b.p - a.p), z_derivatives);
  });
}

inline ModeOperator build_field(const LatticeConfig& cfg, const FieldBilinear& part, double z,
                                int z_derivatives = 0) {
  return build_field(cfg, std::span<const FieldBilinear>(&part, 1), z, z_derivatives);
}

// ---------------------------------------------------------------------------
// Hamiltonians

/// sum_j E_j (b_j^dagger b_j + d_j^dagger d_j); the renormalization constant
/// sum_j E_j has already cancelled the Dirac-sea c-number.
inline ModeOperator build_H0(const LatticeConfig& cfg) {
  ModeOperator h(cfg);
  for (int j = -cfg.n_max; j <= cfg.n_max; ++j) {
    const double e = dispersion(cfg.momentum(j), cfg.mass);
    h += e * ModeOperator::number(cfg, electron(j));
    h += e * ModeOperator::number(cfg, positron(j));
  }
  return h;
}

/// Point-split Hamiltonian in renormalized diagonal form,
/// sum_j E_j cos(p_j eps) (b_j^dagger b_j + d_j^dagger d_j).
inline ModeOperator build_H0_eps(const LatticeConfig& cfg, double eps) {
  ModeOperator h(cfg);
  for (int j = -cfg.n_max; j <= cfg.n_max; ++j) {
    const double p = cfg.momentum(j);
    const double e = dispersion(p, cfg.mass) * std::cos(p * eps);
    h += e * ModeOperator::number(cfg, electron(j));
    h += e * ModeOperator::number(cfg, positron(j));
  }
  return h;
}

/// 1/2 sum_gamma  int_box psi^dagger(z + gamma eps) H_D psi(z) dz  without the
/// renormalization constant. H_D acts on a plane wave as sigma_x p + sigma_z m.
/// Its c-number part is -sum_j E_j cos(p_j eps).
inline ModeOperator build_H0_eps_unrenormalized(const LatticeConfig& cfg, double eps) {
  return build_mode_bilinear(cfg, [&](const ModeSpinor& a, const ModeSpinor& b) -> cplx {
    if (a.j != b.j) return 0.0;
    const cplx split = 0.5 * (std::polar(1.0, -a.p * eps) + std::polar(1.0, a.p * eps));
    return split * mat2::sandwich(a.u, mat2::dirac(b.p, cfg.mass), b.u);
  });
}

/// Renormalization constant xi_{R,eps} = sum_j E_j cos(p_j eps).
inline double xi_R_eps(const LatticeConfig& cfg, double eps) {
  double acc = 0.0;
  for (int j = -cfg.n_max; j <= cfg.n_max; ++j) {
    const double p = cfg.momentum(j);
    acc += dispersion(p, cfg.mass) * std::cos(p * eps);
  }
  return acc;
}

inline double xi_R(const LatticeConfig& cfg) { return xi_R_eps(cfg, 0.0); }

// ---------------------------------------------------------------------------
// Densities and currents

inline ModeOperator build_rho(double z, const LatticeConfig& cfg) {
  return build_field(cfg, FieldBilinear{}, z);
}

inline ModeOperator build_J(double z, const LatticeConfig& cfg) {
  return build_field(cfg, FieldBilinear{.matrix = mat2::sigma_x()}, z);
}

/// d/dz J(z). `matrix` lets a caller swap the sigma_x insertion.
inline ModeOperator build_dJ_dz(double z, const LatticeConfig& cfg, const Mat2& matrix = mat2::sigma_x()) {
  return build_field(cfg, FieldBilinear{.matrix = matrix}, z, 1);
}

/// psi^dagger(z + g) sigma_x psi(z)
inline ModeOperator build_J_one_sided(double z, double g, const LatticeConfig& cfg) {
  return build_field(cfg, FieldBilinear{.matrix = mat2::sigma_x(), .left_shift = g}, z);
}

/// 1/2 sum_{gamma = +-1} psi^dagger(z + gamma eps) sigma_x psi(z)
inline ModeOperator build_J_split(double z, double eps, const LatticeConfig& cfg) {
  const FieldBilinear parts[] = {
      {.matrix = mat2::sigma_x(), .left_shift = eps, .scale = 0.5},
      {.matrix = mat2::sigma_x(), .left_shift = -eps, .scale = 0.5},
  };
  return build_field(cfg, parts, z);
}

/// The explicit field expression for [H0_eps, rho(z)]:
///   1/2 sum_gamma ( i (d psi^dagger(z+ge) sigma_x psi(z) + psi^dagger(z) sigma_x d psi(z+ge))
///                 + m (psi^dagger(z+ge) sigma_z psi(z) - psi^dagger(z) sigma_z psi(z+ge)) )
inline ModeOperator build_split_continuity_rhs(double z, double eps, const LatticeConfig& cfg) {
  std::vector<FieldBilinear> parts;
  const cplx i{0.0, 1.0};
  for (double g : {eps, -eps}) {
    parts.push_back({.matrix = mat2::sigma_x(), .left_shift = g, .left_derivatives = 1, .scale = 0.5 * i});
    parts.push_back({.matrix = mat2::sigma_x(), .right_shift = g, .right_derivatives = 1, .scale = 0.5 * i});
    parts.push_back({.matrix = mat2::sigma_z(), .left_shift = g, .scale = 0.5 * cfg.mass});
    parts.push_back({.matrix = mat2::sigma_z(), .right_shift = g, .scale = -0.5 * cfg.mass});
  }
  return build_field(cfg, parts, z);
}

namespace detail {

// Mode coefficient of the current compatible with the split Hamiltonian:
//   J(z;eps) = 1/2 sum_gamma { psi^dagger(z+ge) sigma_x psi(z)
//              + i int_{z-ge}^{z} psi^dagger(z'+ge) (i sigma_x d/dz' - m sigma_z) psi(z') dz' }
// The line integral of e^{iqz'} is (e^{iqz} - e^{iq(z-ge)})/(iq), or ge at q = 0.
inline cplx boulware_weight(const ModeSpinor& a, const ModeSpinor& b, double z, double eps, double mass,
                            bool differentiate) {
  const cplx i{0.0, 1.0};
  const double q = b.p - a.p;
  const cplx sx = mat2::sandwich(a.u, mat2::sigma_x(), b.u);
  // (i sigma_x d/dz' - m sigma_z) on e^{i p_b z'} u_b
  const cplx kin = -mat2::sandwich(a.u, mat2::dirac(b.p, mass), b.u);
  const cplx wave = std::polar(1.0, q * z);
  cplx acc{};
  for (double gamma : {1.0, -1.0}) {
    const double g = gamma * eps;
    const cplx shift = std::polar(1.0, -a.p * g);
    cplx local;
    cplx line;
    if (differentiate) {
      local = i * q * sx * wave;
      line = wave * (1.0 - std::polar(1.0, -q * g));
    } else {
      local = sx * wave;
      line = q == 0.0 ? cplx(g) : (wave - std::polar(1.0, q * (z - g))) / (i * q);
    }
    acc += 0.5 * shift * (local + i * kin * line);
  }
  return acc;
}

}  // namespace detail

inline ModeOperator build_J_boulware(double z, double eps, const LatticeConfig& cfg) {
  const double inv_len = 1.0 / cfg.box_length();
  return build_mode_bilinear(cfg, [&](const ModeSpinor& a, const ModeSpinor& b) {
    return inv_len * detail::boulware_weight(a, b, z, eps, cfg.mass, false);
  });
}

inline ModeOperator build_dJ_boulware_dz(double z, double eps, const LatticeConfig& cfg) {
  const double inv_len = 1.0 / cfg.box_length();
  return build_mode_bilinear(cfg, [&](const ModeSpinor& a, const ModeSpinor& b) {
    return inv_len * detail::boulware_weight(a, b, z, eps, cfg.mass, true);
  });
}

/// F = int_box rho(z) f(z) dz, exact over harmonics.
inline ModeOperator build_F(const TrigPoly& f, const LatticeConfig& cfg) {
  if (std::abs(f.box_length() - cfg.box_length()) > 1e-12 * cfg.box_length()) {
    throw ConfigError("smearing function lives on a different box");
  }
  if (f.max_harmonic() > 2 * cfg.n_max) {
    throw IndexError("harmonic " + std::to_string(f.max_harmonic()) + " exceeds 2*n_max");
  }
  return build_mode_bilinear(cfg, [&](const ModeSpinor& a, const ModeSpinor& b) -> cplx {
    const cplx c = f.coefficient(a.j - b.j);
    if (c == cplx{}) return 0.0;
    return c * mat2::dot(a.u, b.u);
  });
}

/// Total charge Q = int_box rho(z) dz.
inline ModeOperator build_charge(const LatticeConfig& cfg) {
  return build_F(TrigPoly::constant(cfg.box_length(), 1.0), cfg);
}

// ---------------------------------------------------------------------------
// Identity residuals

/// |u_a^dagger [ (l_a E_a - l_b E_b) + (p_b - p_a) sigma_x ] u_b|, the mode-pair
/// form of [H0, rho(z)] = i dJ/dz.
inline double continuity_pair_residual(const ModeSpinor& a, const ModeSpinor& b) {
  const cplx diag = (a.lambda() * a.energy - b.lambda() * b.energy) * mat2::dot(a.u, b.u);
  const cplx off = (b.p - a.p) * mat2::sandwich(a.u, mat2::sigma_x(), b.u);
  return std::abs(diag + off);
}

inline double continuity_residual(double z, const LatticeConfig& cfg, const Mat2& current_matrix = mat2::sigma_x()) {
  const ModeOperator lhs = commutator(build_H0(cfg), build_rho(z, cfg));
  const ModeOperator rhs = cplx(0.0, 1.0) * build_dJ_dz(z, cfg, current_matrix);
  return max_abs_diff(lhs, rhs);
}

/// [H0_eps, rho(z)] - i dJ_boulware/dz, coefficient-wise.
inline double split_continuity_residual(double z, double eps, const LatticeConfig& cfg) {
  const ModeOperator lhs = commutator(build_H0_eps(cfg, eps), build_rho(z, cfg));
  const ModeOperator rhs = cplx(0.0, 1.0) * build_dJ_boulware_dz(z, eps, cfg);
  return max_abs_diff(lhs, rhs);
}

/// [H0_eps, rho(z)] against its explicit field-bilinear expansion.
inline double split_commutator_expansion_residual(double z, double eps, const LatticeConfig& cfg) {
  const ModeOperator lhs = commutator(build_H0_eps(cfg, eps), build_rho(z, cfg));
  return max_abs_diff(lhs, build_split_continuity_rhs(z, eps, cfg));
}

}  // namespace psplit
