#pragma once

// Second-order response quantities of the smeared charge F = int rho f:
//   I2    = 2 <0| F H0 F |0>                 (exact, two independent routes)
//   I1eps = point-split evaluation through the vacuum current kernel
// plus the continuum asymptotics of the kernel and of the finite differences.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "psplit/field_ops.hpp"

namespace psplit {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// ---------------------------------------------------------------------------
// I2

/// 2 <0|F H0 F|0> by applying F, H0, F to the vacuum and projecting back.
inline cplx compute_I2_direct_complex(const TrigPoly& f, const LatticeConfig& cfg) {
  const ModeOperator F = build_F(f, cfg);
  const ModeOperator H = build_H0(cfg);
  const FockVector vac = vacuum(cfg);
  const FockVector out = apply(F, apply(H, apply(F, vac)));
  return 2.0 * inner(vac, out);
}

inline double compute_I2_direct(const TrigPoly& f, const LatticeConfig& cfg) {
  return compute_I2_direct_complex(f, cfg).real();
}

/// 2 sum_m |<0|F|m>|^2 xi(m). F is a bilinear, so only the pair states
/// b_k^dagger d_k'^dagger |0> connect to the vacuum; their amplitude is
/// c_{k-k'} u_{+,k}^dagger u_{-,k'} and their energy E_k + E_k'.
inline double compute_I2_spectral(const TrigPoly& f, const LatticeConfig& cfg) {
  if (f.max_harmonic() > 2 * cfg.n_max) {
    throw IndexError("harmonic " + std::to_string(f.max_harmonic()) + " exceeds 2*n_max");
  }
  double acc = 0.0;
  for (int k = -cfg.n_max; k <= cfg.n_max; ++k) {
    const ModeSpinor e = spinor(Band::positive, k, cfg);
    for (int kp = -cfg.n_max; kp <= cfg.n_max; ++kp) {
      const cplx c = f.coefficient(k - kp);
      if (c == cplx{}) continue;
      const ModeSpinor h = spinor(Band::negative, kp, cfg);
      acc += std::norm(c * mat2::dot(e.u, h.u)) * (e.energy + h.energy);
    }
  }
  return 2.0 * acc;
}

/// <0|[F, [H0, F]]|0> through the normal-ordered operator algebra.
inline double compute_I2_double_commutator(const TrigPoly& f, const LatticeConfig& cfg) {
  const ModeOperator F = build_F(f, cfg);
  return vev(commutator(F, commutator(build_H0(cfg), F))).real();
}

// ---------------------------------------------------------------------------
// Point-split kernel and I1(eps)

/// <0| psi^dagger(z+g) sigma_x psi(z) |0> = -(1/L) sum_j (p_j/E_j) e^{-i p_j g}
///   = (2i/L) sum_{j>0} (p_j/E_j) sin(p_j g), summed in the paired form so
/// parity is exact.
inline cplx vev_kernel(double g, const LatticeConfig& cfg) {
  double acc = 0.0;
  for (int j = 1; j <= cfg.n_max; ++j) {
    const double p = cfg.momentum(j);
    acc += (p / dispersion(p, cfg.mass)) * std::sin(p * g);
  }
  return {0.0, 2.0 * acc / cfg.box_length()};
}

/// (-i/2) sum_gamma int (f(z+ge) - f(z)) f'(z) <psi^dagger(z+ge) sigma_x psi(z)> dz
inline cplx compute_I1_eps_complex(const TrigPoly& f, double eps, const LatticeConfig& cfg) {
  if (f.max_harmonic() > 2 * cfg.n_max) {
    throw IndexError("harmonic " + std::to_string(f.max_harmonic()) + " exceeds 2*n_max");
  }
  cplx acc{};
  for (double gamma : {1.0, -1.0}) {
    const double g = gamma * eps;
    acc += f.shifted_derivative_overlap(g) * vev_kernel(g, cfg);
  }
  return cplx(0.0, -0.5) * acc;
}

inline double compute_I1_eps(const TrigPoly& f, double eps, const LatticeConfig& cfg) {
  return compute_I1_eps_complex(f, eps, cfg).real();
}

// ---------------------------------------------------------------------------
// Continuum kernel asymptote

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double upper_limit = 0.0;
};

inline double default_cutoff(double eps) { return std::max(1.0e4, 100.0 / std::abs(eps)); }

/// int_0^P (p/E_p) sin(p eps) e^{-eta p} dp with P = max(cutoff, 40/eta), so the
/// neglected tail is below e^{-40}/eps. Integrated panel by panel, one
/// oscillation per panel.
inline QuadratureResult damped_kernel_integral(double eps, double eta, double cutoff, double mass,
                                               double abs_tol = 1e-9) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(mass >= 0.0)) throw ConfigError("mass must be non-negative");
  QuadratureResult r;
  r.upper_limit = std::max(cutoff, 40.0 / eta);
  const auto integrand = [&](double p) {
    const double e = dispersion(p, mass);
    const double ratio = e > 0.0 ? p / e : 1.0;
    return ratio * std::sin(p * eps) * std::exp(-eta * p);
  };
  const double panel = 2.0 * std::numbers::pi / eps;
  for (double a = 0.0; a < r.upper_limit; a += panel) {
    const double b = std::min(a + panel, r.upper_limit);
    double err = 0.0;
    r.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 10, 1e-13, &err);
    r.error += err;
  }
  if (r.error > abs_tol) throw QuadratureError("damped kernel quadrature did not converge", r.error);
  return r;
}

struct KernelAsymptote {
  double value = 0.0;            // eta -> 0 extrapolation
  double error_estimate = 0.0;   // extrapolation + quadrature
  std::vector<double> etas;
  std::vector<double> samples;   // damped integral at each eta
};

/// Abel-regularized int_0^inf (p/E_p) sin(p eps) dp: damped integrals at
/// eta, eta/2, eta/4 combined by two Richardson steps (error O(eta^3)).
inline KernelAsymptote kernel_asymptote(double eps, double eta, double cutoff, double mass) {
  KernelAsymptote k;
  double quad_err = 0.0;
  for (double e : {eta, eta / 2.0, eta / 4.0}) {
    const QuadratureResult q = damped_kernel_integral(eps, e, cutoff, mass);
    k.etas.push_back(e);
    k.samples.push_back(q.value);
    quad_err += q.error;
  }
  const double r1a = 2.0 * k.samples[1] - k.samples[0];
  const double r1b = 2.0 * k.samples[2] - k.samples[1];
  k.value = (4.0 * r1b - r1a) / 3.0;
  k.error_estimate = std::abs(k.value - r1b) + quad_err;
  return k;
}

inline KernelAsymptote kernel_asymptote(double eps, double mass) {
  return kernel_asymptote(eps, eps * eps, default_cutoff(eps), mass);
}

// ---------------------------------------------------------------------------
// Continuum I1 limit

struct ContinuumLimit {
  double finite_difference = 0.0;
  double limit = 0.0;
};

/// 2 sum_gamma int ((f(z+ge) - f(z))/(ge)) f'(z) dz and its eps -> 0 value
/// 4 int f'^2 dz.
inline ContinuumLimit continuum_I1_limit(const TrigPoly& f, double eps) {
  if (eps == 0.0) throw ConfigError("eps must be non-zero");
  ContinuumLimit r;
  for (double gamma : {1.0, -1.0}) {
    const double g = gamma * eps;
    r.finite_difference += 2.0 * f.shifted_derivative_overlap(g) / g;
  }
  r.limit = 4.0 * f.derivative_norm2();
  return r;
}

// ---------------------------------------------------------------------------

struct KernelRow {
  double g = 0.0;
  cplx value;
};

struct EpsRow {
  double eps = 0.0;
  double I1_eps = 0.0;
  double I1_eps_imag = 0.0;
  ContinuumLimit continuum;
};

struct AnomalyReport {
  LatticeConfig config;
  double I2_spectral = 0.0;
  std::optional<double> I2_direct;  // absent when the lattice exceeds the Fock slot capacity
  std::optional<double> I2_direct_imag;
  std::vector<EpsRow> eps_rows;
  std::vector<KernelRow> kernel;
  double continuum_limit_I1 = 0.0;
};

}  // namespace psplit
