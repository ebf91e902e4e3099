#pragma once

// Discretized 1+1D free Dirac model on a periodic box.
//
// Momenta p_j = j * delta_p for j = -n_max ... +n_max. The box length
// L = 2*pi / delta_p makes every plane wave e^{i p_j z} a harmonic of the box,
// so all spatial integrals of mode products are exact finite sums.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace psplit {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class LatticeMismatch : public std::invalid_argument {
 public:
  LatticeMismatch() : std::invalid_argument("operands live on different lattices") {}
};

/// Sign of the single-particle energy of a Dirac mode.
enum class Band : int { positive = +1, negative = -1 };

inline constexpr int sign_of(Band b) { return static_cast<int>(b); }

struct LatticeConfig {
  double mass = 1.0;
  double delta_p = 1.0;
  int n_max = 2;

  double box_length() const { return 2.0 * std::numbers::pi / delta_p; }
  double cutoff() const { return n_max * delta_p; }
  int modes_per_species() const { return 2 * n_max + 1; }
  double momentum(int j) const { return j * delta_p; }
  bool contains(int j) const { return j >= -n_max && j <= n_max; }

  void validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be positive");
    if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw ConfigError("delta_p must be positive");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
  }

  void require(int j) const {
    if (!contains(j)) {
      throw IndexError("mode index " + std::to_string(j) + " outside [-" + std::to_string(n_max) +
                       ", " + std::to_string(n_max) + "]");
    }
  }

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

// ---------------------------------------------------------------------------
// 2x2 helpers

namespace mat2 {

inline Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
inline Mat2 sigma_x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
inline Mat2 sigma_y() { return {{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}}; }
inline Mat2 sigma_z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat2 scale(const Mat2& a, cplx s) {
  Mat2 r = a;
  for (auto& row : r)
    for (auto& x : row) x *= s;
  return r;
}

inline Mat2 add(const Mat2& a, const Mat2& b) {
  Mat2 r = a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] += b[i][j];
  return r;
}

inline Spinor apply(const Mat2& a, const Spinor& u) {
  return {a[0][0] * u[0] + a[0][1] * u[1], a[1][0] * u[0] + a[1][1] * u[1]};
}

/// u^dagger M v
inline cplx sandwich(const Spinor& u, const Mat2& m, const Spinor& v) {
  const Spinor mv = apply(m, v);
  return std::conj(u[0]) * mv[0] + std::conj(u[1]) * mv[1];
}

inline cplx dot(const Spinor& u, const Spinor& v) { return sandwich(u, identity(), v); }

/// Plane-wave Dirac matrix sigma_x p + sigma_z m.
inline Mat2 dirac(double p, double m) { return add(scale(sigma_x(), p), scale(sigma_z(), m)); }

}  // namespace mat2

// ---------------------------------------------------------------------------

inline double dispersion(double p, double m) { return std::sqrt(p * p + m * m); }

struct ModeSpinor {
  Band band = Band::positive;
  int j = 0;
  double p = 0.0;
  double energy = 0.0;
  Spinor u{};

  int lambda() const { return sign_of(band); }
};

/// Normalized eigenspinor of sigma_x p + sigma_z m with eigenvalue lambda*E_p.
///
/// The negative band uses the rationalized form sqrt((E+m)/2E) (-p/(E+m), 1),
/// finite at p = 0. It differs from the textbook N (1, p/(m-E)) form only by a
/// phase.
inline ModeSpinor spinor(Band band, int j, const LatticeConfig& cfg) {
  cfg.require(j);
  ModeSpinor s;
  s.band = band;
  s.j = j;
  s.p = cfg.momentum(j);
  s.energy = dispersion(s.p, cfg.mass);
  const double e_plus_m = s.energy + cfg.mass;
  const double norm = std::sqrt(e_plus_m / (2.0 * s.energy));
  const double ratio = s.p / e_plus_m;
  if (band == Band::positive) {
    s.u = {norm, norm * ratio};
  } else {
    s.u = {-norm * ratio, norm};
  }
  return s;
}

/// phi_{lambda,j}(z) = u e^{i p_j z} / sqrt(L)
inline Spinor mode_function(Band band, int j, double z, const LatticeConfig& cfg) {
  const ModeSpinor s = spinor(band, j, cfg);
  const cplx phase = std::polar(1.0 / std::sqrt(cfg.box_length()), s.p * z);
  return {s.u[0] * phase, s.u[1] * phase};
}

/// Exact value of the box integral of e^{i k delta_p z} over [0, L).
inline double harmonic_integral(int k, const LatticeConfig& cfg) {
  return k == 0 ? cfg.box_length() : 0.0;
}

/// Exact overlap of two mode functions over the box.
inline cplx mode_overlap(Band a, int ja, Band b, int jb, const LatticeConfig& cfg) {
  const ModeSpinor sa = spinor(a, ja, cfg);
  const ModeSpinor sb = spinor(b, jb, cfg);
  return mat2::dot(sa.u, sb.u) * harmonic_integral(jb - ja, cfg) / cfg.box_length();
}

}  // namespace psplit
