#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "psplit/lattice.hpp"

namespace psplit {

struct Harmonic {
  int n = 0;
  cplx c;
};

/// Real trigonometric polynomial on a periodic box,
///   f(z) = sum_n c_n exp(2 pi i n z / L),  c_{-n} = conj(c_n).
class TrigPoly {
 public:
  TrigPoly() = default;

  /// Each (n, c) fixes c_n = c and its mirror c_{-n} = conj(c).
  TrigPoly(double box_length, const std::vector<Harmonic>& harmonics) : length_(box_length) {
    if (!(box_length > 0.0)) throw ConfigError("box length must be positive");
    for (const auto& h : harmonics) {
      if (h.n == 0 && h.c.imag() != 0.0) throw ConfigError("zero harmonic of a real f must be real");
      put(h.n, h.c);
      put(-h.n, std::conj(h.c));
    }
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second == cplx{}; });
  }

  static TrigPoly constant(double box_length, double c) { return TrigPoly(box_length, {{0, c}}); }

  static TrigPoly cosine(double box_length, int n, double amplitude = 1.0) {
    return TrigPoly(box_length, {{n, amplitude / 2.0}});
  }

  double box_length() const { return length_; }
  const std::map<int, cplx>& coefficients() const { return coeffs_; }

  cplx coefficient(int n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? cplx{} : it->second;
  }

  int max_harmonic() const {
    int m = 0;
    for (const auto& [n, _] : coeffs_) m = std::max(m, std::abs(n));
    return m;
  }

  double wavenumber(int n) const { return 2.0 * std::numbers::pi * n / length_; }

  double operator()(double z) const {
    cplx acc{};
    for (const auto& [n, c] : coeffs_) acc += c * std::polar(1.0, wavenumber(n) * z);
    return acc.real();
  }

  double derivative(double z) const {
    cplx acc{};
    for (const auto& [n, c] : coeffs_) acc += c * cplx(0.0, wavenumber(n)) * std::polar(1.0, wavenumber(n) * z);
    return acc.real();
  }

  /// Integral over the box of (f(z+g) - f(z)) f'(z), exact over harmonics.
  double shifted_derivative_overlap(double g) const {
    double acc = 0.0;
    for (const auto& [n, c] : coeffs_) {
      if (n <= 0) continue;
      const double k = wavenumber(n);
      acc += 2.0 * k * std::norm(c) * std::sin(k * g);
    }
    return length_ * acc;
  }

  /// Integral over the box of f'(z)^2 (Parseval).
  double derivative_norm2() const {
    double acc = 0.0;
    for (const auto& [n, c] : coeffs_) acc += wavenumber(n) * wavenumber(n) * std::norm(c);
    return length_ * acc;
  }

  TrigPoly scaled(double s) const {
    TrigPoly out = *this;
    for (auto& [_, c] : out.coeffs_) c *= s;
    return out;
  }

 private:
  void put(int n, cplx c) {
    auto [it, inserted] = coeffs_.try_emplace(n, c);
    if (!inserted && it->second != c) {
      throw ConfigError("harmonic " + std::to_string(n) + " given inconsistent coefficients");
    }
  }

  double length_ = 1.0;
  std::map<int, cplx> coeffs_;
};

}  // namespace psplit
