#pragma once

// Formal continuum algebra of fermion bilinears psi^dagger(x) M psi(y).
//
// Points are a base variable (z, z', z'') plus an integer multiple of the
// formal displacement "gamma eps"; a sum over gamma = +-1 is implied wherever
// such a shift appears. Smearing functions enter only as placeholders f(x),
// f'(x) and are never evaluated. Canonical equality is structural equality
// after merging terms with identical keys.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "psplit/lattice.hpp"

namespace psplit::sym {

class SymbolicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Var { z, z1, z2 };

struct SymPoint {
  Var base = Var::z;
  int shift = 0;  // multiples of gamma*eps

  auto operator<=>(const SymPoint&) const = default;
};

inline SymPoint at(Var v, int shift = 0) { return {v, shift}; }

/// delta(a - b), stored with a <= b since the delta is even.
struct DeltaFactor {
  SymPoint a;
  SymPoint b;

  static DeltaFactor make(SymPoint x, SymPoint y) { return x <= y ? DeltaFactor{x, y} : DeltaFactor{y, x}; }
  auto operator<=>(const DeltaFactor&) const = default;
};

enum class SmearKind { value, derivative };

struct SmearFactor {
  SmearKind kind = SmearKind::value;
  SymPoint point;

  auto operator<=>(const SmearFactor&) const = default;
};

namespace detail {

using MatKey = std::array<double, 8>;

inline MatKey mat_key(const Mat2& m) {
  return {m[0][0].real(), m[0][0].imag(), m[0][1].real(), m[0][1].imag(),
          m[1][0].real(), m[1][0].imag(), m[1][1].real(), m[1][1].imag()};
}

}  // namespace detail

struct Bilinear {
  SymPoint left;
  Mat2 matrix = mat2::identity();
  SymPoint right;

  friend bool operator==(const Bilinear& x, const Bilinear& y) {
    return x.left == y.left && x.right == y.right && detail::mat_key(x.matrix) == detail::mat_key(y.matrix);
  }
  friend std::partial_ordering operator<=>(const Bilinear& x, const Bilinear& y) {
    if (auto c = std::tie(x.left, x.right) <=> std::tie(y.left, y.right); c != 0) return c;
    return detail::mat_key(x.matrix) <=> detail::mat_key(y.matrix);
  }
};

inline Bilinear bilinear(SymPoint left, const Mat2& m, SymPoint right) { return {left, m, right}; }

struct TermKey {
  std::vector<DeltaFactor> deltas;
  std::vector<SmearFactor> smears;
  std::optional<Bilinear> field;

  void canonicalize() {
    std::sort(deltas.begin(), deltas.end());
    std::sort(smears.begin(), smears.end());
  }

  friend bool operator==(const TermKey&, const TermKey&) = default;
  friend std::partial_ordering operator<=>(const TermKey& x, const TermKey& y) {
    if (auto c = x.deltas <=> y.deltas; c != 0) return c;
    if (auto c = x.smears <=> y.smears; c != 0) return c;
    if (x.field.has_value() != y.field.has_value()) return x.field.has_value() <=> y.field.has_value();
    if (!x.field) return std::partial_ordering::equivalent;
    return *x.field <=> *y.field;
  }
};

struct SymTerm {
  cplx coeff = 1.0;
  TermKey key;
};

class SymExpr {
 public:
  using Map = std::map<TermKey, cplx>;

  SymExpr() = default;

  static SymExpr of(const Bilinear& b, cplx c = 1.0) {
    SymExpr e;
    TermKey k;
    k.field = b;
    e.add(std::move(k), c);
    return e;
  }

  void add(TermKey key, cplx c) {
    if (c == cplx{}) return;
    key.canonicalize();
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::vector<SymTerm> term_list() const {
    std::vector<SymTerm> out;
    for (const auto& [k, c] : terms_) out.push_back({c, k});
    return out;
  }

  SymExpr& operator+=(const SymExpr& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  SymExpr& operator-=(const SymExpr& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  SymExpr& operator*=(cplx s) {
    SymExpr out;
    for (const auto& [k, c] : terms_) out.add(k, c * s);
    return *this = std::move(out);
  }

  friend SymExpr operator+(SymExpr a, const SymExpr& b) { return a += b; }
  friend SymExpr operator-(SymExpr a, const SymExpr& b) { return a -= b; }
  friend SymExpr operator*(cplx s, SymExpr a) { return a *= s; }
  friend bool operator==(const SymExpr&, const SymExpr&) = default;

  /// Multiplies every term by extra delta and smearing factors.
  SymExpr times(const std::vector<DeltaFactor>& deltas, const std::vector<SmearFactor>& smears) const {
    SymExpr out;
    for (const auto& [key, c] : terms_) {
      TermKey k = key;
      k.deltas.insert(k.deltas.end(), deltas.begin(), deltas.end());
      k.smears.insert(k.smears.end(), smears.begin(), smears.end());
      out.add(std::move(k), c);
    }
    return out;
  }

 private:
  Map terms_;
};

/// [psi^dagger(xA) MA psi(yA), psi^dagger(xB) MB psi(yB)]
///   = psi^dagger(xA) MA MB psi(yB) delta(yA - xB) - psi^dagger(xB) MB MA psi(yA) delta(yB - xA)
inline SymExpr commute_bilinears(const Bilinear& a, const Bilinear& b) {
  SymExpr out;
  TermKey first;
  first.field = Bilinear{a.left, mat2::mul(a.matrix, b.matrix), b.right};
  first.deltas.push_back(DeltaFactor::make(a.right, b.left));
  out.add(std::move(first), 1.0);
  TermKey second;
  second.field = Bilinear{b.left, mat2::mul(b.matrix, a.matrix), a.right};
  second.deltas.push_back(DeltaFactor::make(b.right, a.left));
  out.add(std::move(second), -1.0);
  return out;
}

namespace detail {

inline SymPoint substitute(SymPoint p, Var var, SymPoint replacement_at_zero) {
  if (p.base != var) return p;
  return {replacement_at_zero.base, replacement_at_zero.shift + p.shift};
}

inline TermKey substitute(const TermKey& k, Var var, SymPoint root) {
  TermKey out;
  for (const auto& d : k.deltas) out.deltas.push_back(DeltaFactor::make(substitute(d.a, var, root), substitute(d.b, var, root)));
  for (const auto& s : k.smears) out.smears.push_back({s.kind, substitute(s.point, var, root)});
  if (k.field) out.field = Bilinear{substitute(k.field->left, var, root), k.field->matrix, substitute(k.field->right, var, root)};
  return out;
}

}  // namespace detail

/// Formal  int g(var) delta(x - var) dvar = g(x)  on every term.
inline SymExpr integrate_delta(const SymExpr& e, Var var) {
  SymExpr out;
  for (const auto& [key, c] : e.terms()) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < key.deltas.size(); ++i) {
      const auto& d = key.deltas[i];
      if (d.a.base != var && d.b.base != var) continue;
      if (d.a.base == var && d.b.base == var) throw SymbolicError("delta is not linear in the integration variable");
      if (hit) throw SymbolicError("term carries more than one delta in the integration variable");
      hit = i;
    }
    if (!hit) throw SymbolicError("term has no delta factor in the integration variable");
    const DeltaFactor d = key.deltas[*hit];
    const SymPoint in_var = d.a.base == var ? d.a : d.b;
    const SymPoint other = d.a.base == var ? d.b : d.a;
    // var + s_v = other  =>  var = other - s_v
    const SymPoint root{other.base, other.shift - in_var.shift};
    TermKey rest = key;
    rest.deltas.erase(rest.deltas.begin() + static_cast<std::ptrdiff_t>(*hit));
    out.add(detail::substitute(rest, var, root), c);
  }
  return out;
}

/// Change of integration variable var -> var + shift (gamma eps units).
inline SymExpr translate(const SymExpr& e, Var var, int shift) {
  SymExpr out;
  for (const auto& [key, c] : e.terms()) out.add(detail::substitute(key, var, SymPoint{var, shift}), c);
  return out;
}

/// Uses translation invariance of the remaining integral over var to put the
/// right field point of every term at var with zero shift.
inline SymExpr normalize_translation(const SymExpr& e, Var var) {
  SymExpr out;
  for (const auto& [key, c] : e.terms()) {
    const int s = key.field && key.field->right.base == var ? key.field->right.shift : 0;
    out.add(detail::substitute(key, var, SymPoint{var, -s}), c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline std::string coeff_str(cplx c) {
  if (c.imag() == 0.0) return num(c.real());
  if (c.real() == 0.0) return num(c.imag()) + "i";
  return "(" + num(c.real()) + (c.imag() < 0 ? "-" : "+") + num(std::abs(c.imag())) + "i)";
}

inline std::string matrix_str(const Mat2& m) {
  const auto k = mat_key(m);
  if (k == mat_key(mat2::identity())) return "";
  if (k == mat_key(mat2::sigma_x())) return "σx ";
  if (k == mat_key(mat2::sigma_y())) return "σy ";
  if (k == mat_key(mat2::sigma_z())) return "σz ";
  return "[[" + coeff_str(m[0][0]) + ", " + coeff_str(m[0][1]) + "], [" + coeff_str(m[1][0]) + ", " +
         coeff_str(m[1][1]) + "]] ";
}

}  // namespace detail

inline std::string to_string(Var v) {
  switch (v) {
    case Var::z: return "z";
    case Var::z1: return "z'";
    case Var::z2: return "z''";
  }
  return "?";
}

inline std::string to_string(const SymPoint& p) {
  std::string s = to_string(p.base);
  if (p.shift == 1) s += "+γε";
  else if (p.shift == -1) s += "-γε";
  else if (p.shift != 0) s += (p.shift > 0 ? "+" : "") + std::to_string(p.shift) + "γε";
  return s;
}

inline std::string to_string(const DeltaFactor& d) { return "δ(" + to_string(d.a) + " - " + to_string(d.b) + ")"; }

inline std::string to_string(const SmearFactor& s) {
  return (s.kind == SmearKind::value ? "f(" : "f'(") + to_string(s.point) + ")";
}

inline std::string to_string(const Bilinear& b) {
  return "ψ†(" + to_string(b.left) + ") " + detail::matrix_str(b.matrix) + "ψ(" + to_string(b.right) + ")";
}

/// Deterministic: terms follow the canonical key order.
inline std::string to_string(const SymExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : e.terms()) {
    std::string t = detail::coeff_str(c);
    for (const auto& s : k.smears) t += " · " + to_string(s);
    for (const auto& d : k.deltas) t += " · " + to_string(d);
    if (k.field) t += " · " + to_string(*k.field);
    if (!first) out += t[0] == '-' ? "\n- " + t.substr(1) : "\n+ " + t;
    else out += t;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivations

struct DerivationStep {
  std::string label;
  SymExpr expr;
};

inline Bilinear density(Var v) { return bilinear(at(v), mat2::identity(), at(v)); }

inline Bilinear current(Var v) { return bilinear(at(v), mat2::sigma_x(), at(v)); }

/// psi^dagger(v + gamma eps) sigma_x psi(v); the 1/2 sum over gamma is carried
/// by the caller's coefficient.
inline Bilinear split_current(Var v) { return bilinear(at(v, 1), mat2::sigma_x(), at(v)); }

/// -i int int f(z) f'(z') [A(z), B(z')] dz' dz, integrated over z' through the
/// delta factors. With `split` the current is the gamma-symmetrized
/// point-split current and a final change of variable aligns every term on
/// psi^dagger(z + gamma eps) sigma_x psi(z).
inline std::vector<DerivationStep> derive_smeared_commutator(const Bilinear& a, const Bilinear& b, cplx b_weight,
                                                             bool align) {
  std::vector<DerivationStep> steps;
  const SymExpr comm = b_weight * commute_bilinears(a, b);
  steps.push_back({"commutator", comm});
  const SymExpr smeared =
      cplx(0.0, -1.0) * comm.times({}, {{SmearKind::value, at(Var::z)}, {SmearKind::derivative, at(Var::z1)}});
  steps.push_back({"smeared with -i f(z) f'(z')", smeared});
  const SymExpr integrated = integrate_delta(smeared, Var::z1);
  steps.push_back({"integrated over z'", integrated});
  if (align) steps.push_back({"integration variable shifted", normalize_translation(integrated, Var::z)});
  return steps;
}

inline std::vector<DerivationStep> derive_I1_transcript(bool split) {
  if (split) return derive_smeared_commutator(density(Var::z), split_current(Var::z1), 0.5, true);
  return derive_smeared_commutator(density(Var::z), current(Var::z1), 1.0, false);
}

/// The formal unsplit I1 integrand; structurally zero.
inline SymExpr derive_I1_formal() { return derive_I1_transcript(false).back().expr; }

/// The point-split I1 integrand, (-i/2)(f(z+ge) - f(z)) f'(z) psi^dagger(z+ge) sigma_x psi(z).
inline SymExpr derive_I1_split() { return derive_I1_transcript(true).back().expr; }

/// Charge-charge analogue of the I1 pipeline.
inline SymExpr derive_charge_charge() {
  return derive_smeared_commutator(density(Var::z), density(Var::z1), 1.0, false).back().expr;
}

}  // namespace psplit::sym
