#pragma once

// Normal-ordered polynomials in fermionic mode operators.
//
// A monomial  c * a+_{s1} ... a+_{sk} a_{t1} ... a_{tl}  is stored with
// creators strictly ascending and annihilators strictly descending by slot,
// which makes the adjoint a plain swap of the two lists.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "psplit/fock.hpp"

namespace psplit {

struct LadderOp {
  std::uint16_t slot = 0;
  bool dagger = false;
};

inline LadderOp cr(int slot) { return {static_cast<std::uint16_t>(slot), true}; }
inline LadderOp an(int slot) { return {static_cast<std::uint16_t>(slot), false}; }

struct Signature {
  std::vector<std::uint16_t> creators;
  std::vector<std::uint16_t> annihilators;

  bool is_c_number() const { return creators.empty() && annihilators.empty(); }
  auto operator<=>(const Signature&) const = default;
};

struct ModeMonomial {
  cplx coeff;
  Signature sig;
};

class ModeOperator {
 public:
  using Map = std::map<Signature, cplx>;

  explicit ModeOperator(const LatticeConfig& cfg) : cfg_(cfg) {}

  static ModeOperator scalar(const LatticeConfig& cfg, cplx c) {
    ModeOperator op(cfg);
    op.add_canonical(Signature{}, c);
    return op;
  }

  static ModeOperator word(const LatticeConfig& cfg, std::span<const LadderOp> ops, cplx c = 1.0) {
    ModeOperator op(cfg);
    op.add_word(ops, c);
    return op;
  }

  static ModeOperator creator(const LatticeConfig& cfg, SlotIndex s) {
    const LadderOp w[] = {cr(s.linear(cfg))};
    return word(cfg, w);
  }

  static ModeOperator annihilator(const LatticeConfig& cfg, SlotIndex s) {
    const LadderOp w[] = {an(s.linear(cfg))};
    return word(cfg, w);
  }

  static ModeOperator number(const LatticeConfig& cfg, SlotIndex s) {
    const int k = s.linear(cfg);
    const LadderOp w[] = {cr(k), an(k)};
    return word(cfg, w);
  }

  const LatticeConfig& lattice() const { return cfg_; }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  cplx coefficient(const Signature& sig) const {
    auto it = terms_.find(sig);
    return it == terms_.end() ? cplx{} : it->second;
  }

  cplx c_number() const { return coefficient(Signature{}); }

  std::vector<ModeMonomial> monomials() const {
    std::vector<ModeMonomial> out;
    out.reserve(terms_.size());
    for (const auto& [sig, c] : terms_) out.push_back({c, sig});
    return out;
  }

  /// Adds an already canonical monomial. Exact zeros are never stored.
  void add_canonical(const Signature& sig, cplx c) {
    if (c == cplx{}) return;
    auto [it, inserted] = terms_.try_emplace(sig, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
  }

  /// Adds c * (arbitrary operator word), normal ordering it with
  /// a_s a+_t = delta_st - a+_t a_s.
  void add_word(std::span<const LadderOp> ops, cplx c) {
    if (c == cplx{}) return;
    std::vector<LadderOp> w(ops.begin(), ops.end());
    normal_order(std::move(w), c);
  }

  ModeOperator adjoint() const {
    ModeOperator out(cfg_);
    for (const auto& [sig, c] : terms_) {
      Signature s;
      s.creators.assign(sig.annihilators.rbegin(), sig.annihilators.rend());
      s.annihilators.assign(sig.creators.rbegin(), sig.creators.rend());
      out.terms_.emplace(std::move(s), std::conj(c));
    }
    return out;
  }

  ModeOperator& operator+=(const ModeOperator& o) {
    check(o);
    for (const auto& [sig, c] : o.terms_) add_canonical(sig, c);
    return *this;
  }

  ModeOperator& operator-=(const ModeOperator& o) {
    check(o);
    for (const auto& [sig, c] : o.terms_) add_canonical(sig, -c);
    return *this;
  }

  ModeOperator& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = it->second == cplx{} ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend ModeOperator operator+(ModeOperator a, const ModeOperator& b) { return a += b; }
  friend ModeOperator operator-(ModeOperator a, const ModeOperator& b) { return a -= b; }
  friend ModeOperator operator*(cplx s, ModeOperator a) { return a *= s; }
  friend ModeOperator operator-(ModeOperator a) { return a *= -1.0; }

  void check(const ModeOperator& o) const {
    if (!(cfg_ == o.cfg_)) throw LatticeMismatch();
  }

 private:
  void normal_order(std::vector<LadderOp> w, cplx c) {
    // First annihilator immediately followed by a creator.
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!w[i].dagger && w[i + 1].dagger) {
        if (w[i].slot == w[i + 1].slot) {
          std::vector<LadderOp> contracted;
          contracted.reserve(w.size() - 2);
          contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
          contracted.insert(contracted.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
          normal_order(std::move(contracted), c);
        }
        std::swap(w[i], w[i + 1]);
        normal_order(std::move(w), -c);
        return;
      }
    }
    Signature sig;
    for (const auto& op : w) (op.dagger ? sig.creators : sig.annihilators).push_back(op.slot);
    int parity = 0;
    if (!sort_with_parity(sig.creators, std::less<>{}, parity)) return;
    if (!sort_with_parity(sig.annihilators, std::greater<>{}, parity)) return;
    add_canonical(sig, parity % 2 == 0 ? c : -c);
  }

  // Insertion sort counting transpositions; false on a repeated slot.
  template <class Cmp>
  static bool sort_with_parity(std::vector<std::uint16_t>& v, Cmp cmp, int& parity) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      for (std::size_t j = i; j > 0 && !cmp(v[j - 1], v[j]); --j) {
        if (v[j - 1] == v[j]) return false;
        std::swap(v[j - 1], v[j]);
        ++parity;
      }
    }
    return true;
  }

  LatticeConfig cfg_;
  Map terms_;
};

inline std::vector<LadderOp> word_of(const Signature& sig) {
  std::vector<LadderOp> w;
  w.reserve(sig.creators.size() + sig.annihilators.size());
  for (auto s : sig.creators) w.push_back({s, true});
  for (auto s : sig.annihilators) w.push_back({s, false});
  return w;
}

inline ModeOperator op_mul(const ModeOperator& a, const ModeOperator& b) {
  a.check(b);
  ModeOperator out(a.lattice());
  std::vector<LadderOp> w;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      w = word_of(sa);
      const auto wb = word_of(sb);
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_word(w, ca * cb);
    }
  }
  return out;
}

inline ModeOperator operator*(const ModeOperator& a, const ModeOperator& b) { return op_mul(a, b); }

inline ModeOperator commutator(const ModeOperator& a, const ModeOperator& b) {
  return op_mul(a, b) - op_mul(b, a);
}

inline ModeOperator anticommutator(const ModeOperator& a, const ModeOperator& b) {
  return op_mul(a, b) + op_mul(b, a);
}

/// Largest coefficient-wise |a - b|.
inline double max_abs_diff(const ModeOperator& a, const ModeOperator& b) {
  double worst = 0.0;
  const ModeOperator d = a - b;
  for (const auto& [_, c] : d.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

inline double hermiticity_residual(const ModeOperator& a) { return max_abs_diff(a, a.adjoint()); }

/// Vacuum expectation value: the c-number part of the normal-ordered form.
inline cplx vev(const ModeOperator& a) { return a.c_number(); }

inline FockVector apply(const ModeOperator& a, const FockVector& v) {
  if (!(a.lattice() == v.lattice())) throw LatticeMismatch();
  FockVector out(v.lattice(), v.prune_threshold());
  for (const auto& [sig, c] : a.terms()) {
    for (const auto& [key, amp] : v.terms()) {
      OccupationState state = key;
      double sign = 1.0;
      bool alive = true;
      for (auto it = sig.annihilators.rbegin(); alive && it != sig.annihilators.rend(); ++it)
        alive = annihilate_in_place(state, *it, sign);
      for (auto it = sig.creators.rbegin(); alive && it != sig.creators.rend(); ++it)
        alive = create_in_place(state, *it, sign);
      if (alive) out.add(state, sign * c * amp);
    }
  }
  return out;
}

inline cplx expectation(const FockVector& v, const ModeOperator& a) { return inner(v, apply(a, v)); }

}  // namespace psplit
