#pragma once

// Fermionic Fock space over the lattice modes.
//
// Slot order is the single source of Jordan-Wigner sign truth:
//   electrons  j = -n_max ... +n_max  ->  slots 0 ... 2 n_max
//   positrons  j = -n_max ... +n_max  ->  slots 2 n_max + 1 ... 4 n_max + 1
// A creator on slot s picks up (-1)^(number of occupied slots below s).

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "psplit/lattice.hpp"

namespace psplit {

enum class Species { electron, positron };

inline constexpr int kMaxSlots = 256;

struct SlotIndex {
  Species species = Species::electron;
  int j = 0;

  int linear(const LatticeConfig& cfg) const {
    cfg.require(j);
    const int offset = species == Species::electron ? 0 : cfg.modes_per_species();
    return offset + (j + cfg.n_max);
  }

  static SlotIndex from_linear(int s, const LatticeConfig& cfg) {
    const int per = cfg.modes_per_species();
    if (s < 0 || s >= 2 * per) throw IndexError("slot " + std::to_string(s) + " out of range");
    return s < per ? SlotIndex{Species::electron, s - cfg.n_max}
                   : SlotIndex{Species::positron, s - per - cfg.n_max};
  }

  friend bool operator==(const SlotIndex&, const SlotIndex&) = default;
};

inline int slot_count(const LatticeConfig& cfg) { return 2 * cfg.modes_per_species(); }

inline SlotIndex electron(int j) { return {Species::electron, j}; }
inline SlotIndex positron(int j) { return {Species::positron, j}; }

/// Occupation bitstring over at most kMaxSlots slots.
class OccupationState {
 public:
  static constexpr int kWords = kMaxSlots / 64;

  bool test(int s) const { return (words_[s / 64] >> (s % 64)) & 1U; }
  void set(int s) { words_[s / 64] |= std::uint64_t{1} << (s % 64); }
  void clear(int s) { words_[s / 64] &= ~(std::uint64_t{1} << (s % 64)); }

  int count() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }

  /// Number of occupied slots with linear index strictly below s.
  int count_below(int s) const {
    int n = 0;
    const int full = s / 64;
    for (int w = 0; w < full; ++w) n += std::popcount(words_[w]);
    const int rem = s % 64;
    if (rem != 0) n += std::popcount(words_[full] & ((std::uint64_t{1} << rem) - 1));
    return n;
  }

  static OccupationState from_bits(std::uint64_t low_bits) {
    OccupationState o;
    o.words_[0] = low_bits;
    return o;
  }

  /// Slot 0 first, one character per slot.
  std::string to_string(int slots) const {
    std::string out(static_cast<std::size_t>(slots), '0');
    for (int s = 0; s < slots; ++s)
      if (test(s)) out[static_cast<std::size_t>(s)] = '1';
    return out;
  }

  auto operator<=>(const OccupationState&) const = default;

 private:
  std::array<std::uint64_t, kWords> words_{};
};

/// Sparse complex amplitudes over occupation states.
class FockVector {
 public:
  using Map = std::map<OccupationState, cplx>;

  explicit FockVector(const LatticeConfig& cfg, double prune = 0.0) : cfg_(cfg), prune_(prune) {
    if (slot_count(cfg) > kMaxSlots) throw ConfigError("lattice exceeds Fock slot capacity");
  }

  const LatticeConfig& lattice() const { return cfg_; }
  const Map& terms() const { return amps_; }
  std::size_t size() const { return amps_.size(); }
  bool is_zero() const { return amps_.empty(); }
  double prune_threshold() const { return prune_; }

  cplx amplitude(const OccupationState& s) const {
    auto it = amps_.find(s);
    return it == amps_.end() ? cplx{} : it->second;
  }

  void add(const OccupationState& s, cplx amp) {
    auto [it, inserted] = amps_.try_emplace(s, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) <= prune_) amps_.erase(it);
  }

  double norm2() const {
    double n = 0.0;
    for (const auto& [_, a] : amps_) n += std::norm(a);
    return n;
  }

  FockVector& operator+=(const FockVector& o) {
    check(o);
    for (const auto& [s, a] : o.amps_) add(s, a);
    return *this;
  }

  FockVector& operator-=(const FockVector& o) {
    check(o);
    for (const auto& [s, a] : o.amps_) add(s, -a);
    return *this;
  }

  FockVector& operator*=(cplx c) {
    if (c == cplx{}) {
      amps_.clear();
      return *this;
    }
    for (auto& [_, a] : amps_) a *= c;
    return *this;
  }

  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(cplx c, FockVector a) { return a *= c; }

  void check(const FockVector& o) const {
    if (!(cfg_ == o.cfg_)) throw LatticeMismatch();
  }

 private:
  LatticeConfig cfg_;
  double prune_;
  Map amps_;
};

inline FockVector basis_vector(const LatticeConfig& cfg, const OccupationState& s, cplx amp = 1.0) {
  FockVector v(cfg);
  v.add(s, amp);
  return v;
}

inline FockVector vacuum(const LatticeConfig& cfg) { return basis_vector(cfg, OccupationState{}); }

namespace detail {

inline double jw_sign(const OccupationState& s, int slot) {
  return (s.count_below(slot) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace detail

/// Raw-slot creator. Returns false (term vanishes) when the slot is occupied.
inline bool create_in_place(OccupationState& s, int slot, double& sign) {
  if (s.test(slot)) return false;
  sign *= detail::jw_sign(s, slot);
  s.set(slot);
  return true;
}

inline bool annihilate_in_place(OccupationState& s, int slot, double& sign) {
  if (!s.test(slot)) return false;
  sign *= detail::jw_sign(s, slot);
  s.clear(slot);
  return true;
}

inline FockVector apply_create(int slot, const FockVector& v) {
  FockVector out(v.lattice(), v.prune_threshold());
  for (const auto& [key, a] : v.terms()) {
    OccupationState s = key;
    double sign = 1.0;
    if (create_in_place(s, slot, sign)) out.add(s, sign * a);
  }
  return out;
}

inline FockVector apply_annihilate(int slot, const FockVector& v) {
  FockVector out(v.lattice(), v.prune_threshold());
  for (const auto& [key, a] : v.terms()) {
    OccupationState s = key;
    double sign = 1.0;
    if (annihilate_in_place(s, slot, sign)) out.add(s, sign * a);
  }
  return out;
}

inline FockVector apply_create(SlotIndex slot, const FockVector& v) {
  return apply_create(slot.linear(v.lattice()), v);
}

inline FockVector apply_annihilate(SlotIndex slot, const FockVector& v) {
  return apply_annihilate(slot.linear(v.lattice()), v);
}

/// <v|w>, conjugate-linear in v.
inline cplx inner(const FockVector& v, const FockVector& w) {
  v.check(w);
  const auto& small = v.size() <= w.size() ? v.terms() : w.terms();
  const auto& large = v.size() <= w.size() ? w.terms() : v.terms();
  const bool v_small = v.size() <= w.size();
  cplx acc{};
  for (const auto& [s, a] : small) {
    auto it = large.find(s);
    if (it == large.end()) continue;
    acc += v_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return acc;
}

}  // namespace psplit
