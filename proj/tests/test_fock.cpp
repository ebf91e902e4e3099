#include <catch_amalgamated.hpp>

#include <random>

#include "psplit/checks.hpp"
#include "psplit/fock.hpp"

using namespace psplit;

namespace {

const LatticeConfig kSmall{1.0, 1.0, 1};

FockVector random_vector(const LatticeConfig& cfg, std::mt19937& rng, int entries) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << slot_count(cfg)) - 1);
  std::normal_distribution<double> amp;
  FockVector v(cfg);
  for (int k = 0; k < entries; ++k) v.add(OccupationState::from_bits(bits(rng)), {amp(rng), amp(rng)});
  return v;
}

// Independent sign oracle: walk the slots below by hand.
double manual_sign(std::uint64_t bits, int slot) {
  int below = 0;
  for (int s = 0; s < slot; ++s) below += (bits >> s) & 1U;
  return below % 2 ? -1.0 : 1.0;
}

}  // namespace

TEST_CASE("slot layout") {
  const LatticeConfig cfg{1.0, 1.0, 2};
  CHECK(slot_count(cfg) == 10);
  CHECK(electron(-2).linear(cfg) == 0);
  CHECK(electron(2).linear(cfg) == 4);
  CHECK(positron(-2).linear(cfg) == 5);
  CHECK(positron(2).linear(cfg) == 9);
  for (int s = 0; s < 10; ++s) CHECK(SlotIndex::from_linear(s, cfg).linear(cfg) == s);
  CHECK_THROWS_AS(electron(3).linear(cfg), IndexError);
}

TEST_CASE("vacuum") {
  const FockVector vac = vacuum(kSmall);
  CHECK(vac.size() == 1);
  CHECK(vac.terms().begin()->first.to_string(slot_count(kSmall)) == "000000");
  CHECK(vac.norm2() == 1.0);
  CHECK(inner(vac, vac) == cplx(1.0));
  for (int s = 0; s < slot_count(kSmall); ++s) CHECK(apply_annihilate(s, vac).is_zero());
  CHECK(apply_annihilate(electron(0), vac).is_zero());
  CHECK(apply_annihilate(positron(1), vac).is_zero());
}

TEST_CASE("creation signs and exclusion") {
  const FockVector vac = vacuum(kSmall);
  const int e0 = electron(0).linear(kSmall);
  const int e1 = electron(1).linear(kSmall);

  const FockVector one = apply_create(0, vac);
  CHECK(one.amplitude(OccupationState::from_bits(1)) == cplx(1.0));
  CHECK(apply_create(0, one).is_zero());

  const FockVector ab = apply_create(e1, apply_create(e0, vac));
  const FockVector ba = apply_create(e0, apply_create(e1, vac));
  const auto both = OccupationState::from_bits((1U << e0) | (1U << e1));
  CHECK(ab.amplitude(both) == -ba.amplitude(both));
  CHECK(std::abs(ab.amplitude(both)) == 1.0);

  CHECK(inner(vac, apply_create(electron(0), vac)) == cplx{});
  const FockVector back = apply_annihilate(electron(0), apply_create(electron(0), vac));
  CHECK(inner(back, vac) == cplx(1.0));
  CHECK(back.size() == 1);
}

TEST_CASE("Jordan-Wigner sign matches manual count on every basis state") {
  const LatticeConfig cfg{1.0, 1.0, 2};
  const int slots = slot_count(cfg);
  for (std::uint64_t bits = 0; bits < (1U << slots); ++bits) {
    const FockVector v = basis_vector(cfg, OccupationState::from_bits(bits));
    for (int s = 0; s < slots; ++s) {
      const bool occupied = (bits >> s) & 1U;
      const FockVector c = apply_create(s, v);
      const FockVector a = apply_annihilate(s, v);
      if (occupied) {
        CHECK(c.is_zero());
        REQUIRE(a.size() == 1);
        CHECK(a.amplitude(OccupationState::from_bits(bits & ~(1U << s))).real() == manual_sign(bits, s));
      } else {
        CHECK(a.is_zero());
        REQUIRE(c.size() == 1);
        CHECK(c.amplitude(OccupationState::from_bits(bits | (1U << s))).real() == manual_sign(bits, s));
      }
    }
  }
}

TEST_CASE("adjointness of create and annihilate on random vectors") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FockVector v = random_vector(kSmall, rng, 12);
    const FockVector w = random_vector(kSmall, rng, 12);
    for (int s = 0; s < slot_count(kSmall); ++s) {
      const cplx lhs = inner(w, apply_create(s, v));
      const cplx rhs = std::conj(inner(v, apply_annihilate(s, w)));
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK(std::abs(inner(v, w) - std::conj(inner(w, v))) < 1e-12);
    CHECK(inner(v, v).imag() == 0.0);
    CHECK(inner(v, v).real() >= 0.0);
  }
}

TEST_CASE("number operator is a projector on basis states") {
  const LatticeConfig cfg{1.0, 1.0, 2};
  const int slots = slot_count(cfg);
  for (std::uint64_t bits = 0; bits < (1U << slots); bits += 7) {
    const FockVector v = basis_vector(cfg, OccupationState::from_bits(bits));
    for (int s = 0; s < slots; ++s) {
      const FockVector n = apply_create(s, apply_annihilate(s, v));
      const cplx eig = inner(v, n);
      CHECK((eig == cplx(0.0) || eig == cplx(1.0)));
      CHECK(eig.real() == static_cast<double>((bits >> s) & 1U));
    }
  }
}

TEST_CASE("CAR suite at n_max = 1 and 2") {
  CHECK(car_suite_residual(kSmall) == 0.0);
  CHECK(car_suite_residual(LatticeConfig{1.0, 1.0, 2}) == 0.0);
}

TEST_CASE("lattice mismatch is rejected") {
  const FockVector a = vacuum(LatticeConfig{1.0, 1.0, 1});
  const FockVector b = vacuum(LatticeConfig{1.0, 1.0, 2});
  CHECK_THROWS_AS(inner(a, b), LatticeMismatch);
  FockVector c = a;
  CHECK_THROWS_AS(c += b, LatticeMismatch);
}

TEST_CASE("wide lattices use multi-word bitstrings") {
  const LatticeConfig cfg{1.0, 1.0, 60};
  CHECK(slot_count(cfg) == 242);
  FockVector v = vacuum(cfg);
  v = apply_create(positron(60), v);
  v = apply_create(electron(-60), v);
  v = apply_create(positron(0), v);
  // electron(-60) is slot 0 and sits below both positrons: one transposition.
  REQUIRE(v.size() == 1);
  CHECK(v.terms().begin()->second == cplx(-1.0));
  CHECK(v.terms().begin()->first.count() == 3);
  CHECK(v.terms().begin()->first.count_below(positron(60).linear(cfg)) == 2);
}
