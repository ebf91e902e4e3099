#include <catch_amalgamated.hpp>

#include <random>

#include "psplit/mode_operator.hpp"

using namespace psplit;

namespace {

const LatticeConfig kCfg{1.0, 1.0, 1};
constexpr int kSlots = 6;
constexpr int kDim = 1 << kSlots;

using Dense = std::vector<std::vector<cplx>>;

Dense zeros() { return Dense(kDim, std::vector<cplx>(kDim)); }

// Dense ladder matrices built straight from the bit rules, independent of the
// sparse machinery.
Dense ladder(int slot, bool dagger) {
  Dense m = zeros();
  for (int col = 0; col < kDim; ++col) {
    const bool occ = (col >> slot) & 1;
    if (occ == dagger) continue;
    int below = 0;
    for (int s = 0; s < slot; ++s) below += (col >> s) & 1;
    m[static_cast<std::size_t>(col ^ (1 << slot))][static_cast<std::size_t>(col)] = below % 2 ? -1.0 : 1.0;
  }
  return m;
}

Dense matmul(const Dense& a, const Dense& b) {
  Dense r = zeros();
  for (int i = 0; i < kDim; ++i)
    for (int k = 0; k < kDim; ++k) {
      if (a[i][k] == cplx{}) continue;
      for (int j = 0; j < kDim; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

Dense dense_of_word(const std::vector<LadderOp>& w, cplx c) {
  Dense m = zeros();
  for (int i = 0; i < kDim; ++i) m[i][i] = c;
  for (auto it = w.rbegin(); it != w.rend(); ++it) m = matmul(ladder(it->slot, it->dagger), m);
  return m;
}

Dense dense_of(const ModeOperator& op) {
  Dense m = zeros();
  for (const auto& [sig, c] : op.terms()) {
    const Dense t = dense_of_word(word_of(sig), c);
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) m[i][j] += t[i][j];
  }
  return m;
}

// Same operator, reconstructed column by column through apply().
Dense dense_by_apply(const ModeOperator& op) {
  Dense m = zeros();
  for (int col = 0; col < kDim; ++col) {
    const FockVector v = apply(op, basis_vector(kCfg, OccupationState::from_bits(static_cast<std::uint64_t>(col))));
    for (const auto& [s, a] : v.terms()) {
      for (int row = 0; row < kDim; ++row)
        if (s == OccupationState::from_bits(static_cast<std::uint64_t>(row))) m[row][col] = a;
    }
  }
  return m;
}

double dense_diff(const Dense& a, const Dense& b) {
  double worst = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

ModeOperator random_bilinear(std::mt19937& rng) {
  std::uniform_int_distribution<int> slot(0, kSlots - 1);
  std::uniform_int_distribution<int> kind(0, 3);
  std::normal_distribution<double> amp;
  ModeOperator op(kCfg);
  for (int k = 0; k < 6; ++k) {
    const int s = slot(rng);
    const int t = slot(rng);
    const int which = kind(rng);
    const std::vector<LadderOp> w = {LadderOp{static_cast<std::uint16_t>(s), which != 1},
                                     LadderOp{static_cast<std::uint16_t>(t), which == 2}};
    op.add_word(w, {amp(rng), amp(rng)});
  }
  op += ModeOperator::scalar(kCfg, {amp(rng), 0.0});
  return op;
}

}  // namespace

TEST_CASE("canonical storage") {
  const LadderOp ba[] = {cr(3), cr(1)};
  const ModeOperator op = ModeOperator::word(kCfg, ba);
  REQUIRE(op.size() == 1);
  CHECK(op.terms().begin()->first.creators == std::vector<std::uint16_t>{1, 3});
  CHECK(op.terms().begin()->second == cplx(-1.0));

  const LadderOp aa[] = {an(1), an(4)};
  const ModeOperator ann = ModeOperator::word(kCfg, aa);
  CHECK(ann.terms().begin()->first.annihilators == std::vector<std::uint16_t>{4, 1});
  CHECK(ann.terms().begin()->second == cplx(-1.0));

  const LadderOp dup[] = {cr(2), cr(2)};
  CHECK(ModeOperator::word(kCfg, dup).is_zero());
}

TEST_CASE("CAR swap produces the c-number") {
  const LadderOp w[] = {an(2), cr(2)};
  const ModeOperator op = ModeOperator::word(kCfg, w);
  CHECK(op.c_number() == cplx(1.0));
  CHECK(op.coefficient(Signature{{2}, {2}}) == cplx(-1.0));
  CHECK(op.size() == 2);
  CHECK(vev(ModeOperator::number(kCfg, electron(0))) == cplx{});
  const LadderOp other[] = {an(2), cr(4)};
  CHECK(vev(ModeOperator::word(kCfg, other)) == cplx{});
}

TEST_CASE("commutator basics") {
  std::mt19937 rng(3);
  const ModeOperator a = random_bilinear(rng);
  CHECK(commutator(a, a).is_zero());
  const ModeOperator n = ModeOperator::number(kCfg, positron(1));
  const ModeOperator c = ModeOperator::creator(kCfg, positron(1));
  CHECK(max_abs_diff(commutator(n, c), c) == 0.0);
  const ModeOperator b = random_bilinear(rng);
  CHECK(max_abs_diff(commutator(a, b), -commutator(b, a)) < 1e-14);
  CHECK(commutator(a, b).c_number() != cplx{});  // bilinears can leave a Schwinger-type constant
}

TEST_CASE("products agree with dense matrices on all basis states") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const ModeOperator a = random_bilinear(rng);
    const ModeOperator b = random_bilinear(rng);
    const ModeOperator c = random_bilinear(rng);
    const Dense da = dense_of(a);
    const Dense db = dense_of(b);
    const Dense dc = dense_of(c);

    CHECK(dense_diff(dense_by_apply(a), da) < 1e-12);
    CHECK(dense_diff(dense_of(op_mul(a, b)), matmul(da, db)) < 1e-12);
    CHECK(dense_diff(dense_by_apply(op_mul(a, b)), matmul(da, db)) < 1e-12);

    const ModeOperator left = op_mul(op_mul(a, b), c);
    const ModeOperator right = op_mul(a, op_mul(b, c));
    CHECK(max_abs_diff(left, right) < 1e-12);
    CHECK(dense_diff(dense_of(left), matmul(matmul(da, db), dc)) < 1e-11);
  }
}

TEST_CASE("adjoint matches the dense conjugate transpose") {
  std::mt19937 rng(5);
  const ModeOperator a = op_mul(random_bilinear(rng), random_bilinear(rng));
  const Dense d = dense_of(a);
  const Dense dag = dense_of(a.adjoint());
  double worst = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) worst = std::max(worst, std::abs(dag[i][j] - std::conj(d[j][i])));
  CHECK(worst < 1e-12);
}

TEST_CASE("expectation on the vacuum equals the c-number") {
  std::mt19937 rng(23);
  const FockVector vac = vacuum(kCfg);
  for (int trial = 0; trial < 10; ++trial) {
    const ModeOperator a = op_mul(random_bilinear(rng), random_bilinear(rng));
    CHECK(std::abs(expectation(vac, a) - vev(a)) < 1e-12);
  }
}

TEST_CASE("operator lattice mismatch") {
  const ModeOperator a(kCfg);
  const ModeOperator b(LatticeConfig{1.0, 1.0, 2});
  CHECK_THROWS_AS(op_mul(a, b), LatticeMismatch);
  CHECK_THROWS_AS(commutator(a, b), LatticeMismatch);
  CHECK_THROWS_AS(apply(a, vacuum(LatticeConfig{1.0, 1.0, 2})), LatticeMismatch);
}
