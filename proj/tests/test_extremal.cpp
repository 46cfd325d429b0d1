#include <cmath>
#include <random>

#include "entbound/extremal.hpp"
#include "entbound/states.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace entbound;

namespace {

const std::vector<int> kTwoQubits{2, 2};

void expect_product_invariants(const ProductState& ps, const Matrix& x) {
  for (const Vector& v : ps.local_vectors) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_NEAR(ps.global.norm(), 1.0, 1e-10);
  EXPECT_NEAR(ps.value, ps.global.dot(x * ps.global).real(), 1e-10);
}

Matrix random_observable(int d, std::mt19937_64& rng) {
  const Matrix h = entbound::testing::random_hermitian(d, rng);
  return h / hermitian_eigenvalues(h).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(BestProductState, ProductProjector) {
  Matrix x = Matrix::Zero(4, 4);
  x(0, 0) = 1.0;
  Rng rng = make_rng(1);
  const ProductState ps = best_product_state(x, kTwoQubits, {{0}, {1}}, OracleConfig{}, rng);
  EXPECT_NEAR(ps.value, 1.0, 1e-10);
  EXPECT_NEAR(std::abs(ps.local_vectors[0][0]), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(ps.local_vectors[1][0]), 1.0, 1e-6);
  expect_product_invariants(ps, x);
}

TEST(BestProductState, BellProjectorMatchesGrid) {
  const Matrix x = ghz(2).matrix();
  Rng rng = make_rng(2);
  const ProductState ps = best_product_state(x, kTwoQubits, {{0}, {1}}, OracleConfig{}, rng);
  EXPECT_NEAR(ps.value, 0.5, 1e-9);
  EXPECT_NEAR(ps.value, entbound::testing::two_qubit_product_grid_max(x), 1e-3);
  expect_product_invariants(ps, x);
}

TEST(BestProductState, SingleBlockGivesLargestEigenvalue) {
  std::mt19937_64 gen(3);
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = entbound::testing::random_hermitian(4, gen);
    const ProductState ps = best_product_state(x, kTwoQubits, {{0, 1}}, OracleConfig{}, rng);
    EXPECT_NEAR(ps.value, hermitian_eigenvalues(x)[3], 1e-10);
  }
}

TEST(BestProductState, RejectsEmptyPartitionAndBadConfig) {
  Rng rng = make_rng(4);
  const Matrix x = Matrix::Identity(4, 4);
  EXPECT_THROW(best_product_state(x, kTwoQubits, {}, OracleConfig{}, rng), std::invalid_argument);
  OracleConfig bad;
  bad.restarts = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(best_product_state(Matrix::Identity(3, 3), kTwoQubits, {{0}, {1}}, OracleConfig{}, rng),
               DimensionMismatch);
}

TEST(BestExtremePoint, GhzThreeBiseparable) {
  const Matrix x = ghz(3).matrix();
  const std::vector<int> dims{2, 2, 2};
  Rng rng = make_rng(5);
  const ProductState ps = best_extreme_point(x, dims, PartitionClass::bi_separable(), OracleConfig{}, rng);
  EXPECT_NEAR(ps.value, 0.5, 1e-9);
  expect_product_invariants(ps, x);
  // every bipartition gives the largest Schmidt weight of GHZ3, which is 1/2
  Vector psi = Vector::Zero(8);
  psi[0] = psi[7] = 1.0 / std::sqrt(2.0);
  const auto w = entbound::testing::schmidt_weights(psi, 2, 4);
  EXPECT_NEAR(*std::max_element(w.begin(), w.end()), 0.5, 1e-12);
  for (const Blocks& part : enumerate_bipartitions(3)) {
    const ProductState one = best_product_state(x, dims, part, OracleConfig{}, rng);
    EXPECT_NEAR(one.value, 0.5, 1e-9);
  }
}

TEST(BestExtremePoint, TwoPartyClassesCoincide) {
  std::mt19937_64 gen(6);
  const Matrix x = random_observable(4, gen);
  Rng r1 = make_rng(6), r2 = make_rng(6);
  const ProductState full = best_extreme_point(x, kTwoQubits, PartitionClass::fully_separable(), OracleConfig{}, r1);
  const ProductState bisep = best_extreme_point(x, kTwoQubits, PartitionClass::bi_separable(), OracleConfig{}, r2);
  EXPECT_EQ(full.value, bisep.value);
  EXPECT_EQ(full.global, bisep.global);
}

TEST(BestExtremePoint, WThreeFullySeparable) {
  const Matrix x = w_state(3).matrix();
  const std::vector<int> dims{2, 2, 2};
  Rng rng = make_rng(7);
  const ProductState ps = best_extreme_point(x, dims, PartitionClass::fully_separable(), OracleConfig{}, rng);
  const double grid = entbound::testing::w3_product_grid_max();
  EXPECT_NEAR(grid, 4.0 / 9.0, 1e-4);
  EXPECT_NEAR(ps.value, grid, 1e-4);
  EXPECT_NEAR(ps.value, 4.0 / 9.0, 1e-9);
}

TEST(Bipartitions, Enumeration) {
  const auto two = enumerate_bipartitions(2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0], (Blocks{{0}, {1}}));
  const auto three = enumerate_bipartitions(3);
  EXPECT_EQ(three, (std::vector<Blocks>{{{0}, {1, 2}}, {{1}, {0, 2}}, {{2}, {0, 1}}}));
  const auto four = enumerate_bipartitions(4);
  ASSERT_EQ(four.size(), 7u);
  EXPECT_EQ(four[4], (Blocks{{0, 1}, {2, 3}}));
  EXPECT_EQ(four[6], (Blocks{{0, 3}, {1, 2}}));
  EXPECT_EQ(enumerate_bipartitions(6).size(), 31u);
  EXPECT_THROW(enumerate_bipartitions(1), std::invalid_argument);
}

TEST(PartitionClass, ParseAndValidate) {
  EXPECT_EQ(PartitionClass::parse("full").kind(), PartitionClass::Kind::FullySeparable);
  EXPECT_EQ(PartitionClass::parse("bisep").kind(), PartitionClass::Kind::BiSeparable);
  const PartitionClass fixed = PartitionClass::parse("partition:12|3");
  EXPECT_EQ(fixed.blocks(), (Blocks{{0, 1}, {2}}));
  EXPECT_EQ(fixed.to_string(), "partition:12|3");
  EXPECT_NO_THROW(fixed.validate(3));
  EXPECT_THROW(fixed.validate(4), std::invalid_argument);
  EXPECT_EQ(PartitionClass::parse("partition:1,10|2,3,4,5,6,7,8,9").blocks()[0], (std::vector<int>{0, 9}));
  EXPECT_THROW(PartitionClass::parse("partition:12|2").validate(2), std::invalid_argument);
  EXPECT_THROW(PartitionClass::parse("partition:1|"), std::invalid_argument);
  EXPECT_THROW(PartitionClass::parse("triangle"), std::invalid_argument);
  EXPECT_THROW(PartitionClass::bi_separable().validate(1), std::invalid_argument);
  EXPECT_EQ(PartitionClass::fully_separable().partitions(3), (std::vector<Blocks>{{{0}, {1}, {2}}}));
  EXPECT_EQ(PartitionClass::bi_separable().partitions(3).size(), 3u);
}

TEST(PartitionLayout, AssembleFollowsBasisOrdering) {
  // blocks {2} and {1,3} on (2,3,2): party 1 is the most significant factor
  const PartitionLayout layout({2, 3, 2}, {{1}, {0, 2}});
  EXPECT_EQ(layout.block_dims(), (std::vector<int>{3, 4}));
  std::mt19937_64 gen(8);
  const Vector a = entbound::testing::random_ket(3, gen);
  const Vector bc = entbound::testing::random_ket(4, gen);
  const Vector global = layout.assemble({a, bc});
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 3; ++i2)
      for (int i3 = 0; i3 < 2; ++i3) {
        const cplx expected = a[i2] * bc[i1 * 2 + i3];
        EXPECT_NEAR(std::abs(global[(i1 * 3 + i2) * 2 + i3] - expected), 0.0, 1e-15);
      }
}

// ---------------------------------------------------------------------------
// Properties

TEST(OracleProperties, SweepsAreMonotone) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> dims = trial % 2 ? std::vector<int>{2, 3, 2} : std::vector<int>{3, 3};
    const Blocks blocks = trial % 2 ? Blocks{{0}, {1}, {2}} : Blocks{{0}, {1}};
    const PartitionLayout layout(dims, blocks);
    const Matrix x = random_observable(static_cast<int>(layout.dim()), gen);
    Rng rng = make_rng(trial);
    auto vectors = random_product_state(layout.block_dims(), rng);
    const Vector start = layout.assemble(vectors);
    std::vector<double> trace{start.dot(x * start).real()};
    const double final_value = see_saw_ascent(layout, x, vectors, 50, 1e-10, &trace);
    ASSERT_GT(trace.size(), 1u);
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-12);
    EXPECT_NEAR(final_value, trace.back(), 1e-12);
  }
}

TEST(OracleProperties, DominatesSampledProductStates) {
  std::mt19937_64 gen(11);
  const std::vector<int> dims{2, 2, 2};
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix x = random_observable(8, gen);
    Rng rng = make_rng(100 + trial);
    const ProductState best = best_extreme_point(x, dims, PartitionClass::fully_separable(), OracleConfig{}, rng);
    expect_product_invariants(best, x);
    const PartitionLayout layout(dims, {{0}, {1}, {2}});
    for (int s = 0; s < 1000; ++s) {
      const Vector v = layout.assemble(random_product_state(layout.block_dims(), rng));
      EXPECT_LE(v.dot(x * v).real(), best.value + 1e-9);
    }
  }
}

TEST(OracleProperties, TwoQubitGridEquivalence) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix x = random_observable(4, gen);
    Rng rng = make_rng(200 + trial);
    const ProductState ps = best_product_state(x, kTwoQubits, {{0}, {1}}, OracleConfig{}, rng);
    EXPECT_NEAR(ps.value, entbound::testing::two_qubit_product_grid_max(x), 1e-3);
  }
}

TEST(OracleProperties, RefinementMonotonicity) {
  std::mt19937_64 gen(13);
  const std::vector<int> dims{2, 2, 2};
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix x = random_observable(8, gen);
    Rng rng = make_rng(300 + trial);
    const double full = best_extreme_point(x, dims, PartitionClass::fully_separable(), OracleConfig{}, rng).value;
    const double bisep = best_extreme_point(x, dims, PartitionClass::bi_separable(), OracleConfig{}, rng).value;
    EXPECT_LE(full, bisep + 1e-9);
    EXPECT_LE(bisep, hermitian_eigenvalues(x)[7] + 1e-9);
  }
}

TEST(ExtremalOracle, WarmStartNeverLosesGround) {
  std::mt19937_64 gen(14);
  const std::vector<int> dims{2, 2, 2};
  const Matrix x = random_observable(8, gen);
  ExtremalOracle oracle(dims, PartitionClass::bi_separable(), OracleConfig{});
  Rng rng = make_rng(15);
  const double first = oracle(x, rng).value;
  for (int i = 0; i < 5; ++i) EXPECT_GE(oracle(x, rng).value, first - 1e-12);
  EXPECT_EQ(oracle.layouts().size(), 3u);
}
