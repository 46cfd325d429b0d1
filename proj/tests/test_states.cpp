#include <cmath>
#include <random>

#include "entbound/states.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace entbound;

namespace {

void expect_valid(const DensityMatrix& rho) {
  EXPECT_NO_THROW(DensityMatrix::validate(rho.matrix(), rho.local_dims()));
}

double min_eigenvalue(const Matrix& m) { return hermitian_eigenvalues(m)[0]; }

int numerical_rank(const Matrix& m, double tol = 1e-10) {
  const RealVector ev = hermitian_eigenvalues(m);
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) r += ev[i] > tol;
  return r;
}

// Reduced state of the first qubit of an n-qubit density matrix.
Matrix first_qubit_marginal(const Matrix& rho, int n) {
  const long rest = 1L << (n - 1);
  Matrix out = Matrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (long k = 0; k < rest; ++k) out(i, j) += rho(i * rest + k, j * rest + k);
  return out;
}

}  // namespace

TEST(Ghz, BellCorners) {
  const DensityMatrix bell = ghz(2);
  ASSERT_EQ(bell.dim(), 4);
  EXPECT_EQ(bell.local_dims(), (std::vector<int>{2, 2}));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      EXPECT_NEAR(std::abs(bell.matrix()(i, j)), corner ? 0.5 : 0.0, 1e-15);
    }
}

TEST(Ghz, ThreeQubitSupport) {
  const Matrix m = ghz(3).matrix();
  ASSERT_EQ(m.rows(), 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const bool on = (i == 0 || i == 7) && (j == 0 || j == 7);
      EXPECT_NEAR(std::abs(m(i, j)), on ? 0.5 : 0.0, 1e-15);
    }
}

TEST(Ghz, RejectsTooFewParties) {
  EXPECT_THROW(ghz(1), std::invalid_argument);
  EXPECT_THROW(w_state(0), std::invalid_argument);
}

TEST(WState, TwoQubits) {
  const Matrix m = w_state(2).matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool on = (i == 1 || i == 2) && (j == 1 || j == 2);
      EXPECT_NEAR(std::abs(m(i, j)), on ? 0.5 : 0.0, 1e-15);
    }
}

TEST(WState, ThreeQubitAmplitudes) {
  const Matrix m = w_state(3).matrix();
  for (int i : {1, 2, 4}) EXPECT_NEAR(m(i, i).real(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(m(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(m(7, 7).real(), 0.0, 1e-15);
}

TEST(PureFamilies, AreValidIdempotentProjectors) {
  for (int n = 2; n <= 6; ++n) {
    for (const DensityMatrix& rho : {ghz(n), w_state(n)}) {
      expect_valid(rho);
      const Matrix& m = rho.matrix();
      EXPECT_LE((m * m - m).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR((m * m).trace().real(), 1.0, 1e-12);
    }
  }
}

TEST(WState, SingleQubitMarginal) {
  for (int n = 2; n <= 6; ++n) {
    const Matrix red = first_qubit_marginal(w_state(n).matrix(), n);
    EXPECT_NEAR(red(0, 0).real(), (n - 1.0) / n, 1e-12);
    EXPECT_NEAR(red(1, 1).real(), 1.0 / n, 1e-12);
    EXPECT_NEAR(std::abs(red(0, 1)), 0.0, 1e-12);
  }
}

TEST(Horodecki, EntriesAtHalf) {
  const DensityMatrix rho = horodecki(0.5);
  EXPECT_EQ(rho.local_dims(), (std::vector<int>{3, 3}));
  EXPECT_NEAR(rho.matrix()(6, 6).real(), 0.15, 1e-15);
  EXPECT_NEAR(rho.matrix()(8, 6).real(), std::sqrt(0.75) / 10.0, 1e-15);
  EXPECT_NEAR(rho.matrix()(6, 8).real(), std::sqrt(0.75) / 10.0, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 4).real(), 0.1, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 8).real(), 0.1, 1e-15);
}

TEST(Horodecki, ValidAndPptAcrossRange) {
  for (int k = 1; k <= 9; ++k) {
    const double a = 0.1 * k;
    const DensityMatrix rho = horodecki(a);
    expect_valid(rho);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_GE(entbound::testing::min_partial_transpose_eigenvalue(rho.matrix(), 3, 3), -1e-10)
        << "a=" << a;
    EXPECT_GE(min_eigenvalue(partial_transpose(rho.matrix(), 3, 3)), -1e-10);
  }
}

TEST(Horodecki, EntangledByRealignment) {
  for (double a : {0.2, 0.5, 0.8}) {
    EXPECT_GT(entbound::testing::realignment_norm(horodecki(a).matrix(), 3, 3), 1.0) << a;
  }
}

TEST(Horodecki, RejectsParameterOutsideOpenInterval) {
  EXPECT_THROW(horodecki(0.0), std::invalid_argument);
  EXPECT_THROW(horodecki(1.0), std::invalid_argument);
  EXPECT_THROW(horodecki(-0.3), std::invalid_argument);
}

TEST(Chessboard, AllOnes) {
  const ChessboardParams p{1, 1, 1, 1, 1, 1};
  EXPECT_NEAR(std::abs(p.s() - cplx(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.t() - cplx(1)), 0.0, 1e-15);
  Vector v1(9);
  v1 << 1, 0, 1, 0, 1, 0, 0, 0, 0;
  EXPECT_LE((p.kets()[0] - v1).norm(), 1e-15);
  EXPECT_NEAR(p.normalization(), 1.0 / 12.0, 1e-15);
  const DensityMatrix rho = chessboard(p);
  expect_valid(rho);
  EXPECT_LE(numerical_rank(rho.matrix()), 4);
}

TEST(Chessboard, RejectsZeroDenominators) {
  EXPECT_THROW(chessboard({1, 1, 1, 1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(chessboard({1, 1, 1, 1, 1, 0}), std::invalid_argument);
}

TEST(Chessboard, RandomDrawsMatchIndependentGram) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double m = 0.01 + u(rng), n = 0.01 + u(rng);
    const DensityMatrix rho = chessboard({a, b, c, d, m, n});
    expect_valid(rho);
    EXPECT_GE(min_eigenvalue(rho.matrix()), -1e-12);
    EXPECT_LE(numerical_rank(rho.matrix()), 4);

    // amplitudes written out from the definition, real parameters
    const double s = a * c / n, t = a * d / m;
    const double kets[4][9] = {{m, 0, s, 0, n, 0, 0, 0, 0},
                               {0, a, 0, b, 0, c, 0, 0, 0},
                               {n, 0, 0, 0, -m, 0, t, 0, 0},
                               {0, b, 0, -a, 0, 0, 0, d, 0}};
    double norm = 0.0;
    for (const auto& k : kets)
      for (double x : k) norm += x * x;
    double worst = 0.0;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        double g = 0.0;
        for (const auto& k : kets) g += k[i] * k[j];
        worst = std::max(worst, std::abs(rho.matrix()(i, j) - g / norm));
      }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Chessboard, ComplexParametersStayValid) {
  const ChessboardParams p{cplx(0.3, 0.4), cplx(0.1, -0.7), cplx(0.5, 0.5), cplx(-0.2, 0.9),
                           cplx(0.6, 0.1), cplx(0.2, -0.3)};
  const DensityMatrix rho = chessboard(p);
  expect_valid(rho);
  EXPECT_LE(numerical_rank(rho.matrix()), 4);
}

TEST(WhiteNoise, Examples) {
  const DensityMatrix bell = ghz(2);
  EXPECT_LE((mix_white_noise(bell, 1.0).matrix() - bell.matrix()).norm(), 1e-15);
  EXPECT_LE((mix_white_noise(bell, 0.0).matrix() - Matrix::Identity(4, 4) / 4.0).norm(), 1e-15);
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityMatrix mixed = mix_white_noise(DensityMatrix(zero, {2}), 0.5);
  EXPECT_NEAR(mixed.matrix()(0, 0).real(), 0.75, 1e-15);
  EXPECT_NEAR(mixed.matrix()(1, 1).real(), 0.25, 1e-15);
  EXPECT_THROW(mix_white_noise(bell, 1.5), std::invalid_argument);
  EXPECT_THROW(mix_white_noise(bell, -0.1), std::invalid_argument);
}

TEST(WhiteNoise, AffineInP) {
  const DensityMatrix rho = w_state(3);
  for (double p0 : {0.0, 0.2, 0.7}) {
    for (double p1 : {0.1, 0.5, 1.0}) {
      const Matrix mid = mix_white_noise(rho, 0.5 * (p0 + p1)).matrix();
      const Matrix avg = 0.5 * (mix_white_noise(rho, p0).matrix() + mix_white_noise(rho, p1).matrix());
      EXPECT_LE((mid - avg).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  expect_valid(mix_white_noise(horodecki(0.3), 0.4));
}

TEST(RandomProductState, UnitNormAndDeterministic) {
  const std::vector<int> dims{2, 2};
  Rng r1 = make_rng(42), r2 = make_rng(42), r3 = make_rng(43);
  const auto a = random_product_state(dims, r1);
  const auto b = random_product_state(dims, r2);
  const auto c = random_product_state(dims, r3);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_NEAR(a[j].norm(), 1.0, 1e-12);
    EXPECT_EQ(a[j], b[j]);
    EXPECT_LT(std::abs(a[j].dot(c[j])), 1.0 - 1e-9);
  }
  const std::vector<int> single{9};
  const auto one = random_product_state(single, r1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 9);
  EXPECT_NEAR(one[0].norm(), 1.0, 1e-12);
}

TEST(RandomProductState, SplitSeedsGiveDistinctStreams) {
  EXPECT_NE(split_seed(1, 0), split_seed(1, 1));
  EXPECT_NE(split_seed(1, 0), split_seed(2, 0));
  EXPECT_EQ(split_seed(7, 3), split_seed(7, 3));
}
