// Constructors for the benchmark state families and white-noise mixing.

#pragma once

#include <span>
#include <vector>

#include "entbound/qmatrix.hpp"
#include "entbound/rng.hpp"

namespace entbound {

/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
DensityMatrix ghz(int n_parties);

/// Equal superposition of the n weight-one basis strings.
DensityMatrix w_state(int n_parties);

/// P. Horodecki's 3x3 PPT entangled family, 0 < a < 1.
DensityMatrix horodecki(double a);

struct ChessboardParams {
  cplx a, b, c, d, m, n;

  cplx s() const;  // a c* / n*
  cplx t() const;  // a d* / m*
  /// The four unnormalized 9-amplitude kets V1..V4.
  std::vector<Vector> kets() const;
  /// 1 / sum_j <V_j|V_j>.
  double normalization() const;
};

/// N sum_j |V_j><V_j| on 3x3. Throws std::invalid_argument if m or n is zero.
DensityMatrix chessboard(const ChessboardParams& params);

/// p * rho + (1 - p) * 1/d. Throws std::invalid_argument unless 0 <= p <= 1.
DensityMatrix mix_white_noise(const DensityMatrix& rho, double p);

/// Rank-one density matrix |psi><psi| of a unit vector.
DensityMatrix pure_state(const Vector& psi, std::vector<int> local_dims);

/// 1/d on the given factors.
DensityMatrix maximally_mixed(std::vector<int> local_dims);

/// Haar-random unit vector (normalized complex Gaussian).
Vector random_unit_vector(int dim, Rng& rng);

/// One Haar-random unit vector per block.
std::vector<Vector> random_product_state(std::span<const int> block_dims, Rng& rng);

}  // namespace entbound
