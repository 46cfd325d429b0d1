#include "entbound/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace entbound {

namespace {

void require_parties(int n, const char* family) {
  if (n < 2) {
    throw std::invalid_argument(std::string(family) + " state needs at least 2 parties, got " +
                                std::to_string(n));
  }
  if (n > 20) throw std::invalid_argument(std::string(family) + " state: too many qubits");
}

}  // namespace

DensityMatrix pure_state(const Vector& psi, std::vector<int> local_dims) {
  return DensityMatrix::trusted(psi * psi.adjoint(), std::move(local_dims));
}

DensityMatrix maximally_mixed(std::vector<int> local_dims) {
  long d = 1;
  for (int k : local_dims) d *= k;
  return DensityMatrix::trusted(Matrix::Identity(d, d) / static_cast<double>(d),
                                std::move(local_dims));
}

DensityMatrix ghz(int n_parties) {
  require_parties(n_parties, "GHZ");
  const long d = 1L << n_parties;
  Vector psi = Vector::Zero(d);
  psi[0] = psi[d - 1] = 1.0 / std::sqrt(2.0);
  return pure_state(psi, std::vector<int>(n_parties, 2));
}

DensityMatrix w_state(int n_parties) {
  require_parties(n_parties, "W");
  const long d = 1L << n_parties;
  Vector psi = Vector::Zero(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_parties));
  for (int q = 0; q < n_parties; ++q) psi[1L << q] = amp;
  return pure_state(psi, std::vector<int>(n_parties, 2));
}

DensityMatrix horodecki(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("horodecki parameter must lie in (0, 1), got " + std::to_string(a));
  }
  Matrix m = Matrix::Zero(9, 9);
  for (int i : {0, 1, 2, 3, 4, 5, 7}) m(i, i) = a;
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8}) m(i, j) = a;
  m(6, 6) = m(8, 8) = (1.0 + a) / 2.0;
  m(6, 8) = m(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
  m /= 8.0 * a + 1.0;
  return DensityMatrix(std::move(m), {3, 3});
}

cplx ChessboardParams::s() const { return a * std::conj(c) / std::conj(n); }
cplx ChessboardParams::t() const { return a * std::conj(d) / std::conj(m); }

std::vector<Vector> ChessboardParams::kets() const {
  std::vector<Vector> v(4, Vector::Zero(9));
  v[0] << m, 0, s(), 0, n, 0, 0, 0, 0;
  v[1] << 0, a, 0, b, 0, c, 0, 0, 0;
  v[2] << std::conj(n), 0, 0, 0, -std::conj(m), 0, t(), 0, 0;
  v[3] << 0, std::conj(b), 0, -std::conj(a), 0, 0, 0, d, 0;
  return v;
}

double ChessboardParams::normalization() const {
  double total = 0.0;
  for (const Vector& v : kets()) total += v.squaredNorm();
  return 1.0 / total;
}

DensityMatrix chessboard(const ChessboardParams& params) {
  if (std::abs(params.m) == 0.0 || std::abs(params.n) == 0.0) {
    throw std::invalid_argument("chessboard parameters m and n must be nonzero");
  }
  const double norm = params.normalization();
  if (!std::isfinite(norm) || norm <= 0.0) {
    throw std::invalid_argument("chessboard normalization is not positive and finite");
  }
  Matrix rho = Matrix::Zero(9, 9);
  for (const Vector& v : params.kets()) rho += v * v.adjoint();
  rho *= norm;
  return DensityMatrix(std::move(rho), {3, 3});
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("noise parameter p must lie in [0, 1], got " + std::to_string(p));
  }
  const long d = rho.dim();
  Matrix mixed = p * rho.matrix() + (1.0 - p) / static_cast<double>(d) * Matrix::Identity(d, d);
  return DensityMatrix::trusted(std::move(mixed), rho.local_dims());
}

Vector random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = cplx(re, im);
  }
  return v / v.norm();
}

std::vector<Vector> random_product_state(std::span<const int> block_dims, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(block_dims.size());
  for (int d : block_dims) {
    if (d < 1) throw std::invalid_argument("block dimension must be >= 1");
    out.push_back(random_unit_vector(d, rng));
  }
  return out;
}

}  // namespace entbound
