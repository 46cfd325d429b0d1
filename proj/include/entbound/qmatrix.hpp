// Dense Hermitian linear algebra and the two state distances used by the
// solver: squared Bures metric and quantum relative entropy (base 2).

#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entbound {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance used for every DensityMatrix invariant.
inline constexpr double kStateTol = 1e-10;

/// Eigenvalues of a target state below this are treated as exact zeros when
/// forming its square root on the support. Eigensolver noise on a rank
/// deficient matrix sits around d * 1e-16.
inline constexpr double kRankCutoff = 1e-13;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, long lhs, long rhs);
};

/// Raised when a matrix fails one of the density-matrix invariants.
/// `invariant()` is one of "hermiticity", "trace", "psd", "local_dims".
class InvalidState : public std::invalid_argument {
 public:
  InvalidState(std::string invariant, double deviation, const std::string& detail = {});
  const std::string& invariant() const { return invariant_; }
  double deviation() const { return deviation_; }

 private:
  std::string invariant_;
  double deviation_;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MeasureKind { BuresSquared, RelativeEntropy };

std::string to_string(MeasureKind kind);
/// Accepts "bures2" and "relent".
MeasureKind parse_measure(const std::string& name);

/// Hermitian, PSD, unit-trace matrix together with its tensor factor
/// dimensions. Party 1 is the most significant factor.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Validates every invariant; throws InvalidState naming the first violation.
  DensityMatrix(Matrix entries, std::vector<int> local_dims);

  /// Skips validation. For results of operations that preserve the
  /// invariants by construction (convex combinations, projectors).
  static DensityMatrix trusted(Matrix entries, std::vector<int> local_dims);

  const Matrix& matrix() const { return entries_; }
  const std::vector<int>& local_dims() const { return local_dims_; }
  long dim() const { return entries_.rows(); }
  int parties() const { return static_cast<int>(local_dims_.size()); }

  /// Checks invariants without constructing; throws InvalidState.
  static void validate(const Matrix& entries, const std::vector<int>& local_dims);

 private:
  Matrix entries_;
  std::vector<int> local_dims_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns
};

/// (M + M^dagger) / 2.
Matrix hermitize(const Matrix& m);

/// Eigendecomposition of the hermitized input. Throws EigenSolverError on
/// non-convergence.
SpectralDecomposition hermitian_eig(const Matrix& m);

/// Eigenvalues only, ascending.
RealVector hermitian_eigenvalues(const Matrix& m);

/// PSD square root. Eigenvalues in [-1e-10, 0) are clipped; anything lower
/// throws PreconditionError("not PSD ...").
Matrix matrix_sqrt_psd(const Matrix& m);

/// Re tr(A B) without forming the product.
double hs_inner(const Matrix& a, const Matrix& b);

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_squared(const DensityMatrix& rho, const DensityMatrix& sigma);

struct RelativeEntropyTolerances {
  double support_tol = 1e-12;
  double mass_tol = 1e-9;
};

/// S(rho|sigma) in bits. Returns kInfinity when rho has more than mass_tol
/// weight outside the numerical support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        RelativeEntropyTolerances tol = {});

double distance(MeasureKind kind, const DensityMatrix& rho, const DensityMatrix& sigma);

/// Distance from a fixed target state to arbitrary candidate matrices. The
/// target's spectral data is computed once at construction.
class TargetDistance {
 public:
  TargetDistance(const DensityMatrix& rho, MeasureKind kind, RelativeEntropyTolerances tol = {});

  MeasureKind kind() const { return kind_; }
  long dim() const { return dim_; }

  /// D(rho, sigma) for a Hermitian unit-trace sigma.
  double operator()(const Matrix& sigma) const;

  /// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
  double fidelity(const Matrix& sigma) const;

  /// Evaluator of x -> D(rho, x * a + (1 - x) * b). For the Bures metric the
  /// two endpoints are projected onto the support of rho once, so each call
  /// only diagonalizes a rank(rho) x rank(rho) matrix.
  class Segment {
   public:
    double operator()(double x) const;

   private:
    friend class TargetDistance;
    Segment(const TargetDistance& owner, const Matrix& a, const Matrix& b);
    const TargetDistance* owner_;
    Matrix a_;
    Matrix b_;
  };

  Segment segment(const Matrix& a, const Matrix& b) const;

 private:
  static double bures_from_core(const Matrix& core);
  double relative_entropy_of(const Matrix& sigma) const;

  MeasureKind kind_;
  long dim_;
  RelativeEntropyTolerances tol_;
  Matrix rho_;
  // sqrt(rho) restricted to its support: rho = root_ * root_^dagger.
  Matrix root_;
  double rho_log_rho_ = 0.0;
};

/// Partial transpose over the second factor of a bipartite split
/// (dim_a x dim_b).
Matrix partial_transpose(const Matrix& m, int dim_a, int dim_b);

}  // namespace entbound
