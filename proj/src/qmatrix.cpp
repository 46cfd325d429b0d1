#include "entbound/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace entbound {

namespace {

std::string describe(double value) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << value;
  return os.str();
}

double max_hermitian_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(op, a.rows(), b.rows());
  }
}

// sum_i sqrt(max(lambda_i, 0)) of a hermitized matrix; the trace of its
// PSD square root.
double trace_sqrt(const Matrix& m) {
  const RealVector ev = hermitian_eigenvalues(m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) total += std::sqrt(std::max(ev[i], 0.0));
  return total;
}

}  // namespace

DimensionMismatch::DimensionMismatch(const std::string& what, long lhs, long rhs)
    : std::invalid_argument(what + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                            std::to_string(rhs) + ")") {}

InvalidState::InvalidState(std::string invariant, double deviation, const std::string& detail)
    : std::invalid_argument("invalid density matrix: " + invariant + " violated, deviation " +
                            describe(deviation) + (detail.empty() ? "" : " (" + detail + ")")),
      invariant_(std::move(invariant)),
      deviation_(deviation) {}

std::string to_string(MeasureKind kind) {
  return kind == MeasureKind::BuresSquared ? "bures2" : "relent";
}

MeasureKind parse_measure(const std::string& name) {
  if (name == "bures2") return MeasureKind::BuresSquared;
  if (name == "relent") return MeasureKind::RelativeEntropy;
  throw std::invalid_argument("unknown measure '" + name + "' (expected bures2 or relent)");
}

void DensityMatrix::validate(const Matrix& entries, const std::vector<int>& local_dims) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidState("local_dims", 0.0, "matrix must be square and non-empty");
  }
  long product = 1;
  for (int d : local_dims) {
    if (d <= 0) throw InvalidState("local_dims", 0.0, "local dimensions must be positive");
    product *= d;
  }
  if (local_dims.empty() || product != entries.rows()) {
    throw InvalidState("local_dims", static_cast<double>(std::abs(product - entries.rows())),
                       "product of local_dims != dim");
  }
  const double herm = max_hermitian_deviation(entries);
  if (herm > kStateTol) throw InvalidState("hermiticity", herm);
  const double trace_dev = std::abs(entries.trace().real() - 1.0);
  if (trace_dev > kStateTol) throw InvalidState("trace", trace_dev);
  const double min_ev = hermitian_eigenvalues(entries)[0];
  if (min_ev < -kStateTol) throw InvalidState("psd", -min_ev);
}

DensityMatrix::DensityMatrix(Matrix entries, std::vector<int> local_dims) {
  validate(entries, local_dims);
  entries_ = std::move(entries);
  local_dims_ = std::move(local_dims);
}

DensityMatrix DensityMatrix::trusted(Matrix entries, std::vector<int> local_dims) {
  DensityMatrix out;
  out.entries_ = std::move(entries);
  out.local_dims_ = std::move(local_dims);
  return out;
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

SpectralDecomposition hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eig", m.rows(), m.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError("hermitian eigensolver did not converge (dim " +
                           std::to_string(m.rows()) + ", max |entry| " +
                           describe(m.cwiseAbs().maxCoeff()) + ", hermiticity deviation " +
                           describe(max_hermitian_deviation(m)) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eigenvalues", m.rows(), m.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError("hermitian eigensolver did not converge (dim " +
                           std::to_string(m.rows()) + ", max |entry| " +
                           describe(m.cwiseAbs().maxCoeff()) + ")");
  }
  return solver.eigenvalues();
}

Matrix matrix_sqrt_psd(const Matrix& m) {
  const SpectralDecomposition eig = hermitian_eig(m);
  if (eig.eigenvalues[0] < -kStateTol) {
    throw PreconditionError("not PSD: minimum eigenvalue " + describe(eig.eigenvalues[0]));
  }
  const RealVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

double hs_inner(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "hs_inner");
  // tr(AB) = sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).sum().real();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.matrix(), sigma.matrix(), "fidelity");
  return TargetDistance(rho, MeasureKind::BuresSquared).fidelity(sigma.matrix());
}

double bures_squared(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.matrix(), sigma.matrix(), "bures_squared");
  return TargetDistance(rho, MeasureKind::BuresSquared)(sigma.matrix());
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        RelativeEntropyTolerances tol) {
  require_same_dim(rho.matrix(), sigma.matrix(), "relative_entropy");
  return TargetDistance(rho, MeasureKind::RelativeEntropy, tol)(sigma.matrix());
}

double distance(MeasureKind kind, const DensityMatrix& rho, const DensityMatrix& sigma) {
  return kind == MeasureKind::BuresSquared ? bures_squared(rho, sigma)
                                           : relative_entropy(rho, sigma);
}

TargetDistance::TargetDistance(const DensityMatrix& rho, MeasureKind kind,
                               RelativeEntropyTolerances tol)
    : kind_(kind), dim_(rho.dim()), tol_(tol), rho_(rho.matrix()) {
  const SpectralDecomposition eig = hermitian_eig(rho_);
  if (eig.eigenvalues[0] < -kStateTol) {
    throw PreconditionError("not PSD: minimum eigenvalue " + describe(eig.eigenvalues[0]));
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda > kRankCutoff) support.push_back(i);
    if (lambda > tol_.support_tol) rho_log_rho_ += lambda * std::log2(lambda);
  }
  root_.resize(dim_, static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    root_.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors.col(support[c]) * std::sqrt(eig.eigenvalues[support[c]]);
  }
}

double TargetDistance::bures_from_core(const Matrix& core) {
  const double sqrt_f = std::clamp(trace_sqrt(core), 0.0, 1.0);
  return 2.0 - 2.0 * sqrt_f;
}

double TargetDistance::fidelity(const Matrix& sigma) const {
  if (sigma.rows() != dim_ || sigma.cols() != dim_) {
    throw DimensionMismatch("fidelity", dim_, sigma.rows());
  }
  const Matrix core = root_.adjoint() * sigma * root_;
  return std::clamp(std::pow(trace_sqrt(core), 2), 0.0, 1.0);
}

double TargetDistance::relative_entropy_of(const Matrix& sigma) const {
  const SpectralDecomposition eig = hermitian_eig(sigma);
  double null_mass = 0.0;
  double cross = 0.0;  // tr(rho log2 sigma)
  for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
    const auto v = eig.eigenvectors.col(j);
    const double weight = v.dot(rho_ * v).real();
    const double mu = eig.eigenvalues[j];
    if (mu <= tol_.support_tol) {
      null_mass += weight;
      cross += weight * std::log2(tol_.support_tol);
    } else {
      cross += weight * std::log2(mu);
    }
  }
  if (null_mass > tol_.mass_tol) return kInfinity;
  return std::max(rho_log_rho_ - cross, 0.0);
}

double TargetDistance::operator()(const Matrix& sigma) const {
  if (sigma.rows() != dim_ || sigma.cols() != dim_) {
    throw DimensionMismatch("distance", dim_, sigma.rows());
  }
  if (kind_ == MeasureKind::BuresSquared) return bures_from_core(root_.adjoint() * sigma * root_);
  return relative_entropy_of(sigma);
}

TargetDistance::Segment TargetDistance::segment(const Matrix& a, const Matrix& b) const {
  if (a.rows() != dim_ || b.rows() != dim_) throw DimensionMismatch("segment", a.rows(), b.rows());
  return Segment(*this, a, b);
}

TargetDistance::Segment::Segment(const TargetDistance& owner, const Matrix& a, const Matrix& b)
    : owner_(&owner) {
  if (owner.kind_ == MeasureKind::BuresSquared) {
    a_ = owner.root_.adjoint() * a * owner.root_;
    b_ = owner.root_.adjoint() * b * owner.root_;
  } else {
    a_ = a;
    b_ = b;
  }
}

double TargetDistance::Segment::operator()(double x) const {
  const Matrix mixed = x * a_ + (1.0 - x) * b_;
  if (owner_->kind_ == MeasureKind::BuresSquared) return owner_->bures_from_core(mixed);
  return owner_->relative_entropy_of(mixed);
}

Matrix partial_transpose(const Matrix& m, int dim_a, int dim_b) {
  if (m.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw DimensionMismatch("partial_transpose", m.rows(), static_cast<long>(dim_a) * dim_b);
  }
  Matrix out(m.rows(), m.cols());
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb)
          out(ia * dim_b + jb, ja * dim_b + ib) = m(ia * dim_b + ib, ja * dim_b + jb);
  return out;
}

}  // namespace entbound
