// Conditional-gradient (Gilbert) iteration for upper bounds on
// distance-based entanglement measures.
//
// Starting from the maximally mixed state, each iteration
//   1. asks the extremal oracle for the pure product state sigma_k that
//      maximizes tr[(rho - rho_k) sigma] over the chosen class,
//   2. minimizes D(rho, x rho_k + (1 - x) sigma_k) over x in [0, 1] by
//      bracketed grid refinement,
// and moves to the minimizer. Every iterate is a convex combination of
// class members, so D(rho, rho_k) is an upper bound on the measure.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entbound/extremal.hpp"
#include "entbound/qmatrix.hpp"

namespace entbound {

struct GilbertConfig {
  long max_iterations = 70000;
  int findmin_sections = 20;
  int findmin_rounds = 8;
  int descent_window = 500;
  /// Stop once the mean per-iteration decrease over the window drops below this.
  double descent_threshold = 1e-7;
  int runs = 3;
  /// Stop as soon as the bound is at or below this value.
  double value_floor = 1e-12;
  /// Wall-clock budget per run in seconds; unset means unlimited.
  std::optional<double> time_budget;
  /// Keep (x_m, sigma_k) for every iteration so the iterate can be rebuilt
  /// as an explicit separable mixture.
  bool record_steps = false;
  /// Workers used for the independent runs; 0 means all cores.
  int threads = 1;

  void validate() const;
};

enum class RunStatus { Converged, MaxIterations, TimeLimit };
std::string to_string(RunStatus status);

struct IterationRecord {
  long iteration = 0;
  double value = 0.0;
  double x_m = 0.0;
  double oracle_value = 0.0;
};

struct StepRecord {
  double x_m = 0.0;
  Vector sigma;  // pure product state of the step
};

struct RunSummary {
  std::uint64_t seed = 0;
  double best_value = 0.0;
  long iterations = 0;
  RunStatus status = RunStatus::MaxIterations;
};

struct GilbertRun {
  DensityMatrix target;
  MeasureKind measure = MeasureKind::BuresSquared;
  PartitionClass cls = PartitionClass::fully_separable();
  DensityMatrix current;
  double initial_value = 0.0;  // D(rho, 1/d)
  double best_value = 0.0;
  std::vector<IterationRecord> history;
  std::vector<StepRecord> steps;
  RunStatus status = RunStatus::MaxIterations;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  /// Every independent run, in seed order; the fields above describe the best.
  std::vector<RunSummary> all_runs;

  long iterations() const { return static_cast<long>(history.size()); }
};

/// A failed run, with the history accumulated before the failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::shared_ptr<const GilbertRun> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const GilbertRun* partial() const { return partial_.get(); }

 private:
  std::shared_ptr<const GilbertRun> partial_;
};

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SegmentMinimum {
  double x_m = 1.0;
  double value = 0.0;
  double x_lo = 0.0;  // final bracket
  double x_hi = 1.0;
};

/// Bracketed grid search for the minimum of f on [0, 1]: evaluate f on
/// sections + 1 equispaced points, keep the neighbours of the smallest value
/// as the new bracket (clamped at the ends), repeat `rounds` times. Ties go to
/// the smallest index; NaN counts as +infinity. If every point of the first
/// grid is infinite, returns x = 1.
SegmentMinimum find_min_on_interval(const std::function<double(double)>& f, int sections,
                                    int rounds);

/// find_min_on_interval over x -> D(rho, x rho_k + (1 - x) sigma_k).
SegmentMinimum find_min_on_segment(const DensityMatrix& rho, const Matrix& rho_k,
                                   const Matrix& sigma_k, MeasureKind measure, int sections,
                                   int rounds);

/// One run from a single seed.
GilbertRun gilbert_single(const DensityMatrix& rho, MeasureKind measure, const PartitionClass& cls,
                          const GilbertConfig& cfg, const OracleConfig& oracle_cfg,
                          std::uint64_t seed);

/// cfg.runs independent runs with seeds split from `seed`; returns the run
/// with the smallest bound and lists all of them in all_runs.
GilbertRun gilbert_run(const DensityMatrix& rho, MeasureKind measure, const PartitionClass& cls,
                       const GilbertConfig& cfg, const OracleConfig& oracle_cfg,
                       std::uint64_t seed);

struct Certificate {
  double value;
  DensityMatrix closest_state;
};

/// Re-evaluates D(rho, rho_k) from scratch and checks it against the
/// recorded bound (tolerance 1e-9); throws IntegrityError on mismatch.
Certificate upper_bound_certificate(const GilbertRun& run);

}  // namespace entbound
