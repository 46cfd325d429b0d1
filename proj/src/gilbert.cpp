#include "entbound/gilbert.hpp"

#include <chrono>
#include <cmath>

#include "entbound/parallel.hpp"
#include "entbound/rng.hpp"

namespace entbound {

void GilbertConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (findmin_sections < 2) throw std::invalid_argument("findmin sections N must be >= 2");
  if (findmin_rounds < 1) throw std::invalid_argument("findmin rounds K must be >= 1");
  if (descent_window < 1) throw std::invalid_argument("descent window must be >= 1");
  if (!(descent_threshold >= 0.0)) throw std::invalid_argument("descent threshold must be >= 0");
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (time_budget && !(*time_budget > 0.0)) throw std::invalid_argument("time budget must be > 0");
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

SegmentMinimum find_min_on_interval(const std::function<double(double)>& f, int sections,
                                    int rounds) {
  if (sections < 2) throw std::invalid_argument("findmin sections N must be >= 2");
  if (rounds < 1) throw std::invalid_argument("findmin rounds K must be >= 1");
  SegmentMinimum out;
  std::vector<double> xs(sections + 1);
  std::vector<double> values(sections + 1);
  for (int round = 0; round < rounds; ++round) {
    const double lo = out.x_lo;
    const double hi = out.x_hi;
    const double step = (hi - lo) / sections;
    int best = 0;
    for (int i = 0; i <= sections; ++i) {
      xs[i] = i == sections ? hi : lo + i * step;
      const double v = f(xs[i]);
      values[i] = std::isnan(v) ? kInfinity : v;
      if (values[i] < values[best]) best = i;
    }
    if (std::isinf(values[best])) {
      // Only possible on the first grid: nothing finite anywhere.
      out.x_m = 1.0;
      out.value = values[sections];
      return out;
    }
    out.x_m = xs[best];
    out.value = values[best];
    out.x_lo = xs[std::max(best - 1, 0)];
    out.x_hi = xs[std::min(best + 1, sections)];
  }
  return out;
}

SegmentMinimum find_min_on_segment(const DensityMatrix& rho, const Matrix& rho_k,
                                   const Matrix& sigma_k, MeasureKind measure, int sections,
                                   int rounds) {
  const TargetDistance dist(rho, measure);
  const auto segment = dist.segment(rho_k, sigma_k);
  return find_min_on_interval([&](double x) { return segment(x); }, sections, rounds);
}

GilbertRun gilbert_single(const DensityMatrix& rho, MeasureKind measure, const PartitionClass& cls,
                          const GilbertConfig& cfg, const OracleConfig& oracle_cfg,
                          std::uint64_t seed) {
  cfg.validate();
  cls.validate(rho.parties());
  const auto started = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  GilbertRun run;
  run.target = rho;
  run.measure = measure;
  run.cls = cls;
  run.seed = seed;

  const long d = rho.dim();
  Matrix current = Matrix::Identity(d, d) / static_cast<double>(d);
  const auto snapshot = [&] {
    run.current = DensityMatrix::trusted(current, rho.local_dims());
    run.seconds = elapsed();
  };

  try {
    const TargetDistance dist(rho, measure);
    ExtremalOracle oracle(rho.local_dims(), cls, oracle_cfg);
    Rng rng = make_rng(seed);

    double value = dist(current);
    run.initial_value = value;
    const long reserve = std::min<long>(cfg.max_iterations, 100000);
    run.history.reserve(static_cast<std::size_t>(reserve));

    for (long k = 1; k <= cfg.max_iterations; ++k) {
      const Matrix direction = rho.matrix() - current;
      const ProductState extreme = oracle(direction, rng);
      const Matrix sigma = extreme.projector();
      const auto segment = dist.segment(current, sigma);
      SegmentMinimum step = find_min_on_interval([&](double x) { return segment(x); },
                                                 cfg.findmin_sections, cfg.findmin_rounds);
      if (step.value < value && value > cfg.value_floor) {
        current = step.x_m * current + (1.0 - step.x_m) * sigma;
        value = step.value;
      } else {
        step.x_m = 1.0;  // no improvement on the segment: keep the iterate
      }
      run.history.push_back({k, value, step.x_m, extreme.value});
      if (cfg.record_steps) run.steps.push_back({step.x_m, extreme.global});

      if (value <= cfg.value_floor) {
        run.status = RunStatus::Converged;
        break;
      }
      if (k >= cfg.descent_window) {
        const double earlier =
            k == cfg.descent_window ? run.initial_value : run.history[k - 1 - cfg.descent_window].value;
        if ((earlier - value) / cfg.descent_window < cfg.descent_threshold) {
          run.status = RunStatus::Converged;
          break;
        }
      }
      if (cfg.time_budget && elapsed() > *cfg.time_budget) {
        run.status = RunStatus::TimeLimit;
        break;
      }
    }
    run.best_value = value;
  } catch (const std::exception& e) {
    snapshot();
    run.best_value = run.history.empty() ? run.initial_value : run.history.back().value;
    throw SolverError(std::string("solver run failed at iteration ") +
                          std::to_string(run.history.size() + 1) + ": " + e.what(),
                      std::make_shared<const GilbertRun>(std::move(run)));
  }
  snapshot();
  run.all_runs.push_back({seed, run.best_value, run.iterations(), run.status});
  return run;
}

GilbertRun gilbert_run(const DensityMatrix& rho, MeasureKind measure, const PartitionClass& cls,
                       const GilbertConfig& cfg, const OracleConfig& oracle_cfg,
                       std::uint64_t seed) {
  cfg.validate();
  cls.validate(rho.parties());
  std::vector<GilbertRun> runs(static_cast<std::size_t>(cfg.runs));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    runs[r] = gilbert_single(rho, measure, cls, cfg, oracle_cfg, split_seed(seed, r));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].best_value < runs[best].best_value) best = r;
  }
  std::vector<RunSummary> summaries;
  for (const GilbertRun& r : runs) summaries.push_back(r.all_runs.front());
  GilbertRun out = std::move(runs[best]);
  out.all_runs = std::move(summaries);
  return out;
}

Certificate upper_bound_certificate(const GilbertRun& run) {
  const double fresh = distance(run.measure, run.target, run.current);
  const bool both_infinite = std::isinf(fresh) && std::isinf(run.best_value);
  if (!both_infinite && !(std::abs(fresh - run.best_value) <= 1e-9)) {
    throw IntegrityError("certificate mismatch: recorded bound " + std::to_string(run.best_value) +
                         ", re-evaluated " + std::to_string(fresh));
  }
  return {run.best_value, run.current};
}

}  // namespace entbound
