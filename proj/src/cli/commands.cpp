#include <algorithm>
#include <chrono>
#include <cmath>
#include <locale>
#include <sstream>

#include "entbound/cli.hpp"
#include "entbound/parallel.hpp"

namespace entbound::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate_options(const SolverOptions& opts) {
  try {
    opts.gilbert.validate();
    opts.oracle.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void validate_class(const PartitionClass& cls, const DensityMatrix& rho) {
  try {
    cls.validate(rho.parties());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Independent tasks run with one solver thread each; the pool is spread
// across tasks instead.
GilbertConfig task_config(const SolverOptions& opts) {
  GilbertConfig cfg = opts.gilbert;
  cfg.threads = 1;
  return cfg;
}

struct TaskOutcome {
  std::optional<double> value;
  long iterations = 0;
  std::string status;
  std::string error;
};

TaskOutcome run_task(const DensityMatrix& rho, const PartitionClass& cls, const SolverOptions& opts,
                     std::uint64_t seed) {
  TaskOutcome out;
  try {
    const GilbertRun run = gilbert_run(rho, opts.measure, cls, task_config(opts), opts.oracle, seed);
    out.value = run.best_value;
    out.iterations = run.iterations();
    out.status = to_string(run.status);
  } catch (const SolverError& e) {
    out.status = "failed";
    out.error = e.what();
    if (e.partial()) out.iterations = e.partial()->iterations();
  } catch (const std::exception& e) {
    out.status = "failed";
    out.error = e.what();
  }
  return out;
}

std::string csv_value(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw UsageError("step count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo : (i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1));
  }
  return out;
}

bool SweepResult::any_succeeded() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.value.has_value(); });
}

MeasureResult cmd_measure(const StateSpec& spec, std::optional<double> noise_p,
                          const PartitionClass& cls, const SolverOptions& opts) {
  validate_options(opts);
  const DensityMatrix rho = spec.build(noise_p);
  validate_class(cls, rho);

  GilbertConfig cfg = opts.gilbert;
  cfg.threads = opts.threads;
  const auto started = std::chrono::steady_clock::now();
  const GilbertRun run = gilbert_run(rho, opts.measure, cls, cfg, opts.oracle, opts.seed);
  const Certificate cert = upper_bound_certificate(run);

  RunRecord r;
  r.state = spec.to_string();
  r.noise_p = noise_p;
  r.measure = to_string(opts.measure);
  r.cls = cls.to_string();
  r.seed = opts.seed;
  r.best_value = cert.value;
  r.iterations = run.iterations();
  r.status = to_string(run.status);
  r.seconds = seconds_since(started);
  r.max_iterations = cfg.max_iterations;
  r.findmin_sections = cfg.findmin_sections;
  r.findmin_rounds = cfg.findmin_rounds;
  r.descent_window = cfg.descent_window;
  r.descent_threshold = cfg.descent_threshold;
  r.runs = cfg.runs;
  r.value_floor = cfg.value_floor;
  r.time_budget = cfg.time_budget;
  r.restarts = opts.oracle.restarts;
  r.max_sweeps = opts.oracle.max_sweeps;
  r.sweep_tol = opts.oracle.sweep_tol;
  r.warm_start = opts.oracle.reuse_warm_starts;
  r.all_runs = run.all_runs;
  return {std::move(r), cert.closest_state};
}

SweepResult cmd_sweep_noise(const StateSpec& spec, double p_min, double p_max, int steps,
                            const std::vector<PartitionClass>& classes, const SolverOptions& opts) {
  validate_options(opts);
  if (!(0.0 <= p_min && p_min <= p_max && p_max <= 1.0)) {
    throw UsageError("noise range must satisfy 0 <= p_min <= p_max <= 1");
  }
  if (steps < 1) throw UsageError("steps must be >= 1");
  if (classes.empty()) throw UsageError("at least one class is required");
  const DensityMatrix base = spec.build();
  for (const auto& cls : classes) validate_class(cls, base);

  const std::vector<double> ps = linspace(p_min, p_max, steps);
  const std::size_t n_tasks = ps.size() * classes.size();
  std::vector<SweepRow> rows(n_tasks);
  std::vector<std::string> errors(n_tasks);
  const auto started = std::chrono::steady_clock::now();
  parallel_for(n_tasks, opts.threads, [&](std::size_t t) {
    const std::size_t pi = t / classes.size();
    const std::size_t ci = t % classes.size();
    SweepRow& row = rows[t];
    row.keys = {ps[pi]};
    row.cls = classes[ci].to_string();
    row.measure = to_string(opts.measure);
    row.seed = split_seed(opts.seed, t);
    const TaskOutcome outcome =
        run_task(mix_white_noise(base, ps[pi]), classes[ci], opts, row.seed);
    row.value = outcome.value;
    row.iterations = outcome.iterations;
    row.status = outcome.status;
    errors[t] = outcome.error;
  });

  SweepResult result;
  result.rows = std::move(rows);
  result.metadata = solver_metadata(opts);
  result.metadata["command"] = "sweep-noise";
  result.metadata["state"] = spec.to_string();
  result.metadata["p_min"] = p_min;
  result.metadata["p_max"] = p_max;
  result.metadata["steps"] = steps;
  nlohmann::json cls_names = nlohmann::json::array();
  for (const auto& c : classes) cls_names.push_back(c.to_string());
  result.metadata["classes"] = cls_names;
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (!errors[t].empty()) failures.push_back({{"row", t}, {"error", errors[t]}});
  }
  result.metadata["failures"] = failures;
  result.metadata["seconds"] = seconds_since(started);
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "p,class,measure,value,iterations,status,seed\n";
  for (const SweepRow& r : result.rows) {
    os << format_number(r.keys.at(0)) << ',' << r.cls << ',' << r.measure << ',' << csv_value(r.value)
       << ',' << r.iterations << ',' << r.status << ',' << r.seed << '\n';
  }
  return os.str();
}

SweepResult cmd_grid_horodecki(const HorodeckiGrid& grid, const PartitionClass& cls,
                               const SolverOptions& opts) {
  validate_options(opts);
  if (grid.a_steps < 2 || grid.p_steps < 2) throw UsageError("grid needs at least 2 steps per axis");
  if (!(0.0 < grid.a_lo && grid.a_lo <= grid.a_hi && grid.a_hi < 1.0)) {
    throw UsageError("a range must lie inside (0, 1)");
  }
  if (!(0.0 <= grid.p_lo && grid.p_lo <= grid.p_hi && grid.p_hi <= 1.0)) {
    throw UsageError("p range must lie inside [0, 1]");
  }
  validate_class(cls, horodecki(0.5));

  const std::vector<double> as = linspace(grid.a_lo, grid.a_hi, grid.a_steps);
  const std::vector<double> ps = linspace(grid.p_lo, grid.p_hi, grid.p_steps);
  const std::size_t n_tasks = as.size() * ps.size();
  std::vector<SweepRow> rows(n_tasks);
  std::vector<std::string> errors(n_tasks);
  const auto started = std::chrono::steady_clock::now();
  parallel_for(n_tasks, opts.threads, [&](std::size_t t) {
    const double a = as[t / ps.size()];
    const double p = ps[t % ps.size()];
    SweepRow& row = rows[t];
    row.keys = {a, p};
    row.cls = cls.to_string();
    row.measure = to_string(opts.measure);
    row.seed = split_seed(opts.seed, t);
    const TaskOutcome outcome = run_task(mix_white_noise(horodecki(a), p), cls, opts, row.seed);
    row.value = outcome.value;
    row.iterations = outcome.iterations;
    row.status = outcome.status;
    errors[t] = outcome.error;
  });

  SweepResult result;
  result.rows = std::move(rows);
  result.metadata = solver_metadata(opts);
  result.metadata["command"] = "grid-horodecki";
  result.metadata["class"] = cls.to_string();
  result.metadata["a_range"] = {grid.a_lo, grid.a_hi, grid.a_steps};
  result.metadata["p_range"] = {grid.p_lo, grid.p_hi, grid.p_steps};
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (!errors[t].empty()) failures.push_back({{"row", t}, {"error", errors[t]}});
  }
  result.metadata["failures"] = failures;
  result.metadata["seconds"] = seconds_since(started);
  return result;
}

std::string grid_csv(const SweepResult& result, bool with_overlay) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "a,p,measure,value,iterations,status,seed" << (with_overlay ? ",overlay" : "") << '\n';
  for (const SweepRow& r : result.rows) {
    os << format_number(r.keys.at(0)) << ',' << format_number(r.keys.at(1)) << ',' << r.measure
       << ',' << csv_value(r.value) << ',' << r.iterations << ',' << r.status << ',' << r.seed
       << (with_overlay ? "," : "") << '\n';
  }
  return os.str();
}

ChessboardParams draw_chessboard_params(Rng& rng, double min_mn, int& rejected) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    double v[6];
    for (double& x : v) x = unit(rng);
    if (v[4] >= min_mn && v[5] >= min_mn) return {v[0], v[1], v[2], v[3], v[4], v[5]};
    ++rejected;
  }
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, double lo, double hi,
                                    int bins, long total, bool clamp_high) {
  if (bins < 1) throw UsageError("bins must be >= 1");
  if (!(hi > lo)) throw UsageError("histogram range must be non-empty");
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    out[b].lo = lo + b * width;
    out[b].hi = b == bins - 1 ? hi : lo + (b + 1) * width;
  }
  for (double v : values) {
    if (v < lo) continue;
    if (v >= hi && !clamp_high) continue;
    const int b = std::min(bins - 1, static_cast<int>((v - lo) / width));
    ++out[b].count;
  }
  for (auto& bin : out) bin.fraction = total > 0 ? static_cast<double>(bin.count) / total : 0.0;
  return out;
}

ChessboardResult cmd_chessboard_hist(const ChessboardHistOptions& hist, const PartitionClass& cls,
                                     const SolverOptions& opts) {
  validate_options(opts);
  if (hist.samples < 1) throw UsageError("samples must be >= 1");
  if (hist.bins < 1 || hist.sub_bins < 1) throw UsageError("bins must be >= 1");
  if (!(hist.sub_limit > 0.0)) throw UsageError("sub-histogram limit must be positive");
  validate_class(cls, horodecki(0.5));

  ChessboardResult result;
  result.samples.resize(static_cast<std::size_t>(hist.samples));
  std::vector<std::string> errors(result.samples.size());
  const auto started = std::chrono::steady_clock::now();
  parallel_for(result.samples.size(), opts.threads, [&](std::size_t i) {
    ChessboardSample& s = result.samples[i];
    s.id = static_cast<int>(i);
    s.seed = split_seed(opts.seed, i);
    Rng draw = make_rng(split_seed(s.seed, 0));
    s.params = draw_chessboard_params(draw, hist.min_mn, s.rejected_draws);
    try {
      const DensityMatrix rho = chessboard(s.params);
      const TaskOutcome outcome = run_task(rho, cls, opts, split_seed(s.seed, 1));
      s.value = outcome.value;
      s.iterations = outcome.iterations;
      s.status = outcome.status;
      errors[i] = outcome.error;
    } catch (const std::exception& e) {
      s.status = "failed";
      errors[i] = e.what();
    }
  });

  std::vector<double> values;
  for (const auto& s : result.samples)
    if (s.value) values.push_back(*s.value);
  const long total = static_cast<long>(values.size());
  double hi = hist.hist_max.value_or(0.0);
  if (!hist.hist_max) {
    for (double v : values) hi = std::max(hi, v);
    if (!(hi > 0.0)) hi = hist.sub_limit;
  }
  if (total > 0) {
    result.histogram = histogram(values, 0.0, hi, hist.bins, total, true);
    result.sub_histogram = histogram(values, 0.0, hist.sub_limit, hist.sub_bins, total, false);
  }

  int rejected = 0;
  for (const auto& s : result.samples) rejected += s.rejected_draws;
  result.metadata = solver_metadata(opts);
  result.metadata["command"] = "chessboard-hist";
  result.metadata["class"] = cls.to_string();
  result.metadata["samples"] = hist.samples;
  result.metadata["bins"] = hist.bins;
  result.metadata["hist_max"] = hi;
  result.metadata["sub_bins"] = hist.sub_bins;
  result.metadata["sub_limit"] = hist.sub_limit;
  result.metadata["parameter_distribution"] = "independent uniform [0,1] for a,b,c,d,m,n";
  result.metadata["rejected_draws"] = rejected;
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (!errors[t].empty()) failures.push_back({{"sample", t}, {"error", errors[t]}});
  }
  result.metadata["failures"] = failures;
  result.metadata["seconds"] = seconds_since(started);
  return result;
}

std::string samples_csv(const ChessboardResult& result) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "id,a,b,c,d,m,n,value,seed\n";
  for (const auto& s : result.samples) {
    const ChessboardParams& p = s.params;
    os << s.id << ',' << format_number(p.a.real()) << ',' << format_number(p.b.real()) << ','
       << format_number(p.c.real()) << ',' << format_number(p.d.real()) << ','
       << format_number(p.m.real()) << ',' << format_number(p.n.real()) << ','
       << csv_value(s.value) << ',' << s.seed << '\n';
  }
  return os.str();
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "bin_lo,bin_hi,count,fraction\n";
  for (const auto& b : bins) {
    os << format_number(b.lo) << ',' << format_number(b.hi) << ',' << b.count << ','
       << format_number(b.fraction) << '\n';
  }
  return os.str();
}

}  // namespace entbound::cli
