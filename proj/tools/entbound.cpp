// entbound: upper bounds on distance-based entanglement measures.
//
//   entbound measure --state ghz:3 --noise-p 0.1 --measure bures2 --class full
//   entbound sweep-noise --state ghz:3 --steps 11 --classes full,bisep
//   entbound grid-horodecki --a-steps 5 --p-steps 5 --measure relent
//   entbound chessboard-hist --samples 2000 --out chess.csv
//   entbound validate state.json
//
// Exit codes: 0 success, 2 usage or input error, 3 solver error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "entbound/cli.hpp"

namespace {

using namespace entbound;
using namespace entbound::cli;

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct CommonFlags {
  std::string measure = "bures2";
  std::string cls = "full";
  long max_iter = 70000;
  int runs = 3;
  std::uint64_t seed = 1;
  int threads = 0;
  int sections = 20;
  int rounds = 8;
  int window = 500;
  double threshold = 1e-7;
  double time_budget = 0.0;
  int restarts = 1;
  int max_sweeps = 50;
  double sweep_tol = 1e-10;
  bool warm = false;
  std::string out;
  std::string meta;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_class = true) {
  cmd->add_option("--measure", f.measure, "bures2 or relent")->capture_default_str();
  if (with_class) {
    cmd->add_option("--class", f.cls, "full, bisep or partition:SPEC (e.g. partition:12|3)")
        ->capture_default_str();
  }
  cmd->add_option("--max-iter", f.max_iter, "maximum Gilbert iterations per run")->capture_default_str();
  cmd->add_option("--runs", f.runs, "independent runs; the smallest bound is kept")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--findmin-sections", f.sections, "grid sections N of the line search")
      ->capture_default_str();
  cmd->add_option("--findmin-rounds", f.rounds, "refinement rounds K of the line search")
      ->capture_default_str();
  cmd->add_option("--window", f.window, "iterations averaged by the descent criterion")
      ->capture_default_str();
  cmd->add_option("--threshold", f.threshold, "mean per-iteration decrease that stops a run")
      ->capture_default_str();
  cmd->add_option("--time-budget", f.time_budget, "wall-clock seconds per run (0 = none)");
  cmd->add_option("--restarts", f.restarts, "oracle starts per partition")->capture_default_str();
  cmd->add_option("--max-sweeps", f.max_sweeps, "oracle see-saw sweeps per start")->capture_default_str();
  cmd->add_option("--sweep-tol", f.sweep_tol, "oracle sweep gain tolerance")->capture_default_str();
  cmd->add_flag("--warm-start", f.warm, "seed each oracle call with the previous optimum");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--meta", f.meta, "metadata sidecar path (default OUT.meta.json when --out is set)");
}

SolverOptions solver_options(const CommonFlags& f) {
  SolverOptions opts;
  try {
    opts.measure = parse_measure(f.measure);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opts.gilbert.max_iterations = f.max_iter;
  opts.gilbert.findmin_sections = f.sections;
  opts.gilbert.findmin_rounds = f.rounds;
  opts.gilbert.descent_window = f.window;
  opts.gilbert.descent_threshold = f.threshold;
  opts.gilbert.runs = f.runs;
  if (f.time_budget > 0.0) opts.gilbert.time_budget = f.time_budget;
  opts.oracle.restarts = f.restarts;
  opts.oracle.max_sweeps = f.max_sweeps;
  opts.oracle.sweep_tol = f.sweep_tol;
  opts.oracle.reuse_warm_starts = f.warm;
  opts.seed = f.seed;
  opts.threads = f.threads;
  return opts;
}

PartitionClass parse_class(const std::string& text) {
  try {
    return PartitionClass::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

void emit_meta(const CommonFlags& f, const nlohmann::json& meta) {
  const std::string path = !f.meta.empty() ? f.meta : (f.out.empty() ? "" : f.out + ".meta.json");
  if (!path.empty()) emit(path, meta.dump(2) + "\n");
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size()) + suffix;
  }
  return path + suffix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds on distance-based entanglement measures"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // measure
  CommonFlags measure_flags;
  std::string measure_state;
  double measure_noise = -1.0;
  std::string certificate;
  auto* measure = app.add_subcommand("measure", "bound the measure of a single state");
  measure->add_option("--state", measure_state, "ghz:N, w:N, horodecki:A, chessboard:A,B,C,D,M,N, file:PATH")
      ->required();
  measure->add_option("--noise-p", measure_noise, "mix with white noise: p*rho + (1-p)*1/d");
  measure->add_option("--certificate", certificate, "write the closest separable state found");
  add_common(measure, measure_flags);

  // sweep-noise
  CommonFlags sweep_flags;
  std::string sweep_state;
  double p_min = 0.0, p_max = 1.0;
  int steps = 11;
  std::string classes = "full,bisep";
  auto* sweep = app.add_subcommand("sweep-noise", "bound the measure along the white-noise family");
  sweep->add_option("--state", sweep_state, "state family spec")->required();
  sweep->add_option("--p-min", p_min)->capture_default_str();
  sweep->add_option("--p-max", p_max)->capture_default_str();
  sweep->add_option("--steps", steps, "number of p values")->capture_default_str();
  sweep->add_option("--classes", classes, "comma-separated classes")->capture_default_str();
  add_common(sweep, sweep_flags, false);

  // grid-horodecki
  CommonFlags grid_flags;
  HorodeckiGrid grid;
  bool with_overlay = false;
  auto* grid_cmd = app.add_subcommand("grid-horodecki", "noisy Horodecki states on an (a, p) grid");
  grid_cmd->add_option("--a-steps", grid.a_steps)->capture_default_str();
  grid_cmd->add_option("--p-steps", grid.p_steps)->capture_default_str();
  grid_cmd->add_option("--a-lo", grid.a_lo)->capture_default_str();
  grid_cmd->add_option("--a-hi", grid.a_hi)->capture_default_str();
  grid_cmd->add_option("--p-lo", grid.p_lo)->capture_default_str();
  grid_cmd->add_option("--p-hi", grid.p_hi)->capture_default_str();
  grid_cmd->add_flag("--with-overlay", with_overlay, "append an empty overlay column");
  add_common(grid_cmd, grid_flags);

  // chessboard-hist
  CommonFlags chess_flags;
  ChessboardHistOptions chess;
  double hist_max = 0.0;
  std::string hist_out, subhist_out;
  auto* chess_cmd = app.add_subcommand("chessboard-hist", "distribution over random chessboard states");
  chess_cmd->add_option("--samples", chess.samples)->capture_default_str();
  chess_cmd->add_option("--bins", chess.bins)->capture_default_str();
  chess_cmd->add_option("--hist-max", hist_max, "upper edge of the histogram (default: largest value)");
  chess_cmd->add_option("--sub-bins", chess.sub_bins)->capture_default_str();
  chess_cmd->add_option("--sub-limit", chess.sub_limit)->capture_default_str();
  chess_cmd->add_option("--hist-out", hist_out, "histogram CSV (default derived from --out)");
  chess_cmd->add_option("--subhist-out", subhist_out, "sub-histogram CSV (default derived from --out)");
  add_common(chess_cmd, chess_flags);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a matrix file");
  validate->add_option("path", validate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*measure) {
      const SolverOptions opts = solver_options(measure_flags);
      const StateSpec spec = StateSpec::parse(measure_state);
      std::optional<double> noise;
      if (measure->count("--noise-p")) noise = measure_noise;
      const PartitionClass cls = parse_class(measure_flags.cls);
      MeasureResult result;
      try {
        result = cmd_measure(spec, noise, cls, opts);
      } catch (const UsageError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
      }
      const nlohmann::json doc = to_json(result.record);
      emit(measure_flags.out, doc.dump(2) + "\n");
      nlohmann::json meta = solver_metadata(opts);
      meta["command"] = "measure";
      meta["record"] = doc;
      emit_meta(measure_flags, meta);
      if (!certificate.empty()) write_state_file(certificate, result.closest_state);
      return 0;
    }
    if (*sweep) {
      const SolverOptions opts = solver_options(sweep_flags);
      const StateSpec spec = StateSpec::parse(sweep_state);
      std::vector<PartitionClass> cls_list;
      std::stringstream ss(classes);
      std::string item;
      while (std::getline(ss, item, ',')) cls_list.push_back(parse_class(item));
      const SweepResult result = cmd_sweep_noise(spec, p_min, p_max, steps, cls_list, opts);
      emit(sweep_flags.out, sweep_csv(result));
      emit_meta(sweep_flags, result.metadata);
      return result.any_succeeded() ? 0 : kExitSolver;
    }
    if (*grid_cmd) {
      const SolverOptions opts = solver_options(grid_flags);
      const SweepResult result = cmd_grid_horodecki(grid, parse_class(grid_flags.cls), opts);
      emit(grid_flags.out, grid_csv(result, with_overlay));
      emit_meta(grid_flags, result.metadata);
      return result.any_succeeded() ? 0 : kExitSolver;
    }
    if (*chess_cmd) {
      const SolverOptions opts = solver_options(chess_flags);
      if (chess_cmd->count("--hist-max")) chess.hist_max = hist_max;
      const ChessboardResult result = cmd_chessboard_hist(chess, parse_class(chess_flags.cls), opts);
      if (chess_flags.out.empty()) {
        std::cout << samples_csv(result) << '\n'
                  << histogram_csv(result.histogram) << '\n'
                  << histogram_csv(result.sub_histogram);
      } else {
        emit(chess_flags.out, samples_csv(result));
        emit(hist_out.empty() ? with_suffix(chess_flags.out, ".hist.csv") : hist_out,
             histogram_csv(result.histogram));
        emit(subhist_out.empty() ? with_suffix(chess_flags.out, ".subhist.csv") : subhist_out,
             histogram_csv(result.sub_histogram));
      }
      emit_meta(chess_flags, result.metadata);
      const bool ok = std::any_of(result.samples.begin(), result.samples.end(),
                                  [](const ChessboardSample& s) { return s.value.has_value(); });
      return ok ? 0 : kExitSolver;
    }
    if (*validate) {
      const DensityMatrix rho = parse_state_file(validate_path);
      const RealVector ev = hermitian_eigenvalues(rho.matrix());
      nlohmann::json doc = {{"valid", true},
                            {"dim", rho.dim()},
                            {"local_dims", rho.local_dims()},
                            {"trace", rho.matrix().trace().real()},
                            {"min_eigenvalue", ev[0]}};
      std::cout << doc.dump(2) << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidState& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
