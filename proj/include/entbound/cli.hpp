// Library side of the command-line front end: state specs, the matrix file
// format, run records, and the experiment drivers. The executable in tools/
// only parses flags and routes output.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entbound/extremal.hpp"
#include "entbound/gilbert.hpp"
#include "entbound/qmatrix.hpp"
#include "entbound/states.hpp"
#include "json.hpp"

namespace entbound::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Bad flags, malformed state specs, invalid input files. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// States

/// Parsed --state argument: ghz:N, w:N, horodecki:A, chessboard:A,B,C,D,M,N,
/// file:PATH, or a bare path to a matrix file.
struct StateSpec {
  std::string family;  // ghz, w, horodecki, chessboard, file
  std::vector<double> params;
  std::string path;

  static StateSpec parse(const std::string& text);
  std::string to_string() const;
  /// Builds the state, applying white noise when noise_p is set.
  DensityMatrix build(std::optional<double> noise_p = std::nullopt) const;
};

/// Matrix file: {"local_dims":[...], "re":[[...]], "im":[[...]]}, row-major.
/// Validates every density-matrix invariant; throws InvalidState naming the
/// violated one, UsageError for structural problems.
DensityMatrix parse_state_json(const nlohmann::json& doc);
DensityMatrix parse_state_file(const std::string& path);
nlohmann::json state_to_json(const Matrix& m, const std::vector<int>& local_dims);
void write_state_file(const std::string& path, const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Solver options and records

inline OracleConfig single_start_oracle() {
  OracleConfig cfg;
  cfg.restarts = 1;
  cfg.reuse_warm_starts = false;
  return cfg;
}

struct SolverOptions {
  MeasureKind measure = MeasureKind::BuresSquared;
  GilbertConfig gilbert;
  /// One random start per oracle call, no warm start. More restarts find
  /// better Hilbert-Schmidt directions but stall the Bures descent earlier.
  OracleConfig oracle = single_start_oracle();
  std::uint64_t seed = 1;
  /// Workers for independent tasks; 0 means all cores.
  int threads = 0;
};

struct RunRecord {
  std::string state;
  std::optional<double> noise_p;
  std::string measure;
  std::string cls;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  long iterations = 0;
  std::string status;
  double seconds = 0.0;
  std::string version = kVersion;

  // GilbertConfig
  long max_iterations = 0;
  int findmin_sections = 0;
  int findmin_rounds = 0;
  int descent_window = 0;
  double descent_threshold = 0.0;
  int runs = 0;
  double value_floor = 0.0;
  std::optional<double> time_budget;
  // OracleConfig
  int restarts = 0;
  int max_sweeps = 0;
  double sweep_tol = 0.0;
  bool warm_start = false;

  std::vector<RunSummary> all_runs;

  bool operator==(const RunRecord& other) const;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& doc);

/// Decimal, locale independent, shortest representation that round-trips
/// exactly ("inf" for infinity).
std::string format_number(double value);

// ---------------------------------------------------------------------------
// Commands

struct MeasureResult {
  RunRecord record;
  DensityMatrix closest_state;
};

/// Single solver run on one state. Solver failures propagate as
/// SolverError / IntegrityError.
MeasureResult cmd_measure(const StateSpec& spec, std::optional<double> noise_p,
                          const PartitionClass& cls, const SolverOptions& opts);

/// One row of a sweep or grid. `value` is empty when the run failed.
struct SweepRow {
  std::vector<double> keys;  // p  |  a, p
  std::string cls;
  std::string measure;
  std::optional<double> value;
  long iterations = 0;
  std::string status;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json metadata;
  bool any_succeeded() const;
};

/// Evenly spaced points from lo to hi inclusive (just lo when count is 1).
std::vector<double> linspace(double lo, double hi, int count);

SweepResult cmd_sweep_noise(const StateSpec& spec, double p_min, double p_max, int steps,
                            const std::vector<PartitionClass>& classes, const SolverOptions& opts);
std::string sweep_csv(const SweepResult& result);

struct HorodeckiGrid {
  int a_steps = 5;
  int p_steps = 5;
  double a_lo = 0.1;
  double a_hi = 0.9;
  double p_lo = 0.0;
  double p_hi = 1.0;
};

SweepResult cmd_grid_horodecki(const HorodeckiGrid& grid, const PartitionClass& cls,
                               const SolverOptions& opts);
/// `with_overlay` appends an empty `overlay` column for externally computed
/// criterion curves.
std::string grid_csv(const SweepResult& result, bool with_overlay = false);

struct ChessboardSample {
  int id = 0;
  ChessboardParams params;
  std::optional<double> value;
  std::uint64_t seed = 0;
  int rejected_draws = 0;
  long iterations = 0;
  std::string status;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
  double fraction = 0.0;
};

struct ChessboardResult {
  std::vector<ChessboardSample> samples;
  std::vector<HistogramBin> histogram;
  std::vector<HistogramBin> sub_histogram;  // values below sub_limit
  nlohmann::json metadata;
};

struct ChessboardHistOptions {
  int samples = 2000;
  int bins = 20;
  std::optional<double> hist_max;  // default: largest sampled value
  int sub_bins = 10;
  double sub_limit = 0.01;
  double min_mn = 1e-6;  // draws with m or n below this are redrawn
};

/// Draws the six real parameters uniformly from [0, 1] for each sample.
ChessboardParams draw_chessboard_params(Rng& rng, double min_mn, int& rejected);

ChessboardResult cmd_chessboard_hist(const ChessboardHistOptions& hist, const PartitionClass& cls,
                                     const SolverOptions& opts);

/// Equal-width bins on [lo, hi]; values at or above hi land in the last bin,
/// values below lo are ignored. Fractions are relative to `total`.
std::vector<HistogramBin> histogram(const std::vector<double>& values, double lo, double hi,
                                    int bins, long total, bool clamp_high = true);

std::string samples_csv(const ChessboardResult& result);
std::string histogram_csv(const std::vector<HistogramBin>& bins);

/// Common metadata block: config, seeds, version.
nlohmann::json solver_metadata(const SolverOptions& opts);

}  // namespace entbound::cli
