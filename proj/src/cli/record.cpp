#include <charconv>
#include <cmath>

#include "entbound/cli.hpp"

namespace entbound::cli {

namespace {

nlohmann::json number_or_marker(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_number_or_marker(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw UsageError("unexpected numeric marker '" + s + "'");
  }
  return j.get<double>();
}

RunStatus parse_status(const std::string& s) {
  if (s == "converged") return RunStatus::Converged;
  if (s == "max_iterations") return RunStatus::MaxIterations;
  if (s == "time_limit") return RunStatus::TimeLimit;
  throw UsageError("unknown run status '" + s + "'");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

bool RunRecord::operator==(const RunRecord& o) const {
  auto same_runs = [&] {
    if (all_runs.size() != o.all_runs.size()) return false;
    for (std::size_t i = 0; i < all_runs.size(); ++i) {
      const auto& a = all_runs[i];
      const auto& b = o.all_runs[i];
      if (a.seed != b.seed || a.best_value != b.best_value || a.iterations != b.iterations ||
          a.status != b.status)
        return false;
    }
    return true;
  };
  return state == o.state && noise_p == o.noise_p && measure == o.measure && cls == o.cls &&
         seed == o.seed && best_value == o.best_value && iterations == o.iterations &&
         status == o.status && seconds == o.seconds && version == o.version &&
         max_iterations == o.max_iterations && findmin_sections == o.findmin_sections &&
         findmin_rounds == o.findmin_rounds && descent_window == o.descent_window &&
         descent_threshold == o.descent_threshold && runs == o.runs &&
         value_floor == o.value_floor && time_budget == o.time_budget &&
         restarts == o.restarts && max_sweeps == o.max_sweeps && sweep_tol == o.sweep_tol &&
         warm_start == o.warm_start &&
         same_runs();
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json runs = nlohmann::json::array();
  for (const RunSummary& s : r.all_runs) {
    runs.push_back({{"seed", s.seed},
                    {"best_value", number_or_marker(s.best_value)},
                    {"iterations", s.iterations},
                    {"status", to_string(s.status)}});
  }
  return {
      {"state", r.state},
      {"noise_p", r.noise_p ? nlohmann::json(*r.noise_p) : nlohmann::json(nullptr)},
      {"measure", r.measure},
      {"class", r.cls},
      {"seed", r.seed},
      {"best_value", number_or_marker(r.best_value)},
      {"iterations", r.iterations},
      {"status", r.status},
      {"seconds", r.seconds},
      {"version", r.version},
      {"gilbert",
       {{"max_iterations", r.max_iterations},
        {"findmin_sections", r.findmin_sections},
        {"findmin_rounds", r.findmin_rounds},
        {"descent_window", r.descent_window},
        {"descent_threshold", r.descent_threshold},
        {"runs", r.runs},
        {"value_floor", r.value_floor},
        {"time_budget", r.time_budget ? nlohmann::json(*r.time_budget) : nlohmann::json(nullptr)}}},
      {"oracle",
       {{"restarts", r.restarts}, {"max_sweeps", r.max_sweeps}, {"sweep_tol", r.sweep_tol}, {"warm_start", r.warm_start}}},
      {"runs", std::move(runs)},
  };
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.state = j.at("state").get<std::string>();
    if (!j.at("noise_p").is_null()) r.noise_p = j.at("noise_p").get<double>();
    r.measure = j.at("measure").get<std::string>();
    r.cls = j.at("class").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best_value = from_number_or_marker(j.at("best_value"));
    r.iterations = j.at("iterations").get<long>();
    r.status = j.at("status").get<std::string>();
    r.seconds = j.at("seconds").get<double>();
    r.version = j.at("version").get<std::string>();
    const auto& g = j.at("gilbert");
    r.max_iterations = g.at("max_iterations").get<long>();
    r.findmin_sections = g.at("findmin_sections").get<int>();
    r.findmin_rounds = g.at("findmin_rounds").get<int>();
    r.descent_window = g.at("descent_window").get<int>();
    r.descent_threshold = g.at("descent_threshold").get<double>();
    r.runs = g.at("runs").get<int>();
    r.value_floor = g.at("value_floor").get<double>();
    if (!g.at("time_budget").is_null()) r.time_budget = g.at("time_budget").get<double>();
    const auto& o = j.at("oracle");
    r.restarts = o.at("restarts").get<int>();
    r.max_sweeps = o.at("max_sweeps").get<int>();
    r.sweep_tol = o.at("sweep_tol").get<double>();
    r.warm_start = o.at("warm_start").get<bool>();
    for (const auto& s : j.at("runs")) {
      r.all_runs.push_back({s.at("seed").get<std::uint64_t>(), from_number_or_marker(s.at("best_value")),
                            s.at("iterations").get<long>(),
                            parse_status(s.at("status").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

nlohmann::json solver_metadata(const SolverOptions& opts) {
  const GilbertConfig& g = opts.gilbert;
  return {
      {"version", kVersion},
      {"measure", to_string(opts.measure)},
      {"seed", opts.seed},
      {"threads", opts.threads},
      {"gilbert",
       {{"max_iterations", g.max_iterations},
        {"findmin_sections", g.findmin_sections},
        {"findmin_rounds", g.findmin_rounds},
        {"descent_window", g.descent_window},
        {"descent_threshold", g.descent_threshold},
        {"runs", g.runs},
        {"value_floor", g.value_floor},
        {"time_budget", g.time_budget ? nlohmann::json(*g.time_budget) : nlohmann::json(nullptr)}}},
      {"oracle",
       {{"restarts", opts.oracle.restarts},
        {"max_sweeps", opts.oracle.max_sweeps},
        {"sweep_tol", opts.oracle.sweep_tol},
        {"warm_start", opts.oracle.reuse_warm_starts}}},
      {"run_selection", "minimum best_value over independent runs"},
  };
}

}  // namespace entbound::cli
