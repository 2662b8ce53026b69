#include "sailhelm/output.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace sailhelm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader =
    "t,x,y,heading,speed,yaw_rate,rel_wind,rudder,sheet,mode,active_procedure";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << text;
  if (!out) throw OutputError("error while writing " + path.string());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json order_json(const std::vector<ProcedureId>& order) {
  json out = json::array();
  for (ProcedureId id : order) out.push_back(std::string(to_string(id)));
  return out;
}

json attempt_json(const TackAttemptRecord& a) {
  return {{"command_index", a.command_index},
          {"procedure", std::string(to_string(a.procedure))},
          {"t_start", a.t_start},
          {"t_end", a.t_end},
          {"outcome", to_string(a.outcome)},
          {"elapsed", a.elapsed},
          {"recorded_value", a.recorded_value},
          {"order_snapshot", order_json(a.order_snapshot)}};
}

json histories_json(const HistoryMap& histories) {
  json out = json::object();
  for (const auto& [id, values] : histories) out[std::string(to_string(id))] = values;
  return out;
}

ProcedureId parse_procedure(const std::string& s, const std::string& ctx) {
  const auto id = procedure_from_string(s);
  if (!id) throw OutputError(ctx + ": unknown procedure '" + s + "'");
  return *id;
}

}  // namespace

// --- timesteps ----------------------------------------------------------------

std::string timesteps_to_csv(const std::vector<TimestepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  char buf[256];
  for (const auto& r : rows) {
    const std::string active = r.active_procedure ? std::string(to_string(*r.active_procedure)) : "";
    std::snprintf(buf, sizeof buf, "%.3f,%.6f,%.6f,%.4f,%.6f,%.6f,%.4f,%.4f,%.4f,%s,%s\n", r.t, r.x,
                  r.y, r.heading, r.speed, r.yaw_rate, r.rel_wind, r.rudder, r.sheet,
                  to_string(r.mode), active.c_str());
    out += buf;
  }
  return out;
}

std::vector<TimestepRow> timesteps_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw OutputError("timesteps.csv: unexpected header");
  }
  std::vector<TimestepRow> rows;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 11) throw OutputError("timesteps.csv line " + std::to_string(n) + ": expected 11 fields");
    TimestepRow r;
    try {
      r.t = std::stod(f[0]);
      r.x = std::stod(f[1]);
      r.y = std::stod(f[2]);
      r.heading = std::stod(f[3]);
      r.speed = std::stod(f[4]);
      r.yaw_rate = std::stod(f[5]);
      r.rel_wind = std::stod(f[6]);
      r.rudder = std::stod(f[7]);
      r.sheet = std::stod(f[8]);
    } catch (const std::exception&) {
      throw OutputError("timesteps.csv line " + std::to_string(n) + ": bad number");
    }
    if (f[9] == "Cruise") {
      r.mode = HelmMode::Cruise;
    } else if (f[9] == "Tacking") {
      r.mode = HelmMode::Tacking;
    } else {
      throw OutputError("timesteps.csv line " + std::to_string(n) + ": bad mode '" + f[9] + "'");
    }
    if (!f[10].empty()) r.active_procedure = parse_procedure(f[10], "timesteps.csv");
    rows.push_back(r);
  }
  return rows;
}

// --- attempts -----------------------------------------------------------------

std::string attempts_to_json(const std::vector<TackAttemptRecord>& attempts) {
  json out = json::array();
  for (const auto& a : attempts) out.push_back(attempt_json(a));
  return out.dump(2) + "\n";
}

std::vector<TackAttemptRecord> attempts_from_json(std::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_array()) throw OutputError("attempts.json: expected a list");
  std::vector<TackAttemptRecord> out;
  try {
    for (const auto& a : doc) {
      TackAttemptRecord r;
      r.command_index = a.at("command_index").get<int>();
      r.procedure = parse_procedure(a.at("procedure").get<std::string>(), "attempts.json");
      r.t_start = a.at("t_start").get<double>();
      r.t_end = a.at("t_end").get<double>();
      const auto outcome = a.at("outcome").get<std::string>();
      if (outcome != "Success" && outcome != "Failure") {
        throw OutputError("attempts.json: bad outcome '" + outcome + "'");
      }
      r.outcome = outcome == "Success" ? AttemptOutcome::Success : AttemptOutcome::Failure;
      r.elapsed = a.at("elapsed").get<double>();
      r.recorded_value = a.at("recorded_value").get<double>();
      for (const auto& p : a.at("order_snapshot")) {
        r.order_snapshot.push_back(parse_procedure(p.get<std::string>(), "attempts.json"));
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw OutputError(std::string("attempts.json: ") + e.what());
  }
  return out;
}

// --- summary ------------------------------------------------------------------

namespace {

json summary_json(const RunSummary& s) {
  json attempts = json::object();
  json rates = json::object();
  json means = json::object();
  for (const auto& [id, st] : s.procedures) {
    const std::string n(to_string(id));
    attempts[n] = st.attempts;
    rates[n] = optional_number(st.success_rate);
    means[n] = optional_number(st.mean_success_time);
  }
  return {{"status", to_string(s.status)},
          {"tack_commands_issued", s.tack_commands_issued},
          {"total_attempts", s.total_attempts},
          {"attempts_per_procedure", attempts},
          {"success_rate_per_procedure", rates},
          {"mean_success_time_per_procedure", means},
          {"distance_made_good", s.distance_made_good},
          {"waypoints_reached", s.waypoints_reached},
          {"waypoints_total", s.waypoints_total},
          {"total_sim_time", s.total_sim_time}};
}

}  // namespace

std::string summary_to_json(const RunSummary& summary) { return summary_json(summary).dump(2) + "\n"; }

// --- replay trace -------------------------------------------------------------

std::string trace_to_json(const ReplayTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json weights = json::object();
    for (std::size_t i = 0; i < s.ordering.order.size(); ++i) {
      weights[std::string(to_string(s.ordering.order[i]))] = s.ordering.weights[i];
    }
    json attempts = json::array();
    for (const auto& a : s.attempts) attempts.push_back(attempt_json(a));
    steps.push_back({{"command_index", s.command_index},
                     {"order", order_json(s.ordering.order)},
                     {"weights", weights},
                     {"attempts", attempts},
                     {"histories", histories_json(s.histories)}});
  }
  return json{{"steps", steps}}.dump(2) + "\n";
}

// --- directories --------------------------------------------------------------

void write_run_outputs(const fs::path& dir, const RunConfig& config, const RunResult& result) {
  fs::create_directories(dir);
  write_file(dir / kConfigFile, dump_run_config(config));
  write_file(dir / kTimestepsFile, timesteps_to_csv(result.timesteps));
  write_file(dir / kAttemptsFile, attempts_to_json(result.attempts));
  write_file(dir / kSummaryFile, summary_to_json(result.summary));
}

void write_replay_outputs(const fs::path& dir, const ReplayTrace& trace) {
  fs::create_directories(dir);
  write_file(dir / kTraceFile, trace_to_json(trace));
  write_file(dir / kAttemptsFile, attempts_to_json(trace.attempts()));
}

RunSummary metrics_from_dir(const fs::path& dir) {
  const RunConfig config = load_run_config(dir / kConfigFile);
  return compute_metrics(timesteps_from_csv(read_file(dir / kTimestepsFile)),
                         attempts_from_json(read_file(dir / kAttemptsFile)), config);
}

// --- batch --------------------------------------------------------------------

int BatchResult::aborted_count() const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const BatchEntry& e) {
    return e.summary.status == RunStatus::Timeout;
  }));
}

BatchResult run_batch(const RunConfig& config, std::uint64_t first, std::uint64_t last,
                      const fs::path& out, unsigned threads) {
  if (last < first) throw ConfigError("seed range is empty");
  config.validate();
  const std::uint64_t count = last - first + 1;
  BatchResult batch;
  batch.runs.resize(count);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      try {
        RunConfig c = config;
        c.seed = first + i;
        const RunResult r = run_scenario(c);
        write_run_outputs(out / ("seed_" + std::to_string(c.seed)), c, r);
        batch.runs[i] = {c.seed, r.summary};
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };

  const auto n = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, count));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  write_file(out / kBatchSummaryFile, batch_summary_to_json(batch));
  return batch;
}

std::string batch_summary_to_json(const BatchResult& batch) {
  json runs = json::array();
  std::map<ProcedureId, std::pair<int, int>> totals;  // attempts, successes
  int completed = 0;
  for (const auto& e : batch.runs) {
    runs.push_back({{"seed", e.seed},
                    {"status", to_string(e.summary.status)},
                    {"tack_commands_issued", e.summary.tack_commands_issued},
                    {"total_attempts", e.summary.total_attempts},
                    {"distance_made_good", e.summary.distance_made_good},
                    {"waypoints_reached", e.summary.waypoints_reached},
                    {"total_sim_time", e.summary.total_sim_time}});
    if (e.summary.status == RunStatus::Completed) ++completed;
    for (const auto& [id, st] : e.summary.procedures) {
      totals[id].first += st.attempts;
      totals[id].second += st.successes;
    }
  }
  json procs = json::object();
  for (const auto& [id, t] : totals) {
    procs[std::string(to_string(id))] = {
        {"attempts", t.first},
        {"successes", t.second},
        {"success_rate", t.first > 0 ? json(double(t.second) / t.first) : json(nullptr)}};
  }
  return json{{"runs", runs},
              {"completed_runs", completed},
              {"aborted_runs", batch.aborted_count()},
              {"procedures", procs}}
             .dump(2) +
         "\n";
}

}  // namespace sailhelm
