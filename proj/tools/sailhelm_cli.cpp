// sailhelm: run, replay, batch and summarise tack-selection experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 run aborted at max_sim_time.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sailhelm/config.hpp"
#include "sailhelm/output.hpp"
#include "sailhelm/replay.hpp"
#include "sailhelm/scenario.hpp"

namespace fs = std::filesystem;
using namespace sailhelm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;

struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

SeedRange parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("--seeds must look like A..B, got '" + text + "'");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    SeedRange r{std::stoull(a, &used_a), std::stoull(b, &used_b)};
    if (used_a != a.size() || used_b != b.size() || a.front() == '-' || b.front() == '-') {
      throw std::invalid_argument("trailing characters");
    }
    if (r.last < r.first) throw ConfigError("--seeds range is empty: " + text);
    return r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("--seeds must look like A..B with non-negative integers, got '" + text + "'");
  }
}

int cmd_run(const fs::path& config_path, std::optional<std::uint64_t> seed, const fs::path& out,
            const std::vector<std::string>& overrides) {
  RunConfig config = load_run_config(config_path, overrides);
  if (seed) config.seed = *seed;

  std::optional<HistoryMap> start;
  if (!config.state_file.empty()) start = load_state_file(config.state_file);

  const RunResult result = run_scenario(config, start);
  write_run_outputs(out, config, result);
  if (!config.state_file.empty()) save_state_file(config.state_file, result.final_histories);

  const auto& s = result.summary;
  std::cout << to_string(s.status) << ": " << s.waypoints_reached << "/" << s.waypoints_total
            << " waypoints, " << s.tack_commands_issued << " tack commands, " << s.total_attempts
            << " attempts, " << s.total_sim_time << " s -> " << out.string() << "\n";
  return result.aborted() ? kExitAborted : kExitOk;
}

int cmd_replay(const fs::path& script_path, const fs::path& out) {
  const ReplayTrace trace = replay_outcomes(load_replay_script(script_path));
  write_replay_outputs(out, trace);
  for (const auto& step : trace.steps) {
    std::cout << "command " << step.command_index + 1 << ": [";
    for (std::size_t i = 0; i < step.ordering.order.size(); ++i) {
      std::cout << (i ? ", " : "") << to_string(step.ordering.order[i]) << " "
                << step.ordering.weights[i];
    }
    std::cout << "]";
    for (const auto& a : step.attempts) {
      std::cout << " " << to_string(a.procedure) << ":" << to_string(a.outcome);
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_batch(const fs::path& config_path, const std::string& seeds, const fs::path& out,
              const std::vector<std::string>& overrides, unsigned threads) {
  const RunConfig config = load_run_config(config_path, overrides);
  const SeedRange range = parse_seed_range(seeds);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const BatchResult batch = run_batch(config, range.first, range.last, out, threads);
  std::cout << batch.runs.size() - batch.aborted_count() << "/" << batch.runs.size()
            << " runs completed -> " << (out / kBatchSummaryFile).string() << "\n";
  return batch.aborted_count() > 0 ? kExitAborted : kExitOk;
}

int cmd_metrics(const fs::path& dir) {
  std::cout << summary_to_json(metrics_from_dir(dir));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive tack-procedure selection on a simulated sailing boat"};
  app.require_subcommand(1);

  fs::path config_path;
  fs::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one closed-loop scenario");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--set", overrides, "Override a config key, e.g. sim.wind.speed=3");

  fs::path script_path;
  auto* replay = app.add_subcommand("replay", "Replay scripted attempt outcomes");
  replay->add_option("--script", script_path, "JSON replay script")->required();
  replay->add_option("--out", out_dir, "Output directory")->required();

  std::string seeds;
  unsigned threads = 0;
  auto* batch = app.add_subcommand("batch", "Run a range of seeds");
  batch->add_option("--config", config_path, "JSON config file")->required();
  batch->add_option("--seeds", seeds, "Inclusive seed range A..B")->required();
  batch->add_option("--out", out_dir, "Output directory")->required();
  batch->add_option("--set", overrides, "Override a config key");
  batch->add_option("--threads", threads, "Worker threads (0 = all cores)");

  fs::path in_dir;
  auto* metrics = app.add_subcommand("metrics", "Recompute the summary of a run directory");
  metrics->add_option("--in", in_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out_dir, overrides);
    if (*replay) return cmd_replay(script_path, out_dir);
    if (*batch) return cmd_batch(config_path, seeds, out_dir, overrides, threads);
    if (*metrics) return cmd_metrics(in_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
