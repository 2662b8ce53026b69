#pragma once

// Run artefacts on disk: timesteps.csv, attempts.json, summary.json and the
// resolved config.json, plus the batch runner that produces many of them.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sailhelm/config.hpp"
#include "sailhelm/metrics.hpp"
#include "sailhelm/replay.hpp"
#include "sailhelm/scenario.hpp"

namespace sailhelm {

inline constexpr const char* kTimestepsFile = "timesteps.csv";
inline constexpr const char* kAttemptsFile = "attempts.json";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kTraceFile = "trace.json";
inline constexpr const char* kBatchSummaryFile = "batch_summary.json";

/// I/O failure or unreadable artefact.
class OutputError : public std::runtime_error {
 public:
  explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

[[nodiscard]] std::string timesteps_to_csv(const std::vector<TimestepRow>& rows);
[[nodiscard]] std::vector<TimestepRow> timesteps_from_csv(std::string_view text);

[[nodiscard]] std::string attempts_to_json(const std::vector<TackAttemptRecord>& attempts);
[[nodiscard]] std::vector<TackAttemptRecord> attempts_from_json(std::string_view text);

[[nodiscard]] std::string summary_to_json(const RunSummary& summary);

[[nodiscard]] std::string trace_to_json(const ReplayTrace& trace);

/// Creates `dir` and writes the four run files into it.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& config,
                       const RunResult& result);

/// Writes trace.json and attempts.json.
void write_replay_outputs(const std::filesystem::path& dir, const ReplayTrace& trace);

/// Recomputes the summary of a run directory from its config, timesteps and
/// attempts.
[[nodiscard]] RunSummary metrics_from_dir(const std::filesystem::path& dir);

struct BatchEntry {
  std::uint64_t seed = 0;
  RunSummary summary;
};

struct BatchResult {
  std::vector<BatchEntry> runs;  // ascending seed

  [[nodiscard]] int aborted_count() const;
};

/// Runs seeds first..last (inclusive) on up to `threads` workers, each seed
/// into `out/seed_<n>/`, then writes batch_summary.json. Results do not depend
/// on the thread count.
[[nodiscard]] BatchResult run_batch(const RunConfig& config, std::uint64_t first,
                                    std::uint64_t last, const std::filesystem::path& out,
                                    unsigned threads);

[[nodiscard]] std::string batch_summary_to_json(const BatchResult& batch);

}  // namespace sailhelm
