#pragma once

// Scripted replays: drive the selector and its bookkeeping with forced
// outcomes instead of dynamics, to reproduce documented decision traces.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sailhelm/config.hpp"
#include "sailhelm/helming.hpp"

namespace sailhelm {

struct ScriptedAttempt {
  /// When set, the script is rejected unless this procedure is the one up.
  std::optional<ProcedureId> expect;
  bool success = false;
  double elapsed = 0.0;  // s, successes only
};

struct ScriptedCommand {
  /// Untested procedures whose exploration draw fires for this ordering.
  std::vector<ProcedureId> explore;
  /// When set, the script is rejected unless the ordering matches.
  std::optional<std::vector<ProcedureId>> expect_order;
  /// Outcomes in the order the attempts happen. An empty list only records
  /// the ordering.
  std::vector<ScriptedAttempt> attempts;
};

struct ReplayScript {
  SelectorConfig selector;
  HistoryMap initial_histories;
  std::vector<ScriptedCommand> commands;
};

struct ReplayStep {
  int command_index = 0;
  Ordering ordering;
  std::vector<TackAttemptRecord> attempts;
  /// Histories after the command's last attempt.
  HistoryMap histories;
};

struct ReplayTrace {
  std::vector<ReplayStep> steps;

  /// Every attempt record in order.
  [[nodiscard]] std::vector<TackAttemptRecord> attempts() const;
};

/// Scripted validation failure (inconsistent outcomes or expectations).
class ScriptError : public ConfigError {
 public:
  explicit ScriptError(const std::string& what) : ConfigError(what) {}
};

/// Replays the script on a fresh selector. Attempts run back to back on a
/// synthetic clock: a success lasts its elapsed time, a failure lasts the
/// timeout. Exploration draws are synthesised so that exactly the listed
/// procedures explore (exploration weight 0.05, ties by list position).
/// Throws ScriptError when the script cannot happen under the selector's
/// rules: exploring a tested entry or with a zero coefficient, a success
/// beyond the timeout, attempts after a success, or a failed expectation.
[[nodiscard]] ReplayTrace replay_outcomes(const ReplayScript& script);

[[nodiscard]] ReplayScript parse_replay_script(std::string_view json_text);
[[nodiscard]] ReplayScript load_replay_script(const std::filesystem::path& path);

}  // namespace sailhelm
