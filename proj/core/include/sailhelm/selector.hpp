#pragma once

// Adaptive ordering of tack procedures.
//
// Each procedure keeps the durations of its last ten attempts; a failed
// attempt is stored as 1.5 x timeout. Before every tack command the list is
// sorted by weight (mean duration, or a placeholder for never-tried entries)
// and then tried in order until one succeeds, wrapping to the top when the
// end is reached. The order stays fixed for the whole command.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sailhelm/random.hpp"

namespace sailhelm {

enum class ProcedureId : std::uint8_t {
  BasicTack,
  BasicJibe,
  TackSheetOut,
  TackIncreaseAngleToWind,
};

inline constexpr std::array<ProcedureId, 4> kAllProcedures = {
    ProcedureId::BasicTack, ProcedureId::BasicJibe, ProcedureId::TackSheetOut,
    ProcedureId::TackIncreaseAngleToWind};

[[nodiscard]] std::string_view to_string(ProcedureId id);
[[nodiscard]] std::optional<ProcedureId> procedure_from_string(std::string_view name);

/// Failures are recorded as this multiple of the timeout.
inline constexpr double kFailurePenaltyFactor = 1.5;
/// Untested entries sit at timeout + kInitPosSpacing * init_pos.
inline constexpr double kInitPosSpacing = 0.01;
/// Exploration weights are drawn from [0, kExplorationWeightMax).
inline constexpr double kExplorationWeightMax = 0.1;
/// Absorbs floating-point drift in accumulated simulation time.
inline constexpr double kTimeEpsilon = 1e-9;

/// Durations of the most recent attempts, oldest evicted first.
class AttemptHistory {
 public:
  static constexpr std::size_t kCapacity = 10;

  AttemptHistory() = default;
  /// Keeps the last kCapacity values. Throws InvalidInput on a value <= 0.
  explicit AttemptHistory(std::span<const double> values);

  void push(double seconds);

  [[nodiscard]] bool empty() const { return times_.empty(); }
  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] std::span<const double> values() const { return times_; }
  /// Arithmetic mean. Throws UsageError when empty.
  [[nodiscard]] double mean() const;

  friend bool operator==(const AttemptHistory&, const AttemptHistory&) = default;

 private:
  std::vector<double> times_;
};

struct ProcedureEntry {
  ProcedureId procedure;
  AttemptHistory time_list;
  int init_pos = 0;
};

struct SelectorConfig {
  double timeout = 15.0;
  double exploration_coefficient = 0.3;
  std::vector<ProcedureId> initial_order = {ProcedureId::BasicTack, ProcedureId::TackSheetOut,
                                            ProcedureId::BasicJibe};

  /// Throws InvalidInput describing the first violated constraint.
  void validate() const;
  friend bool operator==(const SelectorConfig&, const SelectorConfig&) = default;
};

/// Weight used for sorting: lower is tried first.
///
/// Tested entries weigh their mean duration. An untested entry is moved to
/// the top with probability exploration_coefficient / n_untested (weight in
/// [0, 0.1)), and otherwise weighs timeout + 0.01 * init_pos, which places it
/// after every success and before every failure.
[[nodiscard]] double weight(const ProcedureEntry& entry, const SelectorConfig& config,
                            int n_untested, UniformSource& rng);

struct Ordering {
  std::vector<ProcedureId> order;
  std::vector<double> weights;  // aligned with `order`
};

class SelectorState {
 public:
  /// Validates the config. Entries start with empty histories.
  explicit SelectorState(SelectorConfig config);

  [[nodiscard]] const SelectorConfig& config() const { return config_; }
  [[nodiscard]] std::span<const ProcedureEntry> entries() const { return entries_; }
  /// Throws InvalidInput if `id` is not in this selector.
  [[nodiscard]] const ProcedureEntry& entry(ProcedureId id) const;
  [[nodiscard]] bool contains(ProcedureId id) const;
  [[nodiscard]] int untested_count() const;

  /// Replaces a history wholesale (persisted state, scripted starting points).
  void set_history(ProcedureId id, AttemptHistory history);

  /// Weighs every entry, sorts ascending (ties by init_pos), resets the cursor.
  Ordering begin_tack_command(UniformSource& rng);

  [[nodiscard]] bool ordered() const { return !current_order_.empty(); }
  [[nodiscard]] const std::vector<ProcedureId>& current_order() const { return current_order_; }
  [[nodiscard]] std::size_t cursor() const { return cursor_; }

  /// Throws UsageError before the first begin_tack_command.
  [[nodiscard]] ProcedureId current_procedure() const;

  /// Elapsed must be in (0, timeout]; the boundary counts as success.
  void record_success(ProcedureId id, double elapsed);

  /// Records 1.5 x timeout and moves to the next entry, wrapping to the top
  /// of the same order. Returns the new current procedure.
  ProcedureId record_failure_and_advance(ProcedureId id);

 private:
  ProcedureEntry& mutable_entry(ProcedureId id);
  void require_current(ProcedureId id) const;

  SelectorConfig config_;
  std::vector<ProcedureEntry> entries_;  // indexed by init_pos
  std::vector<ProcedureId> current_order_;
  std::size_t cursor_ = 0;
};

}  // namespace sailhelm
