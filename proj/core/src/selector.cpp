#include "sailhelm/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "sailhelm/errors.hpp"

namespace sailhelm {

std::string_view to_string(ProcedureId id) {
  switch (id) {
    case ProcedureId::BasicTack: return "BasicTack";
    case ProcedureId::BasicJibe: return "BasicJibe";
    case ProcedureId::TackSheetOut: return "TackSheetOut";
    case ProcedureId::TackIncreaseAngleToWind: return "TackIncreaseAngleToWind";
  }
  return "Unknown";
}

std::optional<ProcedureId> procedure_from_string(std::string_view name) {
  for (ProcedureId id : kAllProcedures) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

// --- AttemptHistory -------------------------------------------------------

AttemptHistory::AttemptHistory(std::span<const double> values) {
  for (double v : values) push(v);
}

void AttemptHistory::push(double seconds) {
  if (!std::isfinite(seconds) || seconds <= 0.0) {
    throw InvalidInput("attempt durations must be finite and > 0");
  }
  if (times_.size() == kCapacity) times_.erase(times_.begin());
  times_.push_back(seconds);
}

double AttemptHistory::mean() const {
  if (times_.empty()) throw UsageError("mean of an empty attempt history");
  return std::accumulate(times_.begin(), times_.end(), 0.0) / static_cast<double>(times_.size());
}

// --- SelectorConfig -------------------------------------------------------

void SelectorConfig::validate() const {
  if (!std::isfinite(timeout) || timeout <= 0.0) throw InvalidInput("timeout must be > 0");
  if (!(exploration_coefficient >= 0.0 && exploration_coefficient <= 1.0)) {
    throw InvalidInput("exploration coefficient must be in [0, 1]");
  }
  if (initial_order.empty()) throw InvalidInput("procedure list must not be empty");
  for (std::size_t i = 0; i < initial_order.size(); ++i) {
    for (std::size_t j = i + 1; j < initial_order.size(); ++j) {
      if (initial_order[i] == initial_order[j]) {
        throw InvalidInput("duplicate procedure in list: " +
                           std::string(to_string(initial_order[i])));
      }
    }
  }
  // Untested weights must stay below every failure and above every success.
  if (timeout <= kInitPosSpacing * static_cast<double>(initial_order.size())) {
    throw InvalidInput("timeout must exceed 0.01 x number of procedures");
  }
}

// --- weighting ------------------------------------------------------------

double weight(const ProcedureEntry& entry, const SelectorConfig& config, int n_untested,
              UniformSource& rng) {
  if (!entry.time_list.empty()) return entry.time_list.mean();
  if (n_untested <= 0) {
    throw ContractViolation("untested entry but untested count is " + std::to_string(n_untested));
  }
  const double threshold = config.exploration_coefficient / static_cast<double>(n_untested);
  if (rng.uniform01() < threshold) return kExplorationWeightMax * rng.uniform01();
  return config.timeout + kInitPosSpacing * static_cast<double>(entry.init_pos);
}

// --- SelectorState --------------------------------------------------------

SelectorState::SelectorState(SelectorConfig config) : config_(std::move(config)) {
  config_.validate();
  entries_.reserve(config_.initial_order.size());
  for (std::size_t i = 0; i < config_.initial_order.size(); ++i) {
    entries_.push_back({config_.initial_order[i], AttemptHistory{}, static_cast<int>(i)});
  }
}

bool SelectorState::contains(ProcedureId id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [id](const ProcedureEntry& e) { return e.procedure == id; });
}

const ProcedureEntry& SelectorState::entry(ProcedureId id) const {
  for (const auto& e : entries_) {
    if (e.procedure == id) return e;
  }
  throw InvalidInput("procedure not in selector: " + std::string(to_string(id)));
}

ProcedureEntry& SelectorState::mutable_entry(ProcedureId id) {
  return const_cast<ProcedureEntry&>(std::as_const(*this).entry(id));
}

int SelectorState::untested_count() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [](const ProcedureEntry& e) { return e.time_list.empty(); }));
}

void SelectorState::set_history(ProcedureId id, AttemptHistory history) {
  mutable_entry(id).time_list = std::move(history);
}

Ordering SelectorState::begin_tack_command(UniformSource& rng) {
  const int n_untested = untested_count();

  struct Weighted {
    double weight;
    int init_pos;
    ProcedureId id;
  };
  std::vector<Weighted> weighted;
  weighted.reserve(entries_.size());
  // Draws happen in init_pos order so a seed fully determines the ordering.
  for (const auto& e : entries_) {
    weighted.push_back({weight(e, config_, n_untested, rng), e.init_pos, e.procedure});
  }
  std::sort(weighted.begin(), weighted.end(), [](const Weighted& a, const Weighted& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.init_pos < b.init_pos;
  });

  Ordering result;
  result.order.reserve(weighted.size());
  result.weights.reserve(weighted.size());
  for (const auto& w : weighted) {
    result.order.push_back(w.id);
    result.weights.push_back(w.weight);
  }
  current_order_ = result.order;
  cursor_ = 0;
  return result;
}

ProcedureId SelectorState::current_procedure() const {
  if (!ordered()) throw UsageError("no tack command has been started");
  return current_order_[cursor_];
}

void SelectorState::require_current(ProcedureId id) const {
  if (current_procedure() != id) {
    throw ContractViolation("outcome reported for " + std::string(to_string(id)) +
                            " but the active procedure is " +
                            std::string(to_string(current_procedure())));
  }
}

void SelectorState::record_success(ProcedureId id, double elapsed) {
  require_current(id);
  if (!std::isfinite(elapsed) || elapsed <= 0.0) {
    throw ContractViolation("success elapsed time must be > 0");
  }
  if (elapsed > config_.timeout + kTimeEpsilon) {
    throw ContractViolation("success reported after the timeout; record a failure instead");
  }
  mutable_entry(id).time_list.push(std::min(elapsed, config_.timeout));
}

ProcedureId SelectorState::record_failure_and_advance(ProcedureId id) {
  require_current(id);
  mutable_entry(id).time_list.push(kFailurePenaltyFactor * config_.timeout);
  cursor_ = (cursor_ + 1) % current_order_.size();
  return current_order_[cursor_];
}

}  // namespace sailhelm
