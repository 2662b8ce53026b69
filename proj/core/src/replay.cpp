#include "sailhelm/replay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sailhelm {

using nlohmann::json;

namespace {

constexpr double kNoExplorationDraw = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kExplorationWeightDraw = 0.5;

std::string name(ProcedureId id) { return std::string(to_string(id)); }

std::string where(std::size_t command) { return "command " + std::to_string(command + 1); }

ScriptedUniform synthesise_draws(const SelectorState& selector, const ScriptedCommand& cmd,
                                 std::size_t index) {
  const std::set<ProcedureId> explore(cmd.explore.begin(), cmd.explore.end());
  if (explore.size() != cmd.explore.size()) {
    throw ScriptError(where(index) + ": procedure listed twice under explore");
  }
  for (ProcedureId id : explore) {
    if (!selector.contains(id)) {
      throw ScriptError(where(index) + ": " + name(id) + " explores but is not in the list");
    }
    if (!selector.entry(id).time_list.empty()) {
      throw ScriptError(where(index) + ": " + name(id) + " explores but has already been tried");
    }
  }
  const int n_untested = selector.untested_count();
  const double threshold =
      n_untested > 0 ? selector.config().exploration_coefficient / n_untested : 0.0;

  ScriptedUniform draws;
  for (const auto& e : selector.entries()) {
    if (!e.time_list.empty()) continue;
    if (explore.contains(e.procedure)) {
      if (!(threshold > 0.0)) {
        throw ScriptError(where(index) + ": exploration cannot fire with a zero coefficient");
      }
      draws.push(0.0);
      draws.push(kExplorationWeightDraw);
    } else {
      if (kNoExplorationDraw < threshold) {
        throw ScriptError(where(index) + ": " + name(e.procedure) +
                          " explores with certainty and must be listed");
      }
      draws.push(kNoExplorationDraw);
    }
  }
  return draws;
}

}  // namespace

std::vector<TackAttemptRecord> ReplayTrace::attempts() const {
  std::vector<TackAttemptRecord> out;
  for (const auto& s : steps) out.insert(out.end(), s.attempts.begin(), s.attempts.end());
  return out;
}

ReplayTrace replay_outcomes(const ReplayScript& script) {
  SelectorState selector = [&] {
    try {
      return SelectorState(script.selector);
    } catch (const InvalidInput& e) {
      throw ScriptError(std::string("selector: ") + e.what());
    }
  }();
  for (const auto& [id, values] : script.initial_histories) {
    if (!selector.contains(id)) {
      throw ScriptError("initial history for " + name(id) + ", which is not in the list");
    }
    try {
      selector.set_history(id, AttemptHistory(values));
    } catch (const InvalidInput& e) {
      throw ScriptError("initial history for " + name(id) + ": " + e.what());
    }
  }

  TackBook book(std::move(selector));
  const double timeout = script.selector.timeout;
  ReplayTrace trace;
  double clock = 0.0;

  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    const ScriptedCommand& cmd = script.commands[i];
    ScriptedUniform draws = synthesise_draws(book.selector(), cmd, i);
    const std::size_t log_start = book.log().size();

    ReplayStep step;
    step.command_index = static_cast<int>(i);
    step.ordering = book.begin_command(clock, draws);
    if (cmd.expect_order && *cmd.expect_order != step.ordering.order) {
      std::string got;
      for (ProcedureId id : step.ordering.order) got += (got.empty() ? "" : ", ") + name(id);
      throw ScriptError(where(i) + ": ordering is [" + got + "], not the expected one");
    }

    for (std::size_t a = 0; a < cmd.attempts.size(); ++a) {
      const ScriptedAttempt& att = cmd.attempts[a];
      if (!book.in_command()) {
        throw ScriptError(where(i) + ": attempt " + std::to_string(a + 1) + " follows a success");
      }
      const ProcedureId up = book.active_procedure();
      if (att.expect && *att.expect != up) {
        throw ScriptError(where(i) + ", attempt " + std::to_string(a + 1) + ": " + name(up) +
                          " is up, the script expects " + name(*att.expect));
      }
      if (att.success) {
        if (!(att.elapsed > 0.0 && att.elapsed <= timeout)) {
          throw ScriptError(where(i) + ", attempt " + std::to_string(a + 1) +
                            ": a success needs 0 < elapsed <= timeout");
        }
        clock += att.elapsed;
        book.succeed(clock, att.elapsed);
      } else {
        clock += timeout;
        book.fail_and_advance(clock);
      }
    }
    // A command that ends without a success was interrupted; nothing more is recorded.
    if (book.in_command()) book.abandon();

    step.attempts.assign(book.log().begin() + static_cast<std::ptrdiff_t>(log_start),
                         book.log().end());
    step.histories = histories_of(book.selector());
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

// --- script files -----------------------------------------------------------

namespace {

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& ctx) {
  if (!obj.is_object()) throw ScriptError(ctx + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw ScriptError(ctx + ": unknown key '" + k + "'");
    }
  }
}

ProcedureId procedure_of(const json& v, const std::string& ctx) {
  if (!v.is_string()) throw ScriptError(ctx + " must name a procedure");
  const auto id = procedure_from_string(v.get<std::string>());
  if (!id) throw ScriptError(ctx + ": unknown procedure '" + v.get<std::string>() + "'");
  return *id;
}

std::vector<ProcedureId> procedure_list(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ScriptError(ctx + " must be a list of procedure names");
  std::vector<ProcedureId> out;
  for (const auto& item : v) out.push_back(procedure_of(item, ctx));
  return out;
}

double number_of(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw ScriptError(ctx + " must be a number");
  return v.get<double>();
}

}  // namespace

ReplayScript parse_replay_script(std::string_view json_text) {
  const json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (doc.is_discarded()) throw ScriptError("script is not valid JSON");
  allow_keys(doc, {"selector", "initial_histories", "commands"}, "script");

  ReplayScript script;
  if (doc.contains("selector")) {
    const json& s = doc.at("selector");
    allow_keys(s, {"timeout", "exploration_coefficient", "initial_order"}, "selector");
    if (s.contains("timeout")) script.selector.timeout = number_of(s.at("timeout"), "selector.timeout");
    if (s.contains("exploration_coefficient")) {
      script.selector.exploration_coefficient =
          number_of(s.at("exploration_coefficient"), "selector.exploration_coefficient");
    }
    if (s.contains("initial_order")) {
      script.selector.initial_order = procedure_list(s.at("initial_order"), "selector.initial_order");
    }
  }
  if (doc.contains("initial_histories")) {
    const json& h = doc.at("initial_histories");
    if (!h.is_object()) throw ScriptError("initial_histories must map names to lists of seconds");
    for (const auto& [key, values] : h.items()) {
      const ProcedureId id = procedure_of(json(key), "initial_histories");
      if (!values.is_array()) throw ScriptError("initial_histories." + key + " must be a list");
      auto& out = script.initial_histories[id];
      for (const auto& v : values) out.push_back(number_of(v, "initial_histories." + key));
    }
  }
  if (doc.contains("commands")) {
    const json& cmds = doc.at("commands");
    if (!cmds.is_array()) throw ScriptError("commands must be a list");
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      const std::string ctx = "commands[" + std::to_string(i) + "]";
      const json& c = cmds[i];
      allow_keys(c, {"explore", "expect_order", "attempts"}, ctx);
      ScriptedCommand cmd;
      if (c.contains("explore")) cmd.explore = procedure_list(c.at("explore"), ctx + ".explore");
      if (c.contains("expect_order")) {
        cmd.expect_order = procedure_list(c.at("expect_order"), ctx + ".expect_order");
      }
      if (c.contains("attempts")) {
        const json& atts = c.at("attempts");
        if (!atts.is_array()) throw ScriptError(ctx + ".attempts must be a list");
        for (std::size_t a = 0; a < atts.size(); ++a) {
          const std::string actx = ctx + ".attempts[" + std::to_string(a) + "]";
          const json& aj = atts[a];
          allow_keys(aj, {"procedure", "result", "elapsed"}, actx);
          ScriptedAttempt att;
          if (aj.contains("procedure")) att.expect = procedure_of(aj.at("procedure"), actx + ".procedure");
          if (!aj.contains("result") || !aj.at("result").is_string()) {
            throw ScriptError(actx + ".result must be \"success\" or \"failure\"");
          }
          const std::string result = aj.at("result").get<std::string>();
          if (result == "success") {
            att.success = true;
            if (!aj.contains("elapsed")) throw ScriptError(actx + ": a success needs elapsed");
            att.elapsed = number_of(aj.at("elapsed"), actx + ".elapsed");
          } else if (result == "failure") {
            if (aj.contains("elapsed")) throw ScriptError(actx + ": a failure takes no elapsed");
          } else {
            throw ScriptError(actx + ".result must be \"success\" or \"failure\"");
          }
          cmd.attempts.push_back(att);
        }
      }
      script.commands.push_back(std::move(cmd));
    }
  }
  return script;
}

ReplayScript load_replay_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScriptError("cannot open script " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_replay_script(buf.str());
  } catch (const ScriptError& e) {
    throw ScriptError(path.string() + ": " + e.what());
  }
}

}  // namespace sailhelm
