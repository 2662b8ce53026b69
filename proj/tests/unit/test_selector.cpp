#include <algorithm>
#include <numeric>
#include <set>

#include <doctest.h>

#include "sailhelm/errors.hpp"
#include "sailhelm/selector.hpp"

using namespace sailhelm;

namespace {

constexpr auto BT = ProcedureId::BasicTack;
constexpr auto TSO = ProcedureId::TackSheetOut;
constexpr auto BJ = ProcedureId::BasicJibe;
constexpr auto TIATW = ProcedureId::TackIncreaseAngleToWind;

SelectorConfig fictional_config() { return {15.0, 0.3, {BT, TSO, BJ}}; }

AttemptHistory hist(std::vector<double> v) { return AttemptHistory(v); }

}  // namespace

TEST_SUITE("selector") {
  TEST_CASE("names round-trip") {
    for (ProcedureId id : kAllProcedures) CHECK(procedure_from_string(to_string(id)) == id);
    CHECK_FALSE(procedure_from_string("Capsize").has_value());
  }

  TEST_CASE("weight examples") {
    const SelectorConfig cfg = fictional_config();
    ScriptedUniform none;
    CHECK(weight({BT, hist({7, 8, 22.5}), 0}, cfg, 1, none) == 12.5);

    ScriptedUniform miss{0.99};
    CHECK(weight({BJ, {}, 2}, cfg, 1, miss) == doctest::Approx(15.02).epsilon(1e-15));

    ScriptedUniform hit{0.0, 0.73};
    const double w = weight({BJ, {}, 2}, cfg, 1, hit);
    CHECK(w >= 0.0);
    CHECK(w < kExplorationWeightMax);
  }

  TEST_CASE("exploration threshold is c / n_untested, strict") {
    const SelectorConfig cfg = fictional_config();
    ScriptedUniform at{0.1};  // c/n = 0.1 exactly: not below, no exploration
    CHECK(weight({TSO, {}, 1}, cfg, 3, at) == doctest::Approx(15.01));
    ScriptedUniform below{0.0999, 0.5};
    CHECK(weight({TSO, {}, 1}, cfg, 3, below) == doctest::Approx(0.05));
  }

  TEST_CASE("tested entries consume no draws") {
    ScriptedUniform none;
    CHECK(weight({BT, hist({10}), 0}, fictional_config(), 0, none) == 10.0);
    CHECK(none.remaining() == 0);
  }

  TEST_CASE("untested entry with zero untested count is a contract violation") {
    ScriptedUniform u{0.5};
    CHECK_THROWS_AS((void)weight({BT, {}, 0}, fictional_config(), 0, u), ContractViolation);
  }

  TEST_CASE("begin_tack_command examples") {
    SUBCASE("step 5 ordering") {
      SelectorState st(fictional_config());
      st.set_history(BT, hist({7, 8, 22.5}));
      st.set_history(TSO, hist({22.5}));
      st.set_history(BJ, hist({9}));
      ScriptedUniform none;
      const Ordering o = st.begin_tack_command(none);
      CHECK(o.order == std::vector{BJ, BT, TSO});
      CHECK(o.weights == std::vector{9.0, 12.5, 22.5});
    }
    SUBCASE("untouched list keeps the user order") {
      SelectorState st(fictional_config());
      ScriptedUniform miss{0.9, 0.9, 0.9};
      const Ordering o = st.begin_tack_command(miss);
      CHECK(o.order == std::vector{BT, TSO, BJ});
      CHECK(o.weights[0] == doctest::Approx(15.00));
      CHECK(o.weights[1] == doctest::Approx(15.01));
      CHECK(o.weights[2] == doctest::Approx(15.02));
    }
    SUBCASE("exploration puts TackSheetOut first") {
      SelectorState st(fictional_config());
      st.set_history(BT, hist({7}));
      // Untested TSO (n = 2): fires; BJ: misses.
      ScriptedUniform draws{0.01, 0.4, 0.9};
      const Ordering o = st.begin_tack_command(draws);
      CHECK(o.order.front() == TSO);
      CHECK(st.cursor() == 0);
    }
  }

  TEST_CASE("ties break by init_pos") {
    SelectorState st({15.0, 0.0, {TSO, BT, BJ}});
    st.set_history(BJ, hist({10}));
    st.set_history(BT, hist({10}));
    st.set_history(TSO, hist({10}));
    ScriptedUniform none;
    CHECK(st.begin_tack_command(none).order == std::vector{TSO, BT, BJ});
  }

  TEST_CASE("current_procedure") {
    SelectorState st(fictional_config());
    CHECK_THROWS_AS((void)st.current_procedure(), UsageError);
    ScriptedUniform miss{0.9, 0.9, 0.9};
    st.begin_tack_command(miss);
    CHECK(st.current_procedure() == BT);
    st.record_failure_and_advance(BT);
    st.record_failure_and_advance(TSO);
    CHECK(st.current_procedure() == BJ);

    SelectorState single({15.0, 0.3, {BJ}});
    ScriptedUniform m{0.9};
    single.begin_tack_command(m);
    CHECK(single.current_procedure() == BJ);
  }

  TEST_CASE("record_success") {
    SelectorState st(fictional_config());
    ScriptedUniform miss{0.9, 0.9, 0.9};
    st.begin_tack_command(miss);
    st.record_success(BT, 7.0);
    CHECK(std::vector<double>(st.entry(BT).time_list.values().begin(),
                              st.entry(BT).time_list.values().end()) == std::vector{7.0});
    CHECK(st.cursor() == 0);

    st.record_success(BT, 15.0);  // inclusive boundary
    CHECK(st.entry(BT).time_list.size() == 2);
    CHECK_THROWS_AS(st.record_success(BT, 15.0001), ContractViolation);
    CHECK_THROWS_AS(st.record_success(BT, 0.0), ContractViolation);
    CHECK_THROWS_AS(st.record_success(TSO, 3.0), ContractViolation);  // not the current entry
  }

  TEST_CASE("history capacity and eviction") {
    SelectorState st(fictional_config());
    ScriptedUniform draws;
    for (int i = 0; i < 3; ++i) draws.push(0.9);
    st.begin_tack_command(draws);
    for (int i = 1; i <= 11; ++i) st.record_success(BT, i);
    const auto v = st.entry(BT).time_list.values();
    CHECK(v.size() == 10);
    CHECK(v.front() == 2.0);
    CHECK(v.back() == 11.0);

    CHECK_THROWS_AS(AttemptHistory(std::vector<double>{1, -1}), InvalidInput);
    CHECK(AttemptHistory(std::vector<double>(12, 3.0)).size() == 10);
  }

  TEST_CASE("record_failure_and_advance") {
    SelectorState st(fictional_config());
    ScriptedUniform miss{0.9, 0.9, 0.9};
    st.begin_tack_command(miss);
    CHECK(st.record_failure_and_advance(BT) == TSO);
    CHECK(st.entry(BT).time_list.values().back() == 22.5);
    CHECK(st.record_failure_and_advance(TSO) == BJ);
    CHECK(st.record_failure_and_advance(BJ) == BT);  // wraps to the top
    CHECK(st.cursor() == 0);
    CHECK(st.current_order() == std::vector{BT, TSO, BJ});
  }

  TEST_CASE("config validation") {
    CHECK_THROWS_AS(SelectorState({0.0, 0.3, {BT}}), InvalidInput);
    CHECK_THROWS_AS(SelectorState({15.0, 1.5, {BT}}), InvalidInput);
    CHECK_THROWS_AS(SelectorState({15.0, -0.1, {BT}}), InvalidInput);
    CHECK_THROWS_AS(SelectorState({15.0, 0.3, {}}), InvalidInput);
    CHECK_THROWS_AS(SelectorState({15.0, 0.3, {BT, BT}}), InvalidInput);
    CHECK_THROWS_AS(SelectorState({0.03, 0.3, {BT, TSO, BJ, TIATW}}), InvalidInput);
    CHECK_NOTHROW(SelectorState({1.0, 1.0, {BT, TSO, BJ, TIATW}}));
  }

  TEST_CASE("ordering properties under random histories") {
    Rng rng(2024);
    const SelectorConfig cfg{30.0, 0.3, {BT, TSO, TIATW, BJ}};
    for (int trial = 0; trial < 2000; ++trial) {
      SelectorState st(cfg);
      for (ProcedureId id : cfg.initial_order) {
        const int n = static_cast<int>(rng.uniform01() * 12) - 2;  // some stay untested
        std::vector<double> v;
        for (int k = 0; k < n; ++k) v.push_back(rng.uniform01() < 0.3 ? 45.0 : 1.0 + 29.0 * rng.uniform01());
        st.set_history(id, AttemptHistory(v));
      }
      SelectorState twin = st;
      const std::uint64_t seed = 100 + static_cast<std::uint64_t>(trial);
      Rng a(seed);
      Rng b(seed);
      const Ordering o = st.begin_tack_command(a);
      CHECK(twin.begin_tack_command(b).order == o.order);  // determinism

      std::multiset<ProcedureId> got(o.order.begin(), o.order.end());
      CHECK(got == std::multiset<ProcedureId>(cfg.initial_order.begin(), cfg.initial_order.end()));
      CHECK(std::is_sorted(o.weights.begin(), o.weights.end()));

      const auto order = st.current_order();
      for (int k = 0; k < 9; ++k) {
        st.record_failure_and_advance(st.current_procedure());
        CHECK(st.current_order() == order);  // no reorder within a command
      }
    }
  }

  TEST_CASE("a failure never lowers the mean") {
    Rng rng(5);
    const double penalty = kFailurePenaltyFactor * 15.0;
    for (int trial = 0; trial < 5000; ++trial) {
      std::vector<double> v;
      const int n = 1 + static_cast<int>(rng.uniform01() * 10);
      for (int k = 0; k < n; ++k) v.push_back(rng.uniform01() < 0.4 ? penalty : 0.5 + 14.5 * rng.uniform01());
      AttemptHistory h(v);
      const double before = h.mean();
      const double evicted = h.size() == AttemptHistory::kCapacity ? h.values().front() : -1.0;
      h.push(penalty);
      CHECK(h.mean() >= before - 1e-12);
      // Strict unless the mean (or, when full, the evicted value) already equals the penalty.
      const bool strict = evicted >= 0.0 ? evicted < penalty : before < penalty;
      if (strict) CHECK(h.mean() > before);
      else CHECK(h.mean() == doctest::Approx(before));
    }
  }

  TEST_CASE("untested weights sit between successes and failures") {
    const SelectorConfig cfg{15.0, 0.3, {BT, TSO, TIATW, BJ}};
    const double n = static_cast<double>(cfg.initial_order.size());
    for (int pos = 0; pos < 4; ++pos) {
      ScriptedUniform miss{0.99};
      const double w = weight({cfg.initial_order[pos], {}, pos}, cfg, 1, miss);
      CHECK(w >= cfg.timeout);
      CHECK(w < cfg.timeout + kInitPosSpacing * n);
      CHECK(w < kFailurePenaltyFactor * cfg.timeout);
    }
  }
}
