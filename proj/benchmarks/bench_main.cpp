#include <vector>

#include <benchmark/benchmark.h>

#include "sailhelm/config.hpp"
#include "sailhelm/geometry.hpp"
#include "sailhelm/random.hpp"
#include "sailhelm/scenario.hpp"
#include "sailhelm/selector.hpp"
#include "sailhelm/simulator.hpp"

using namespace sailhelm;

namespace {

void BM_SelectorOrdering(benchmark::State& state) {
  SelectorState sel({15.0, 0.3,
                     {ProcedureId::BasicTack, ProcedureId::TackSheetOut,
                      ProcedureId::TackIncreaseAngleToWind, ProcedureId::BasicJibe}});
  const std::vector<double> tack = {7, 8, 22.5, 9, 6, 7, 22.5, 8, 7, 6};
  const std::vector<double> jibe = {9, 10};
  sel.set_history(ProcedureId::BasicTack, AttemptHistory(tack));
  sel.set_history(ProcedureId::BasicJibe, AttemptHistory(jibe));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sel.begin_tack_command(rng));
}
BENCHMARK(BM_SelectorOrdering);

void BM_StepBoat(benchmark::State& state) {
  const SimConfig cfg;
  EnvState env;
  env.wave_height = 0.2;
  BoatPhysState boat;
  boat.heading = Bearing(310);
  boat.speed = 0.75;
  for (auto _ : state) {
    boat = step_boat(boat, {5.0, 0.0}, env, cfg.dt, cfg);
    benchmark::DoNotOptimize(boat);
  }
}
BENCHMARK(BM_StepBoat);

void BM_StepEnv(benchmark::State& state) {
  const SimConfig cfg;
  EnvState env;
  Rng rng(2);
  for (auto _ : state) {
    env = step_env(env, cfg.dt, rng);
    benchmark::DoNotOptimize(env);
  }
}
BENCHMARK(BM_StepEnv);

void BM_ManoeuvreTrial(benchmark::State& state) {
  ManoeuvreTrialConfig c;
  c.procedure = ProcedureId::BasicTack;
  c.wind_speed = 1.5;
  c.wave_height = 0.2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = ++seed;
    benchmark::DoNotOptimize(run_manoeuvre_trial(c));
  }
}
BENCHMARK(BM_ManoeuvreTrial)->Unit(benchmark::kMicrosecond);

void BM_FullScenario(benchmark::State& state) {
  RunConfig c;
  c.navigation.waypoints = {{0, 40}, {0, 0}};
  c.max_sim_time = 1200;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = ++seed;
    benchmark::DoNotOptimize(run_scenario(c));
  }
}
BENCHMARK(BM_FullScenario)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
