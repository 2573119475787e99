#include <benchmark/benchmark.h>

#include "edca/metrics.hpp"
#include "edca/sim.hpp"
#include "edca/solver.hpp"

using namespace edca;

namespace {

AcConfig ac_of(int cw_min, int aifsn, int qs, double load) {
  AcConfig ac;
  ac.name = "b";
  ac.aifsn = aifsn;
  ac.cw_min = cw_min;
  ac.m = 3;
  ac.retry_limit = 7;
  ac.queue_size = qs;
  ac.payload_bits = 1034 * 8;
  ac.flows = 5;
  ac.set_offered_load(load);
  return ac;
}

Scenario scenario(int qs, double load) {
  Scenario s;
  s.acs = {ac_of(15, 3, qs, load), ac_of(7, 2, qs, load)};
  return s;
}

} // namespace

static void MatrixBuild(benchmark::State& state) {
  const int qs = static_cast<int>(state.range(0));
  const AcConfig ac = ac_of(15, 3, qs, 2e6);
  const StateSpace space = StateSpace::enumerate(ac, 1);
  DurationSet ds;
  ds.t_s = 283e-6;
  ds.t_c = 281e-6;
  ds.t_exc = 256e-6;
  ds.t_bs = 30e-6;
  ds.t_b = 260e-6;
  ds.n_txop = 1;
  const ArrivalKernel kernel{ac.lambda, ac.queue_size};
  for (auto _ : state) {
    auto P = build_transition_matrix(space, 0.1, ds, kernel, kernel.rho(9e-6));
    benchmark::DoNotOptimize(P);
  }
  state.SetLabel(std::to_string(space.size()) + " states");
}
BENCHMARK(MatrixBuild)->Arg(2)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void SteadyState(benchmark::State& state) {
  const int qs = static_cast<int>(state.range(0));
  const AcConfig ac = ac_of(15, 3, qs, 2e6);
  const StateSpace space = StateSpace::enumerate(ac, 1);
  DurationSet ds;
  ds.t_s = 283e-6;
  ds.t_c = 281e-6;
  ds.t_exc = 256e-6;
  ds.t_bs = 30e-6;
  ds.t_b = 260e-6;
  ds.n_txop = 1;
  const ArrivalKernel kernel{ac.lambda, ac.queue_size};
  const auto P = build_transition_matrix(space, 0.1, ds, kernel, kernel.rho(9e-6));
  for (auto _ : state) {
    auto ss = steady_state(P);
    benchmark::DoNotOptimize(ss);
  }
  state.SetLabel(std::to_string(space.size()) + " states");
}
BENCHMARK(SteadyState)->Arg(2)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void FullSolve(benchmark::State& state) {
  const Scenario s = scenario(static_cast<int>(state.range(0)), 2e6);
  for (auto _ : state) {
    auto model = solve(s);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(FullSolve)->Arg(2)->Arg(10)->Unit(benchmark::kSecond);

static void SimulatorSecond(benchmark::State& state) {
  const Scenario s = scenario(10, 1e6 * state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto stats = run_sim(s, seed++, 1.0);
    benchmark::DoNotOptimize(stats);
  }
  state.SetLabel(std::to_string(state.range(0)) + " Mbps/flow, 1 simulated second");
}
BENCHMARK(SimulatorSecond)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
