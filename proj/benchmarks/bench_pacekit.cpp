#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "pacekit/bench.hpp"
#include "pacekit/oracle.hpp"
#include "pacekit/pacing.hpp"
#include "pacekit/rng.hpp"
#include "pacekit/sim.hpp"
#include "pacekit/traceplan.hpp"

using namespace pacekit;

namespace {

Trace random_trace(std::int64_t horizon, std::uint64_t seed, bool sorted) {
  Rng rng(seed);
  Trace trace;
  trace.requests.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 0; t < horizon; ++t) {
    trace.requests.push_back({rng.next_uniform(0.01, 2.0), rng.next_uniform(0.05, 1.0)});
  }
  if (sorted) {
    std::sort(trace.requests.begin(), trace.requests.end(),
              [](const Request& a, const Request& b) {
                return bang_per_buck(a) < bang_per_buck(b);
              });
  }
  trace.general_position = compute_general_position(trace.requests);
  return trace;
}

InstanceParams params_for(std::int64_t horizon) {
  InstanceParams p;
  p.horizon = horizon;
  p.budget = 0.4 * static_cast<double>(horizon);
  p.action_cap = 1.0;
  p.consumption_bound = 1.0;
  p.reward_bound = 4.0;
  p.rate_bound = 4.0;
  return p;
}

void BM_LearnPlanShuffled(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const Trace trace = random_trace(horizon, 1, false);
  const InstanceParams p = params_for(horizon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn_plan(trace, p.budget, p.action_cap));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_LearnPlanShuffled)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_LearnPlanPresorted(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const Trace trace = random_trace(horizon, 1, true);
  const InstanceParams p = params_for(horizon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn_plan(trace, p.budget, p.action_cap));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_LearnPlanPresorted)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BruteForceDual(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const Trace trace = random_trace(horizon, 2, false);
  const InstanceParams p = params_for(horizon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_dual(trace, p.budget, p.action_cap));
  }
}
BENCHMARK(BM_BruteForceDual)->Arg(1000)->Arg(10000);

void BM_FtrlEpisode(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const Trace trace = random_trace(horizon, 3, false);
  const InstanceParams p = params_for(horizon);
  const RegularizerSpec reg = make_regularizer(RegularizerKind::quadratic, p.rate_bound);
  const TargetPlan plan = learn_plan(trace, p.budget, p.action_cap);
  const double eta = default_step_size(reg, horizon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_dual_ftrl(trace.requests, plan, p, reg, eta, RecordMode::lite));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_FtrlEpisode)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_FluidValue(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  Rng rng(4);
  const DistSpec uniform = UniformReward{0.5, 1.5, 1.0};
  std::vector<FiniteSupport> dists(static_cast<std::size_t>(horizon), to_finite(uniform, 64));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fluid_value(dists, 0.4 * static_cast<double>(horizon), 1.0));
  }
}
BENCHMARK(BM_FluidValue)->Arg(100)->Arg(1000)->Arg(10000);

void BM_HindsightOpt(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const Trace trace = random_trace(horizon, 5, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hindsight_opt(trace.requests, 0.4 * static_cast<double>(horizon), 1.0));
  }
}
BENCHMARK(BM_HindsightOpt)->Arg(1000)->Arg(10000);

void BM_WassersteinTransport(benchmark::State& state) {
  Rng rng(6);
  FiniteSupport p, q;
  for (int i = 0; i < 8; ++i) {
    p.atoms.push_back({rng.next_uniform(0, 2), rng.next_uniform(0.1, 1.0), 0.125});
    q.atoms.push_back({rng.next_uniform(0, 2), rng.next_uniform(0.1, 1.0), 0.125});
  }
  const DistSpec dp = p, dq = q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wasserstein(dp, dq, 1.0));
  }
}
BENCHMARK(BM_WassersteinTransport);

}  // namespace

BENCHMARK_MAIN();
