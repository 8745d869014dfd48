// Acceptance suite: one line per criterion, exit 0 only if all pass.
// Thresholds and tolerances are pinned in code; runtimes are measured and
// enforced where the criterion includes one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "pacekit/bench.hpp"
#include "pacekit/oracle.hpp"
#include "pacekit/sim.hpp"
#include "pacekit/verify.hpp"

using namespace pacekit;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({id, name, pass, detail});
  std::printf("[%s] criterion %02d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return std::string(buffer);
}

constexpr std::uint64_t kSeed = 20230601;

// Shared by criteria 2 and 11.
struct ScalingOutcome {
  std::vector<double> regrets;  // per horizon
  bool r2_ok = true;
  double runtime = 0.0;
};

void criterion_1_fragility() {
  const auto start = std::chrono::steady_clock::now();
  ScenarioConfig config = fragility_scenario(0.05, 10000);
  config.trials = 20;
  config.seed = kSeed;
  const std::vector<Algo> algos{Algo::static_dual, Algo::dual_ftrl};
  const std::vector<AlgoOutcome> outcomes = run_monte_carlo(config, algos);
  const RegretReport& stat = outcomes[0].report;
  const RegretReport& ftrl = outcomes[1].report;

  // Rewards are nonnegative, so a zero mean means zero in every trial.
  const bool static_zero = stat.mean_reward == 0.0 && stat.std_error == 0.0;
  const bool fluid_ok = ftrl.fluid_value >= 4750.0;
  const double ratio = ftrl.mean_reward / ftrl.fluid_value;
  const bool ftrl_ok = ftrl.mean_reward >= 0.8 * ftrl.fluid_value;
  const double elapsed = seconds_since(start);
  const bool time_ok = elapsed < 30.0;
  record(1, "fragility-reproduction", static_zero && fluid_ok && ftrl_ok && time_ok,
         fmt("static reward=%g in 20 trials (want 0); fluid=%.1f>=4750: %s; "
             "ftrl/fluid=%.3f>=0.8: %s; %.1fs<30s: %s",
             stat.mean_reward, ftrl.fluid_value, fluid_ok ? "yes" : "NO", ratio,
             ftrl_ok ? "yes" : "NO", elapsed, time_ok ? "yes" : "NO"));
}

ScalingOutcome criterion_2_scaling() {
  const auto start = std::chrono::steady_clock::now();
  const FiniteSupport dist{{{0.25, 1.0, 0.2},
                            {0.6, 0.8, 0.2},
                            {1.0, 0.9, 0.2},
                            {1.4, 0.8, 0.2},
                            {1.0, 0.5, 0.2}}};
  ScalingOutcome out;
  const std::vector<Algo> algos{Algo::dual_ftrl};
  for (const std::int64_t horizon : {1000, 4000, 16000}) {
    ScenarioConfig config;
    config.params.horizon = horizon;
    config.params.budget = 0.4 * static_cast<double>(horizon);  // 0.4 * b_bar * T
    config.params.action_cap = 1.0;
    config.params.consumption_bound = 1.0;
    config.params.reward_bound = 2.0;
    config.params.rate_bound = 2.0;
    config.true_dists.assign(static_cast<std::size_t>(horizon), DistSpec{dist});
    config.sample_dists = config.true_dists;
    config.seed = kSeed + static_cast<std::uint64_t>(horizon);
    config.trials = 50;
    // Thousands of draws repeat each atom; the perturbation window must be
    // wide enough in ulps that fresh noise separates every pair.
    config.perturbation_scale = 1e-7;
    ExperimentOptions options;
    options.regularizer = RegularizerKind::quadratic;
    options.record_first_trajectory = false;
    const std::vector<AlgoOutcome> outcomes = run_monte_carlo(config, algos, options);
    out.regrets.push_back(outcomes[0].report.regret);
    if (outcomes[0].report.r2 >
        config.params.rate_bound * config.params.consumption_bound) {
      out.r2_ok = false;
    }
  }
  out.runtime = seconds_since(start);

  const double ratio_a = out.regrets[1] / out.regrets[0];
  const double ratio_b = out.regrets[2] / out.regrets[1];
  const bool ratios_ok = ratio_a <= 3.0 && ratio_b <= 3.0;
  const bool time_ok = out.runtime < 300.0;
  record(2, "sublinear-regret-scaling", ratios_ok && time_ok,
         fmt("regret(T)=%.1f/%.1f/%.1f for T=1k/4k/16k; ratios %.2f, %.2f <= 3: %s; "
             "%.1fs<300s: %s",
             out.regrets[0], out.regrets[1], out.regrets[2], ratio_a, ratio_b,
             ratios_ok ? "yes" : "NO", out.runtime, time_ok ? "yes" : "NO"));
  return out;
}

void from_suite(int id, const std::string& name, const verify::SuiteResult& suite) {
  std::string detail = fmt("%lld violations in %lld instances",
                           static_cast<long long>(suite.violations),
                           static_cast<long long>(suite.instances));
  if (!suite.detail.empty()) detail += "; " + suite.detail;
  record(id, name, suite.pass(), detail);
}

void criterion_9_benchmark_ordering() {
  const std::int64_t horizon = 200;
  const FiniteSupport even{{{0.4, 1.0, 0.3}, {1.2, 0.8, 0.4}, {1.8, 1.0, 0.3}}};
  const FiniteSupport odd{{{0.2, 0.5, 0.5}, {1.5, 0.75, 0.5}}};
  std::vector<DistSpec> dists;
  std::vector<FiniteSupport> finite;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const FiniteSupport& d = (t % 2 == 0) ? even : odd;
    dists.push_back(d);
    finite.push_back(d);
  }
  const double budget = 70.0;
  const FluidSolution fluid = fluid_value(finite, budget, 1.0);

  Rng rng{kSeed};
  std::vector<double> opts;
  for (int trial = 0; trial < 1000; ++trial) {
    const Trace seq = sample_trace(dists, rng.fork(static_cast<std::uint64_t>(trial)));
    opts.push_back(hindsight_opt(seq.requests, budget, 1.0));
  }
  const double mean = pairwise_sum(opts) / static_cast<double>(opts.size());
  double var = 0.0;
  for (double v : opts) var += (v - mean) * (v - mean);
  var /= static_cast<double>(opts.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(opts.size()));
  const bool opt_ok = mean <= fluid.value + 3.0 * se;

  std::vector<double> grid{0.0};
  for (const FiniteSupport& d : finite) {
    for (const auto& atom : d.atoms) {
      if (atom.f_coeff > 0 && atom.b_coeff > 0) grid.push_back(atom.f_coeff / atom.b_coeff);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> probes = grid;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    probes.push_back(0.5 * (grid[g] + grid[g + 1]));
  }
  probes.push_back(grid.back() + 1.0);
  bool duality_ok = true;
  double worst_gap = 0.0;
  for (double price : probes) {
    const double gap = fluid.value - distributional_dual(finite, budget, 1.0, price);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-9) duality_ok = false;
  }
  record(9, "benchmark-ordering", opt_ok && duality_ok,
         fmt("mean OPT=%.2f <= fluid=%.2f + 3se=%.2f: %s; max duality gap=%.2e <= 1e-9: %s",
             mean, fluid.value, 3.0 * se, opt_ok ? "yes" : "NO", worst_gap,
             duality_ok ? "yes" : "NO"));
}

void criterion_11_overspend(const ScalingOutcome& scaling, const verify::SuiteResult& oracle,
                            const verify::SuiteResult& trace_dual) {
  // The instance suites of criteria 3 and 4 assert the overspend bound on
  // every plan they construct; scaling carries the worst R2 per horizon.
  const bool ok = scaling.r2_ok && oracle.pass() && trace_dual.pass();
  record(11, "overspend-bound", ok,
         fmt("rate_bound*(total targets - budget)^+ <= rate_bound*consumption_bound on all "
             "criterion 2-4 instances: %s",
             ok ? "yes" : "NO"));
}

}  // namespace

int main() {
  std::printf("pacekit acceptance suite (seed %llu)\n",
              static_cast<unsigned long long>(kSeed));

  criterion_1_fragility();
  const ScalingOutcome scaling = criterion_2_scaling();

  const verify::SuiteResult oracle_suite = verify::check_oracle_equivalence(kSeed, 1000);
  from_suite(3, "plan-oracle-equivalence", oracle_suite);
  const verify::SuiteResult trace_dual_suite = verify::check_trace_dual(kSeed, 1000);
  from_suite(4, "trace-dual", trace_dual_suite);
  from_suite(5, "monotonicity", verify::check_monotonicity(kSeed, 1000, 100));
  from_suite(6, "coupling", verify::check_coupling(kSeed, 200));

  {
    const verify::SuiteResult change = verify::check_change_in_target(kSeed, 200);
    const verify::SuiteResult loo = verify::check_leave_one_out(kSeed, 200);
    verify::SuiteResult merged = change;
    merged.instances += loo.instances;
    merged.violations += loo.violations;
    if (merged.detail.empty()) merged.detail = loo.detail;
    from_suite(7, "change-in-target", merged);
  }

  from_suite(8, "concentration", verify::check_concentration(kSeed, 1000));
  criterion_9_benchmark_ordering();
  from_suite(10, "ftrl-lazy-omd-equivalence", verify::check_ftrl_omd_equivalence(kSeed, 100));
  criterion_11_overspend(scaling, oracle_suite, trace_dual_suite);

  int passed = 0;
  for (const Criterion& c : g_results) passed += c.pass ? 1 : 0;
  std::printf("acceptance: %d/%zu criteria passed\n", passed, g_results.size());
  return passed == static_cast<int>(g_results.size()) ? 0 : 1;
}
