#include "pacekit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "pacekit/oracle.hpp"
#include "pacekit/traceplan.hpp"
#include "parallel.hpp"

namespace pacekit {

Request auction_to_request(const AuctionEvent& event) {
  return Request{event.value - event.competing_bid, event.competing_bid};
}

double bid_from_multiplier(double value, double price) { return value / (1.0 + price); }

Trace sample_trace(std::span<const DistSpec> dists, Rng rng) {
  Trace trace;
  trace.requests.reserve(dists.size());
  for (std::size_t t = 0; t < dists.size(); ++t) {
    Rng period_rng = rng.fork(t);
    trace.requests.push_back(sample_request(dists[t], period_rng));
  }
  trace.general_position = compute_general_position(trace.requests);
  return trace;
}

Trace perturb_general_position(const Trace& trace, double scale, Rng rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("perturbation scale must be > 0");
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng attempt_rng = rng.fork(static_cast<std::uint64_t>(attempt));
    Trace out;
    out.requests.reserve(trace.requests.size());
    for (const Request& r : trace.requests) {
      out.requests.push_back(Request{r.f_coeff + attempt_rng.next_uniform(0.0, scale), r.b_coeff});
    }
    out.general_position = compute_general_position(out.requests);
    if (out.general_position) return out;
  }
  throw PerturbationFailed("duplicate ratios survived 16 perturbation attempts");
}

ScenarioConfig fragility_scenario(double epsilon, std::int64_t horizon) {
  if (horizon < 2 || horizon % 2 != 0) throw std::invalid_argument("horizon must be even");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("need 0 < epsilon < 1");

  ScenarioConfig config;
  config.params.horizon = horizon;
  config.params.budget = static_cast<double>(horizon) / 2.0;
  config.params.action_cap = 1.0;
  config.params.consumption_bound = 1.0;
  config.params.rate_bound = 2.0;
  config.params.reward_bound = 2.0;

  const UniformReward high{1.0 + epsilon, 1.0 + 2.0 * epsilon, 1.0};
  const UniformReward low{1.0 - epsilon, 1.0, 1.0};
  config.true_dists.assign(static_cast<std::size_t>(horizon), low);
  config.sample_dists.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    config.sample_dists.push_back(t <= horizon / 2 + 1 ? DistSpec{high} : DistSpec{low});
  }
  config.trials = 1;
  config.perturbation_scale = 1e-9;  // uniform draws tie with probability ~0
  return config;
}

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::dual_ftrl: return "ftrl";
    case Algo::static_dual: return "static";
    case Algo::fixed_target: return "fixed";
  }
  return "unknown";
}

namespace {

struct TrialOutputs {
  double reward = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

}  // namespace

std::vector<AlgoOutcome> run_monte_carlo(const ScenarioConfig& config,
                                         std::span<const Algo> algos,
                                         const ExperimentOptions& options) {
  validate_params(config.params);
  const auto horizon = static_cast<std::size_t>(config.params.horizon);
  if (config.true_dists.size() != horizon || config.sample_dists.size() != horizon) {
    throw LengthMismatch("distribution lists must have one entry per period");
  }
  for (const DistSpec& d : config.true_dists) {
    validate_dist(d);
    validate_dist_bounds(d, config.params);
  }
  for (const DistSpec& d : config.sample_dists) {
    validate_dist(d);
    validate_dist_bounds(d, config.params);
  }
  if (config.trials < 1) throw ConfigError("trials must be >= 1");

  const InstanceParams& params = config.params;
  const RegularizerSpec reg = make_regularizer(options.regularizer, params.rate_bound);
  const double eta = options.step_size > 0.0 ? options.step_size
                                             : default_step_size(reg, params.horizon);

  std::vector<FiniteSupport> finite;
  finite.reserve(horizon);
  double disc_bound = 0.0;
  for (const DistSpec& d : config.true_dists) {
    finite.push_back(to_finite(d, options.fluid_grid));
    disc_bound += discretization_bound(d, options.fluid_grid, params.action_cap);
  }
  const FluidSolution fluid = fluid_value(finite, params.budget, params.action_cap);

  double total_w = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    total_w += wasserstein(config.true_dists[t], config.sample_dists[t], params.action_cap);
  }

  const std::size_t n_algos = algos.size();
  std::vector<std::vector<TrialOutputs>> per_trial(
      n_algos, std::vector<TrialOutputs>(static_cast<std::size_t>(config.trials)));
  std::vector<std::vector<StepRecord>> first_traj(n_algos);

  std::mutex error_mutex;
  std::exception_ptr first_error;

  const Rng master(config.seed);
  detail::parallel_for(config.trials, options.threads, [&](std::int64_t trial) {
    {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (first_error) return;
    }
    try {
      const auto ti = static_cast<std::uint64_t>(trial);
      Trace trace = sample_trace(config.sample_dists, master.fork(rng_domain::kTrace).fork(ti));
      if (!trace.general_position) {
        if (config.perturbation_scale > 0.0) {
          trace = perturb_general_position(trace, config.perturbation_scale,
                                           master.fork(rng_domain::kPerturb).fork(ti));
        } else {
          throw DegenerateTrace("sampled trace has duplicate ratios; set perturbation_scale");
        }
      }
      const TargetPlan plan = learn_plan(trace, params.budget, params.action_cap);
      const std::vector<double> beta =
          benchmark_consumption(config.sample_dists, plan.empirical_dual, params.action_cap);
      const Trace stream = sample_trace(config.true_dists, master.fork(rng_domain::kStream).fork(ti));

      const double fixed_per_period = params.budget / static_cast<double>(params.horizon);
      for (std::size_t a = 0; a < n_algos; ++a) {
        const Algo algo = algos[a];
        // Targets used for the R2/R3 diagnostics: the plan for the tracking
        // and static policies, the stationary split for the baseline.
        const double* plan_targets =
            algo == Algo::fixed_target ? nullptr : plan.targets.data();

        double r3_sum = 0.0;
        auto observe = [&](const StepRecord& rec) {
          const std::size_t idx = static_cast<std::size_t>(rec.t - 1);
          const double target = plan_targets ? plan_targets[idx] : fixed_per_period;
          r3_sum += rec.price * (beta[idx] - target);
        };

        const bool keep_records = trial == 0 && options.record_first_trajectory;
        const RecordMode mode = keep_records ? RecordMode::full : RecordMode::lite;
        EpisodeResult episode;
        switch (algo) {
          case Algo::dual_ftrl:
            episode = run_dual_ftrl(stream.requests, plan, params, reg, eta, mode, observe);
            break;
          case Algo::static_dual:
            episode = run_static_dual(stream.requests, plan.empirical_dual, params, mode, observe);
            break;
          case Algo::fixed_target:
            episode = run_fixed_target(stream.requests, params, reg, eta, mode, observe);
            break;
        }

        TrialOutputs& out = per_trial[a][static_cast<std::size_t>(trial)];
        out.reward = episode.total_reward;
        const double total_targets =
            algo == Algo::fixed_target ? params.budget : plan.total_targets;
        out.r2 = params.rate_bound * std::max(total_targets - params.budget, 0.0);
        out.r3 = r3_sum;
        if (keep_records) first_traj[a] = std::move(episode.steps);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  });
  if (first_error) std::rethrow_exception(first_error);

  std::vector<AlgoOutcome> outcomes(n_algos);
  for (std::size_t a = 0; a < n_algos; ++a) {
    std::vector<double> rewards, r2s, r3s;
    rewards.reserve(per_trial[a].size());
    for (const TrialOutputs& t : per_trial[a]) {
      rewards.push_back(t.reward);
      r2s.push_back(t.r2);
      r3s.push_back(t.r3);
    }
    outcomes[a].algo = algos[a];
    outcomes[a].report = make_regret_report(fluid.value, rewards, r2s, r3s, total_w);
    outcomes[a].first_trajectory = std::move(first_traj[a]);
    outcomes[a].fluid_discretization_bound = disc_bound;
  }
  return outcomes;
}

double concentration_radius(double consumption_bound, std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  return 8.0 * consumption_bound * std::sqrt(t * std::log(t));
}

namespace {

// Distinct specs with multiplicities, so the expected-consumption curve is
// evaluated once per distinct distribution.
struct GroupedDists {
  std::vector<const DistSpec*> specs;
  std::vector<double> counts;
};

GroupedDists group_dists(std::span<const DistSpec> dists) {
  GroupedDists g;
  for (const DistSpec& d : dists) {
    bool found = false;
    for (std::size_t i = 0; i < g.specs.size(); ++i) {
      if (*g.specs[i] == d) {
        g.counts[i] += 1.0;
        found = true;
        break;
      }
    }
    if (!found) {
      g.specs.push_back(&d);
      g.counts.push_back(1.0);
    }
  }
  return g;
}

}  // namespace

ConcentrationResult concentration_check(std::span<const DistSpec> dists,
                                        const InstanceParams& params, std::int64_t trials,
                                        std::uint64_t seed) {
  for (const DistSpec& d : dists) validate_dist(d);
  ConcentrationResult result;
  result.trials = trials;
  result.radius = concentration_radius(params.consumption_bound, params.horizon);

  const GroupedDists grouped = group_dists(dists);
  std::vector<double> support_bps;
  for (const DistSpec* d : grouped.specs) {
    const std::vector<double> bps = support_breakpoints(*d);
    support_bps.insert(support_bps.end(), bps.begin(), bps.end());
  }

  const double cap = params.action_cap;
  auto expected_total = [&](double price) {
    double total = 0.0;
    for (std::size_t i = 0; i < grouped.specs.size(); ++i) {
      total += grouped.counts[i] * expected_consumption(*grouped.specs[i], price, cap);
    }
    return total;
  };

  std::vector<double> sups(static_cast<std::size_t>(trials), 0.0);
  const Rng master(seed);
  detail::parallel_for(trials, 0, [&](std::int64_t trial) {
    const Trace trace =
        sample_trace(dists, master.fork(rng_domain::kTrace).fork(static_cast<std::uint64_t>(trial)));

    // Sorted trace ratios with suffix consumption sums: the trace spend at a
    // price is the total weight of ratios >= price.
    std::vector<std::pair<double, double>> ratio_weight;
    ratio_weight.reserve(trace.requests.size());
    for (const Request& r : trace.requests) {
      if (r.f_coeff > 0.0 && r.b_coeff > 0.0) {
        ratio_weight.emplace_back(r.f_coeff / r.b_coeff, r.b_coeff * cap);
      }
    }
    std::sort(ratio_weight.begin(), ratio_weight.end());
    std::vector<double> suffix(ratio_weight.size() + 1, 0.0);
    for (std::size_t i = ratio_weight.size(); i-- > 0;) {
      suffix[i] = suffix[i + 1] + ratio_weight[i].second;
    }
    auto trace_total = [&](double price) {
      const auto it = std::lower_bound(
          ratio_weight.begin(), ratio_weight.end(), price,
          [](const std::pair<double, double>& rw, double p) { return rw.first < p; });
      return suffix[static_cast<std::size_t>(it - ratio_weight.begin())];
    };

    std::vector<double> grid;
    grid.reserve(ratio_weight.size() + support_bps.size());
    for (const auto& [ratio, weight] : ratio_weight) grid.push_back(ratio);
    grid.insert(grid.end(), support_bps.begin(), support_bps.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> probes;
    probes.reserve(2 * grid.size() + 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      probes.push_back(grid[i]);
      if (i + 1 < grid.size()) probes.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    probes.push_back(grid.empty() ? 1.0 : grid.back() + 1.0);

    double sup = 0.0;
    for (double price : probes) {
      sup = std::max(sup, std::abs(trace_total(price) - expected_total(price)));
    }
    sups[static_cast<std::size_t>(trial)] = sup;
  });

  for (double sup : sups) {
    result.max_observed = std::max(result.max_observed, sup);
    if (sup > result.radius) ++result.violations;
  }
  result.violation_rate =
      trials > 0 ? static_cast<double>(result.violations) / static_cast<double>(trials) : 0.0;
  return result;
}

}  // namespace pacekit
