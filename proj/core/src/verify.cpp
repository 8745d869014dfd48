#include "pacekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pacekit/oracle.hpp"
#include "pacekit/pacing.hpp"
#include "pacekit/sim.hpp"
#include "pacekit/traceplan.hpp"

namespace pacekit::verify {

namespace {

std::string describe(std::uint64_t seed, std::int64_t index, const std::string& what) {
  std::ostringstream out;
  out << what << " (seed " << seed << ", instance " << index << ")";
  return out.str();
}

Request random_request(Rng& rng, const InstanceParams& p) {
  if (rng.next_unit() < 0.1) return Request{};
  const double b = rng.next_uniform(0.0, p.consumption_bound / p.action_cap);
  if (rng.next_unit() < 0.1) return Request{0.0, b};
  const double f_max = std::min(p.reward_bound / p.action_cap, p.rate_bound * b);
  return Request{rng.next_uniform(0.0, f_max), b};
}

}  // namespace

RandomInstance random_instance(Rng& rng, std::int64_t max_horizon) {
  while (true) {
    InstanceParams p;
    p.horizon = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(max_horizon)));
    p.action_cap = rng.next_uniform(0.5, 2.0);
    p.consumption_bound = rng.next_uniform(0.5, 2.0);
    p.rate_bound = rng.next_uniform(0.5, 4.0);
    p.reward_bound = p.rate_bound * p.consumption_bound * rng.next_uniform(0.5, 1.0);

    std::vector<Request> requests;
    double total_consumption = 0.0;
    for (std::int64_t t = 0; t < p.horizon; ++t) {
      requests.push_back(random_request(rng, p));
      total_consumption += requests.back().b_coeff * p.action_cap;
    }
    p.budget =
        rng.next_uniform(0.05, 1.25) * std::max(total_consumption, p.consumption_bound);

    if (!compute_general_position(requests)) continue;  // ~never for continuous draws
    return RandomInstance{p, validate_instance(p, std::move(requests))};
  }
}

SuiteResult check_trace_dual(std::uint64_t seed, std::int64_t instances) {
  SuiteResult result{"trace-dual", instances, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < instances; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng);
    const TargetPlan plan =
        learn_plan(inst.trace, inst.params.budget, inst.params.action_cap);
    const double b_bar = inst.params.consumption_bound;
    const double budget = inst.params.budget;
    const bool slack_case =
        plan.empirical_dual == 0.0 && plan.total_targets <= budget + b_bar;
    const bool tight_case = std::abs(budget - plan.total_targets) <= b_bar;
    const double overspend =
        inst.params.rate_bound * std::max(plan.total_targets - budget, 0.0);
    const bool r2_ok = overspend <= inst.params.rate_bound * b_bar;
    if (!(slack_case || tight_case) || !r2_ok) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "complementary slackness");
    }
  }
  return result;
}

SuiteResult check_oracle_equivalence(std::uint64_t seed, std::int64_t instances) {
  SuiteResult result{"plan-oracle-equivalence", instances, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < instances; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng);
    const double budget = inst.params.budget;
    const double cap = inst.params.action_cap;
    const TargetPlan plan = learn_plan(inst.trace, budget, cap);
    const double oracle_dual = brute_force_dual(inst.trace, budget, cap);

    bool ok = plan.empirical_dual == oracle_dual;
    for (std::size_t t = 0; ok && t < inst.trace.requests.size(); ++t) {
      ok = plan.targets[t] ==
           best_response(inst.trace.requests[t], plan.empirical_dual, cap).consumption;
    }
    const double overspend =
        inst.params.rate_bound * std::max(plan.total_targets - budget, 0.0);
    if (overspend > inst.params.rate_bound * inst.params.consumption_bound) ok = false;
    if (!ok) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "plan != oracle");
    }
  }
  return result;
}

SuiteResult check_monotonicity(std::uint64_t seed, std::int64_t requests, int grid_points) {
  SuiteResult result{"monotonicity", requests, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < requests; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const double cap = inst_rng.next_uniform(0.5, 2.0);
    const double b = inst_rng.next_uniform(0.0, 2.0);
    const double f = inst_rng.next_uniform(0.0, 4.0 * std::max(b, 0.25));
    const Request request{f, b};
    const double top = 1.5 * std::max(bang_per_buck(request), 1.0);
    double previous = best_response(request, 0.0, cap).consumption;
    bool ok = true;
    for (int g = 1; g < grid_points; ++g) {
      const double price = top * static_cast<double>(g) / (grid_points - 1);
      const double consumption = best_response(request, price, cap).consumption;
      if (consumption > previous) ok = false;
      previous = consumption;
    }
    if (!ok) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "consumption increased");
    }
  }
  return result;
}

SuiteResult check_coupling(std::uint64_t seed, std::int64_t paired_runs) {
  SuiteResult result{"coupling", paired_runs, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < paired_runs; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng, 200);
    const InstanceParams& p = inst.params;

    const RegularizerKind kind = inst_rng.next_unit() < 0.5 ? RegularizerKind::quadratic
                                                            : RegularizerKind::shifted_entropy;
    const RegularizerSpec reg = make_regularizer(kind, p.rate_bound);
    const double eta =
        default_step_size(reg, p.horizon) * inst_rng.next_uniform(0.5, 2.0);

    const TargetPlan plan = learn_plan(inst.trace, p.budget, p.action_cap);
    std::vector<double> perturbed = plan.targets;
    for (double& target : perturbed) {
      if (inst_rng.next_unit() < 0.3) {
        target = std::max(0.0, target + inst_rng.next_uniform(-0.5, 1.0) * p.consumption_bound);
      }
    }

    std::vector<Request> stream;
    for (std::int64_t t = 0; t < p.horizon; ++t) stream.push_back(random_request(inst_rng, p));

    const CouplingReport report =
        coupling_gap(stream, plan.targets, perturbed, p, reg, eta);
    if (report.violations > 0) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "gap above bound");
    }
  }
  return result;
}

namespace {

struct ChangeInTargetChecks {
  bool dual_ordered = true;
  bool targets_ordered = true;
  bool drift_bounded = true;
  bool excluded_consumption_equal = true;
};

ChangeInTargetChecks run_leave_one_out_checks(const RandomInstance& inst) {
  ChangeInTargetChecks checks;
  const InstanceParams& p = inst.params;
  const TargetPlan plan = learn_plan(inst.trace, p.budget, p.action_cap);
  for (std::int64_t s = 1; s <= p.horizon; ++s) {
    const LeaveOneOutPlan loo =
        learn_plan_leave_one_out(inst.trace, p.budget, p.action_cap, s);
    if (plan.empirical_dual < loo.empirical_dual) checks.dual_ordered = false;
    double drift = 0.0;
    for (std::int64_t t = 1; t <= p.horizon; ++t) {
      const auto idx = static_cast<std::size_t>(t - 1);
      if (t == s) continue;
      if (plan.targets[idx] > loo.targets[idx]) checks.targets_ordered = false;
      if (t < s) drift += std::abs(loo.targets[idx] - plan.targets[idx]);
    }
    if (drift > 3.0 * p.consumption_bound) checks.drift_bounded = false;

    const Request& excluded = inst.trace.requests[static_cast<std::size_t>(s - 1)];
    const double full = best_response(excluded, plan.empirical_dual, p.action_cap).consumption;
    const double without =
        best_response(excluded, loo.empirical_dual, p.action_cap).consumption;
    if (full != without) checks.excluded_consumption_equal = false;
  }
  return checks;
}

}  // namespace

SuiteResult check_change_in_target(std::uint64_t seed, std::int64_t traces) {
  SuiteResult result{"change-in-target", traces, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < traces; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng);
    const ChangeInTargetChecks checks = run_leave_one_out_checks(inst);
    if (!checks.dual_ordered || !checks.targets_ordered || !checks.drift_bounded) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "ordering or drift");
    }
  }
  return result;
}

SuiteResult check_leave_one_out(std::uint64_t seed, std::int64_t traces) {
  SuiteResult result{"leave-one-out", traces, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < traces; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng);
    if (!run_leave_one_out_checks(inst).excluded_consumption_equal) {
      ++result.violations;
      if (result.detail.empty()) {
        result.detail = describe(seed, i, "excluded request consumption changed");
      }
    }
  }
  return result;
}

SuiteResult check_ftrl_omd_equivalence(std::uint64_t seed, std::int64_t episodes) {
  SuiteResult result{"ftrl-lazy-omd", episodes, 0, seed, ""};
  Rng rng{seed};
  for (std::int64_t i = 0; i < episodes; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const RandomInstance inst = random_instance(inst_rng, 200);
    const InstanceParams& p = inst.params;
    const RegularizerSpec reg = make_regularizer(RegularizerKind::quadratic, p.rate_bound);
    const double eta = default_step_size(reg, p.horizon);
    const TargetPlan plan = learn_plan(inst.trace, p.budget, p.action_cap);

    DualState state = ftrl_init(reg, eta);
    double remaining = p.budget;
    bool ok = true;
    for (std::size_t t = 0; t < inst.trace.requests.size(); ++t) {
      const StepOutcome out = ftrl_step(state, reg, inst.trace.requests[t], plan.targets[t],
                                        remaining, p.action_cap);
      remaining -= out.consumption;
      const double direct =
          std::clamp(-eta * state.gradient_sum, 0.0, p.rate_bound);
      if (state.price != direct) ok = false;
    }
    if (!ok) {
      ++result.violations;
      if (result.detail.empty()) result.detail = describe(seed, i, "lazy iterate != argmin");
    }
  }
  return result;
}

SuiteResult check_concentration(std::uint64_t seed, std::int64_t trials) {
  InstanceParams params;
  params.horizon = 500;
  params.budget = 200.0;  // the deviation statistic ignores the budget
  params.action_cap = 1.0;
  params.consumption_bound = 1.0;
  params.reward_bound = 2.0;
  params.rate_bound = 2.0;
  const FiniteSupport dist{{{0.5, 1.0, 0.25},
                            {0.9, 0.6, 0.25},
                            {1.1, 0.8, 0.25},
                            {0.3, 0.25, 0.25}}};
  const std::vector<DistSpec> dists(static_cast<std::size_t>(params.horizon), DistSpec{dist});

  const ConcentrationResult res = concentration_check(dists, params, trials, seed);
  SuiteResult result{"concentration", trials, 0, seed, ""};
  std::ostringstream detail;
  detail << res.violations << "/" << res.trials << " trials over r(T)=" << res.radius
         << ", max deviation " << res.max_observed << ", gate 1%";
  result.detail = detail.str();
  if (res.violation_rate > 0.01) result.violations = res.violations;
  return result;
}

std::vector<SuiteResult> run_all(std::uint64_t seed, int scale_down) {
  const auto scaled = [scale_down](std::int64_t n) {
    return std::max<std::int64_t>(1, n / std::max(1, scale_down));
  };
  std::vector<SuiteResult> results;
  results.push_back(check_trace_dual(seed, scaled(1000)));
  results.push_back(check_oracle_equivalence(seed, scaled(1000)));
  results.push_back(check_monotonicity(seed, scaled(1000)));
  results.push_back(check_coupling(seed, scaled(200)));
  results.push_back(check_change_in_target(seed, scaled(200)));
  results.push_back(check_leave_one_out(seed, scaled(200)));
  results.push_back(check_ftrl_omd_equivalence(seed, scaled(100)));
  results.push_back(check_concentration(seed, scaled(1000)));
  return results;
}

}  // namespace pacekit::verify
