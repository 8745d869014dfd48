#include "pacekit/pacing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pacekit/oracle.hpp"

namespace pacekit {

double RegularizerSpec::value(double price) const {
  if (kind == RegularizerKind::quadratic) return 0.5 * price * price;
  if (price <= 0.0) return 0.0;
  return price * std::log(price) - price;
}

double RegularizerSpec::grad(double price) const {
  if (kind == RegularizerKind::quadratic) return price;
  return std::log(price);
}

double RegularizerSpec::grad_inv(double mirror) const {
  if (kind == RegularizerKind::quadratic) return mirror;
  return std::exp(mirror);  // underflows to 0 as mirror -> -inf, a valid price
}

RegularizerSpec make_regularizer(RegularizerKind kind, double rate_cap) {
  RegularizerSpec reg;
  reg.kind = kind;
  reg.rate_cap = rate_cap;
  if (kind == RegularizerKind::quadratic) {
    reg.strong_convexity = 1.0;
    reg.init_price = 0.0;
  } else {
    // h decreases on (0, 1) and increases after, so the argmin over
    // [0, rate_cap] is min(1, rate_cap); h'' = 1/u >= 1/rate_cap there.
    reg.strong_convexity = 1.0 / rate_cap;
    reg.init_price = std::min(1.0, rate_cap);
  }
  const double h_init = reg.value(reg.init_price);
  reg.range = std::max(reg.value(0.0) - h_init, reg.value(rate_cap) - h_init);
  return reg;
}

double default_step_size(const RegularizerSpec& reg, std::int64_t horizon) {
  return std::sqrt(reg.range / static_cast<double>(horizon));
}

DualState ftrl_init(const RegularizerSpec& reg, double step_size) {
  DualState state;
  state.price = reg.init_price;
  state.mirror_point = reg.grad(reg.init_price);
  state.gradient_sum = 0.0;
  state.step = 0;
  state.step_size = step_size;
  return state;
}

StepOutcome ftrl_step(DualState& state, const RegularizerSpec& reg, const Request& request,
                      double target, double budget_remaining, double action_cap) {
  const BestResponse unguarded = best_response(request, state.price, action_cap);

  StepOutcome out;
  if (unguarded.consumption <= budget_remaining) {
    out.action = unguarded.action;
    out.reward = unguarded.reward;
    out.consumption = unguarded.consumption;
  }
  // The sample subgradient comes from the unguarded decision even when the
  // guard forces the action to 0.
  out.gradient = target - unguarded.consumption;

  state.gradient_sum += out.gradient;
  state.step += 1;
  const double init_mirror = reg.grad(reg.init_price);
  state.mirror_point = init_mirror - state.step_size * state.gradient_sum;
  state.price = std::clamp(reg.grad_inv(state.mirror_point), 0.0, reg.rate_cap);
  return out;
}

namespace {

// Shared episode loop. `next_price` advances the iterate and returns the
// price to use at the given step.
template <typename Policy>
EpisodeResult run_episode(std::span<const Request> stream, const InstanceParams& params,
                          RecordMode mode, const StepObserver& observer, Policy&& policy) {
  EpisodeResult result;
  const auto horizon = static_cast<std::int64_t>(stream.size());
  if (mode == RecordMode::full) result.steps.reserve(stream.size());
  double remaining = params.budget;
  result.stop_time = horizon;
  bool stopped = false;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    StepRecord rec;
    rec.t = t;
    policy(stream[static_cast<std::size_t>(t - 1)], remaining, rec);
    result.total_reward += rec.reward;
    remaining -= rec.consumption;
    rec.budget_remaining = remaining;
    if (!stopped && remaining < params.consumption_bound) {
      result.stop_time = t;
      stopped = true;
    }
    if (observer) observer(rec);
    if (mode == RecordMode::full) result.steps.push_back(rec);
  }
  result.total_consumption = params.budget - remaining;
  return result;
}

}  // namespace

EpisodeResult run_targeted(std::span<const Request> stream, std::span<const double> targets,
                           const InstanceParams& params, const RegularizerSpec& reg,
                           double step_size, RecordMode mode, const StepObserver& observer) {
  if (targets.size() != stream.size()) {
    throw LengthMismatch("target sequence and stream must cover the same periods");
  }
  DualState state = ftrl_init(reg, step_size);
  return run_episode(stream, params, mode, observer,
                     [&](const Request& request, double remaining, StepRecord& rec) {
                       const double target = targets[static_cast<std::size_t>(rec.t - 1)];
                       rec.price = state.price;
                       rec.target = target;
                       const StepOutcome out =
                           ftrl_step(state, reg, request, target, remaining, params.action_cap);
                       rec.action = out.action;
                       rec.reward = out.reward;
                       rec.consumption = out.consumption;
                     });
}

EpisodeResult run_dual_ftrl(std::span<const Request> stream, const TargetPlan& plan,
                            const InstanceParams& params, const RegularizerSpec& reg,
                            double step_size, RecordMode mode, const StepObserver& observer) {
  return run_targeted(stream, plan.targets, params, reg, step_size, mode, observer);
}

EpisodeResult run_static_dual(std::span<const Request> stream, double empirical_dual,
                              const InstanceParams& params, RecordMode mode,
                              const StepObserver& observer) {
  return run_episode(stream, params, mode, observer,
                     [&](const Request& request, double remaining, StepRecord& rec) {
                       rec.price = empirical_dual;
                       const BestResponse br =
                           best_response(request, empirical_dual, params.action_cap);
                       if (br.consumption <= remaining) {
                         rec.action = br.action;
                         rec.reward = br.reward;
                         rec.consumption = br.consumption;
                       }
                     });
}

EpisodeResult run_fixed_target(std::span<const Request> stream, const InstanceParams& params,
                               const RegularizerSpec& reg, double step_size, RecordMode mode,
                               const StepObserver& observer) {
  const double per_period = params.budget / static_cast<double>(params.horizon);
  const std::vector<double> targets(stream.size(), per_period);
  return run_targeted(stream, targets, params, reg, step_size, mode, observer);
}

CouplingReport coupling_gap(std::span<const Request> stream, std::span<const double> targets_a,
                            std::span<const double> targets_b, const InstanceParams& params,
                            const RegularizerSpec& reg, double step_size) {
  CouplingReport report;
  const std::size_t horizon = stream.size();
  report.observed.resize(horizon);
  report.bound.resize(horizon);

  DualState state_a = ftrl_init(reg, step_size);
  DualState state_b = ftrl_init(reg, step_size);
  const double rate = step_size / reg.strong_convexity;
  double target_gap_sum = 0.0;  // sum over t < s of |target gap|

  for (std::size_t s = 0; s < horizon; ++s) {
    report.observed[s] = std::abs(state_a.price - state_b.price);
    report.bound[s] = rate * (target_gap_sum + params.consumption_bound);
    report.max_observed = std::max(report.max_observed, report.observed[s]);
    if (report.observed[s] > report.bound[s]) ++report.violations;

    // The guard cannot affect iterates, so run both without a budget.
    const double unlimited = std::numeric_limits<double>::infinity();
    ftrl_step(state_a, reg, stream[s], targets_a[s], unlimited, params.action_cap);
    ftrl_step(state_b, reg, stream[s], targets_b[s], unlimited, params.action_cap);
    target_gap_sum += std::abs(targets_a[s] - targets_b[s]);
  }
  return report;
}

}  // namespace pacekit
