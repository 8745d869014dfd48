#ifndef PACEKIT_PACING_HPP
#define PACEKIT_PACING_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pacekit/core.hpp"
#include "pacekit/traceplan.hpp"

namespace pacekit {

enum class RegularizerKind { quadratic, shifted_entropy };

// Regularizer for the dual update, together with the constants the step-size
// and coupling bounds need. Prices live in [0, rate_cap].
//
//   quadratic:       h(u) = u^2 / 2          grad h(u) = u      sigma = 1
//   shifted_entropy: h(u) = u ln u - u        grad h(u) = ln u   sigma = 1/cap
//                    (h(0) := 0 by continuous extension)
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::quadratic;
  double rate_cap = 0.0;          // feasible interval is [0, rate_cap]
  double strong_convexity = 0.0;  // lower bound on h'' over the interval
  double init_price = 0.0;        // argmin of h over the interval
  double range = 0.0;             // max{h(0), h(rate_cap)} - h(init_price)

  double value(double price) const;
  double grad(double price) const;
  double grad_inv(double mirror) const;
};

RegularizerSpec make_regularizer(RegularizerKind kind, double rate_cap);

// Theory-default step size sqrt(range / horizon).
double default_step_size(const RegularizerSpec& reg, std::int64_t horizon);

// Lazy mirror-descent state. The projected price always equals the clamp of
// grad_inv(mirror_point) to [0, rate_cap]; in one dimension the Bregman
// projection is exactly that clamp. The mirror point is recomputed from the
// gradient sum each step, so for the quadratic regularizer the iterate is
// bit-identical to the direct follow-the-regularized-leader argmin
// clamp(-step_size * gradient_sum).
struct DualState {
  double mirror_point = 0.0;
  double price = 0.0;
  double gradient_sum = 0.0;
  std::int64_t step = 0;
  double step_size = 0.0;
};

DualState ftrl_init(const RegularizerSpec& reg, double step_size);

struct StepOutcome {
  double action = 0.0;
  double reward = 0.0;
  double consumption = 0.0;   // of the action actually taken
  double gradient = 0.0;      // target - unguarded best-response consumption
};

// One online step: take the profit-maximizing action at the current price
// (zeroed when it does not fit the remaining budget), then update the price.
// The gradient always uses the unguarded decision, budget guard or not.
StepOutcome ftrl_step(DualState& state, const RegularizerSpec& reg, const Request& request,
                      double target, double budget_remaining, double action_cap);

struct StepRecord {
  std::int64_t t = 0;  // 1-based period
  double price = 0.0;  // iterate used at this step
  double action = 0.0;
  double reward = 0.0;
  double consumption = 0.0;
  double target = 0.0;
  double budget_remaining = 0.0;  // after the step
};

struct EpisodeResult {
  double total_reward = 0.0;
  double total_consumption = 0.0;  // budget minus remaining, exactly
  std::int64_t stop_time = 0;      // first t with remaining < consumption_bound, else T
  std::vector<StepRecord> steps;   // length T in full mode, empty in lite mode
};

enum class RecordMode { full, lite };

// Called once per period in either record mode; useful for running
// aggregates on large-horizon runs where storing records would dominate.
using StepObserver = std::function<void(const StepRecord&)>;

// Dual follow-the-regularized-leader tracking the plan's target sequence.
EpisodeResult run_dual_ftrl(std::span<const Request> stream, const TargetPlan& plan,
                            const InstanceParams& params, const RegularizerSpec& reg,
                            double step_size, RecordMode mode = RecordMode::full,
                            const StepObserver& observer = {});

// Same engine with an arbitrary target sequence.
EpisodeResult run_targeted(std::span<const Request> stream, std::span<const double> targets,
                           const InstanceParams& params, const RegularizerSpec& reg,
                           double step_size, RecordMode mode = RecordMode::full,
                           const StepObserver& observer = {});

// Static learned-dual policy: every decision uses the same price, with the
// usual budget guard. Records carry target = 0.
EpisodeResult run_static_dual(std::span<const Request> stream, double empirical_dual,
                              const InstanceParams& params, RecordMode mode = RecordMode::full,
                              const StepObserver& observer = {});

// Stationary-target baseline: budget / horizon every period.
EpisodeResult run_fixed_target(std::span<const Request> stream, const InstanceParams& params,
                               const RegularizerSpec& reg, double step_size,
                               RecordMode mode = RecordMode::full,
                               const StepObserver& observer = {});

// Runs two iterate sequences on the same request stream with different
// target sequences and reports, per period s, the observed price gap and the
// theoretical bound (eta/sigma) * (sum_{t<s} |target gap| + consumption
// bound). The budget guard never feeds back into the iterates, so gaps are a
// property of the update alone.
struct CouplingReport {
  std::vector<double> observed;
  std::vector<double> bound;
  double max_observed = 0.0;
  std::size_t violations = 0;
};

CouplingReport coupling_gap(std::span<const Request> stream, std::span<const double> targets_a,
                            std::span<const double> targets_b, const InstanceParams& params,
                            const RegularizerSpec& reg, double step_size);

}  // namespace pacekit

#endif  // PACEKIT_PACING_HPP
