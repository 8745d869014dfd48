#include "pacekit/traceplan.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pacekit {

namespace {
thread_local PlanOpCounts g_plan_ops;
}  // namespace

const PlanOpCounts& last_plan_op_counts() { return g_plan_ops; }

TargetPlan learn_plan(const Trace& trace, double budget, double action_cap) {
  if (!trace.general_position) {
    throw DegenerateTrace("trace has duplicate bang-per-buck ratios; perturb it first");
  }
  g_plan_ops = PlanOpCounts{};

  const std::vector<Request>& reqs = trace.requests;
  const std::size_t n = reqs.size();

  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = bang_per_buck(reqs[i]);

  auto key_less = [&](std::size_t a, std::size_t b) {
    ++g_plan_ops.key_comparisons;
    return keys[a] < keys[b];
  };

  // Indices in increasing ratio order. A pre-sorted trace needs no sort and
  // the whole call stays O(T); ties among zero-ratio requests keep original
  // order, and general position rules out any other tie.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  g_plan_ops.sorted_input = std::is_sorted(order.begin(), order.end(), key_less);
  if (!g_plan_ops.sorted_input) {
    std::stable_sort(order.begin(), order.end(), key_less);
  }

  TargetPlan plan;
  plan.targets.assign(n, 0.0);

  // Walk from the highest ratio down. Zero-ratio requests have zero reward
  // and are never selected, so reaching one ends the walk with a free dual.
  double consumed = 0.0;
  double total = 0.0;
  plan.empirical_dual = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    ++g_plan_ops.walk_steps;
    const std::size_t idx = order[k];
    if (keys[idx] <= 0.0) break;
    const double spend = reqs[idx].b_coeff * action_cap;
    if (consumed + spend > budget) {
      plan.targets[idx] = spend;
      total += spend;
      plan.empirical_dual = keys[idx];
      break;
    }
    consumed += spend;
    total += spend;
    plan.targets[idx] = spend;
  }
  plan.total_targets = total;
  return plan;
}

LeaveOneOutPlan learn_plan_leave_one_out(const Trace& trace, double budget, double action_cap,
                                         std::int64_t excluded_index) {
  const auto n = static_cast<std::int64_t>(trace.requests.size());
  if (excluded_index < 1 || excluded_index > n) {
    throw IndexOutOfRange("excluded_index " + std::to_string(excluded_index) +
                          " outside 1.." + std::to_string(n));
  }
  Trace modified;
  modified.requests = trace.requests;
  modified.requests[static_cast<std::size_t>(excluded_index - 1)] = Request{};
  // Dropping a request cannot create a ratio tie.
  modified.general_position = trace.general_position;

  TargetPlan plan = learn_plan(modified, budget, action_cap);
  LeaveOneOutPlan out;
  out.excluded_index = excluded_index;
  out.empirical_dual = plan.empirical_dual;
  out.targets = std::move(plan.targets);
  return out;
}

}  // namespace pacekit
