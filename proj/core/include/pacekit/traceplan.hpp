#ifndef PACEKIT_TRACEPLAN_HPP
#define PACEKIT_TRACEPLAN_HPP

#include <cstdint>
#include <vector>

#include "pacekit/core.hpp"

namespace pacekit {

// Empirical dual price and per-period target expenditures learned from one
// trace. `targets[t]` is what a profit-maximizing decision at the empirical
// dual would spend on trace request t+1, so each entry is either 0 or
// b_coeff * action_cap. Indexed by original time.
struct TargetPlan {
  double empirical_dual = 0.0;
  std::vector<double> targets;
  double total_targets = 0.0;
};

// Plan recomputed with request `excluded_index` replaced by the zero request.
struct LeaveOneOutPlan {
  std::int64_t excluded_index = 0;  // 1-based, matching trace file rows
  double empirical_dual = 0.0;
  std::vector<double> targets;  // targets[excluded_index - 1] == 0
};

// Learns the empirical dual and targets in one pass over the trace sorted by
// bang-per-buck: walk from the highest ratio down, accumulating consumption
// until the budget would overflow; the overflowing request pins the dual at
// its ratio. If the budget never binds the dual is 0. Output order is
// original time order. The result matches (brute_force_dual, best_response
// consumption per request) bit-exactly.
//
// Requires trace.general_position; throws DegenerateTrace otherwise.
TargetPlan learn_plan(const Trace& trace, double budget, double action_cap);

// Same computation on the trace with request `excluded_index` zeroed out.
// Throws IndexOutOfRange unless 1 <= excluded_index <= T.
LeaveOneOutPlan learn_plan_leave_one_out(const Trace& trace, double budget, double action_cap,
                                         std::int64_t excluded_index);

// Diagnostic counters for the most recent learn_plan call on this thread.
// A pre-sorted trace must show sorted_input == true and a linear number of
// key comparisons and walk steps.
struct PlanOpCounts {
  std::size_t key_comparisons = 0;
  std::size_t walk_steps = 0;
  bool sorted_input = false;
};
const PlanOpCounts& last_plan_op_counts();

}  // namespace pacekit

#endif  // PACEKIT_TRACEPLAN_HPP
