#include <doctest.h>

#include "pacekit/oracle.hpp"
#include "pacekit/rng.hpp"
#include "pacekit/traceplan.hpp"
#include "pacekit/verify.hpp"
#include "test_util.hpp"

using namespace pacekit;
using namespace pacekit::testutil;

TEST_CASE("learn_plan on the canonical three-request trace") {
  const Trace trace = trace_of({{1, 1}, {2, 1}, {3, 1}});

  SUBCASE("binding budget pins the dual at the overflow ratio") {
    const TargetPlan plan = learn_plan(trace, 2.0, 1.0);
    CHECK(plan.empirical_dual == 1.0);
    CHECK(plan.targets == std::vector<double>{1, 1, 1});
    CHECK(plan.total_targets == 3.0);
  }
  SUBCASE("slack budget leaves the dual at zero") {
    const TargetPlan plan = learn_plan(trace, 5.0, 1.0);
    CHECK(plan.empirical_dual == 0.0);
    CHECK(plan.targets == std::vector<double>{1, 1, 1});
  }
}

TEST_CASE("learn_plan never selects zero-reward requests") {
  const TargetPlan plan = learn_plan(trace_of({{0, 1}, {0, 1}}), 3.0, 1.0);
  CHECK(plan.empirical_dual == 0.0);
  CHECK(plan.targets == std::vector<double>{0, 0});
}

TEST_CASE("learn_plan requires general position") {
  Trace degenerate = trace_of({{1, 1}, {2, 2}});
  CHECK_FALSE(degenerate.general_position);
  CHECK_THROWS_AS(learn_plan(degenerate, 1.0, 1.0), DegenerateTrace);
}

TEST_CASE("leave-one-out plans per the worked examples") {
  const Trace trace = trace_of({{1, 1}, {2, 1}, {3, 1}});

  SUBCASE("dropping the top request frees the budget") {
    const LeaveOneOutPlan loo = learn_plan_leave_one_out(trace, 2.0, 1.0, 3);
    CHECK(loo.empirical_dual == 0.0);
    CHECK(loo.targets == std::vector<double>{1, 1, 0});
  }
  SUBCASE("dropping an already-zero request changes nothing") {
    const Trace with_zero = trace_of({{1, 1}, {0, 1}, {3, 1}});
    const TargetPlan full = learn_plan(with_zero, 2.0, 1.0);
    const LeaveOneOutPlan loo = learn_plan_leave_one_out(with_zero, 2.0, 1.0, 2);
    CHECK(loo.empirical_dual == full.empirical_dual);
    CHECK(loo.targets == full.targets);
  }
  SUBCASE("single-request trace degenerates to the zero plan") {
    const LeaveOneOutPlan loo = learn_plan_leave_one_out(trace_of({{2, 1}}), 2.0, 1.0, 1);
    CHECK(loo.empirical_dual == 0.0);
    CHECK(loo.targets == std::vector<double>{0});
  }
  SUBCASE("index out of range throws") {
    CHECK_THROWS_AS(learn_plan_leave_one_out(trace, 2.0, 1.0, 0), IndexOutOfRange);
    CHECK_THROWS_AS(learn_plan_leave_one_out(trace, 2.0, 1.0, 4), IndexOutOfRange);
  }
}

TEST_CASE("plan equals the brute-force oracle bit-exactly on random instances") {
  Rng rng{101};
  for (int i = 0; i < 300; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const verify::RandomInstance inst = verify::random_instance(inst_rng);
    const TargetPlan plan = learn_plan(inst.trace, inst.params.budget, inst.params.action_cap);
    CHECK(plan.empirical_dual ==
          brute_force_dual(inst.trace, inst.params.budget, inst.params.action_cap));
    for (std::size_t t = 0; t < inst.trace.requests.size(); ++t) {
      CHECK(plan.targets[t] == best_response(inst.trace.requests[t], plan.empirical_dual,
                                             inst.params.action_cap)
                                   .consumption);
    }
  }
}

TEST_CASE("targets are always 0 or full consumption") {
  Rng rng{103};
  for (int i = 0; i < 100; ++i) {
    Rng inst_rng = rng.fork(static_cast<std::uint64_t>(i));
    const verify::RandomInstance inst = verify::random_instance(inst_rng);
    const TargetPlan plan = learn_plan(inst.trace, inst.params.budget, inst.params.action_cap);
    for (std::size_t t = 0; t < plan.targets.size(); ++t) {
      const double full = inst.trace.requests[t].b_coeff * inst.params.action_cap;
      CHECK((plan.targets[t] == 0.0 || plan.targets[t] == full));
    }
  }
}

TEST_CASE("a pre-sorted trace is learned in one linear pass") {
  Trace sorted;
  const std::size_t n = 4096;
  for (std::size_t t = 0; t < n; ++t) {
    sorted.requests.push_back({static_cast<double>(t + 1), 1.0});
  }
  sorted.general_position = true;
  learn_plan(sorted, static_cast<double>(n) / 4.0, 1.0);
  const PlanOpCounts& ops = last_plan_op_counts();
  CHECK(ops.sorted_input);
  CHECK(ops.key_comparisons <= 2 * n);
  CHECK(ops.walk_steps <= n);

  // A reversed trace needs the sort.
  Trace reversed = sorted;
  std::reverse(reversed.requests.begin(), reversed.requests.end());
  learn_plan(reversed, static_cast<double>(n) / 4.0, 1.0);
  CHECK_FALSE(last_plan_op_counts().sorted_input);
}
