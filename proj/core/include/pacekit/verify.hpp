#ifndef PACEKIT_VERIFY_HPP
#define PACEKIT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pacekit/core.hpp"
#include "pacekit/rng.hpp"

namespace pacekit::verify {

struct SuiteResult {
  std::string name;
  std::int64_t instances = 0;
  std::int64_t violations = 0;
  std::uint64_t seed = 0;
  std::string detail;  // first failing instance, or summary stats
  bool pass() const { return violations == 0; }
};

// Random bounded instance in general position, shared by the suites.
struct RandomInstance {
  InstanceParams params;
  Trace trace;
};
RandomInstance random_instance(Rng& rng, std::int64_t max_horizon = 50);

// Empirical dual complementary slackness: either the dual is 0 and targets
// fit within budget + consumption bound, or total targets land within one
// consumption bound of the budget. Also checks the overspend diagnostic
// rate_bound * (total - budget)^+ <= rate_bound * consumption_bound.
SuiteResult check_trace_dual(std::uint64_t seed, std::int64_t instances);

// Fast plan learner against the brute-force dual minimizer and per-request
// best responses; equality must be bit-exact.
SuiteResult check_oracle_equivalence(std::uint64_t seed, std::int64_t instances);

// Best-response consumption is non-increasing in the price.
SuiteResult check_monotonicity(std::uint64_t seed, std::int64_t requests, int grid_points = 100);

// Paired runs with perturbed target sequences stay within the coupling
// bound at every period.
SuiteResult check_coupling(std::uint64_t seed, std::int64_t paired_runs);

// Zeroing one trace request never raises the dual, never lowers other
// targets, and moves earlier targets by at most three consumption bounds.
SuiteResult check_change_in_target(std::uint64_t seed, std::int64_t traces);

// The excluded request consumes the same at the full and leave-one-out
// duals.
SuiteResult check_leave_one_out(std::uint64_t seed, std::int64_t traces);

// Quadratic lazy-mirror iterate equals the direct argmin clamp at every
// step.
SuiteResult check_ftrl_omd_equivalence(std::uint64_t seed, std::int64_t episodes);

// Sup-deviation between trace and expected consumption exceeds the
// concentration radius in at most 1% of trials (horizon 500).
SuiteResult check_concentration(std::uint64_t seed, std::int64_t trials);

// All suites at their default scales (divided by `scale_down` when > 1).
std::vector<SuiteResult> run_all(std::uint64_t seed, int scale_down = 1);

}  // namespace pacekit::verify

#endif  // PACEKIT_VERIFY_HPP
