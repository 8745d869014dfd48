#ifndef PACEKIT_BENCH_HPP
#define PACEKIT_BENCH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pacekit/core.hpp"
#include "pacekit/dist.hpp"

namespace pacekit {

// Exact solution of the fluid relaxation for finite-support distributions:
// maximize total expected reward subject to total expected consumption <= B.
struct FluidSolution {
  double value = 0.0;
  double optimal_dual = 0.0;  // smallest minimizer of the distributional dual
  std::vector<double> per_period_consumption;  // at the optimum, sums to <= B
  double boundary_fraction = 0.0;  // accepted share of the mass tied at the dual
};

// Solves the fluid problem through its one-dimensional piecewise-linear dual
// (slope enumeration over the union of support breakpoints), then recovers
// the primal by accepting all strictly profitable mass plus a deterministic
// fractional share of the boundary ratio. For a single linear constraint
// this equals the greedy LP optimum. Boundary mass is filled in (period,
// atom) order.
FluidSolution fluid_value(std::span<const FiniteSupport> dists, double budget,
                          double action_cap);

// Aggregate dual over all periods at one price:
// price * budget + sum_t E[max_x f - price * b]. Upper-bounds the fluid
// value at every price (weak duality).
double distributional_dual(std::span<const FiniteSupport> dists, double budget,
                           double action_cap, double price);

// Hindsight optimum over a realized sequence: a fractional knapsack. Sort by
// bang-per-buck descending, accept at the cap, fill the boundary item
// fractionally.
double hindsight_opt(std::span<const Request> requests, double budget, double action_cap);

// Exact 1-Wasserstein distance under the request metric
// d = cap * (|df| + |db|). Families with a common consumption coefficient
// reduce to a quantile coupling over the reward coefficient; finite pairs
// with varying consumption solve a small optimal-transport problem exactly.
// Throws UnsupportedFamilyPair otherwise.
double wasserstein(const DistSpec& p, const DistSpec& q, double action_cap);

// Benchmark consumption sequence: expected spend per period under the
// sampling distributions at the learned empirical dual. Not observable by
// the online algorithm; the simulator can compute it because it knows the
// distributions.
std::vector<double> benchmark_consumption(std::span<const DistSpec> sample_dists,
                                          double empirical_dual, double action_cap);

struct RegretReport {
  double fluid_value = 0.0;
  double mean_reward = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  double regret = 0.0;     // fluid_value - mean_reward
  std::int64_t trials = 0;
  double r2 = 0.0;  // worst over trials of rate_bound * (total targets - B)^+
  double r3_estimate = 0.0;       // mean over trials of sum_t price_t * (beta_t - target_t)
  double total_wasserstein = 0.0;  // sum_t W(true_t, sample_t)
};

// Aggregates per-trial statistics. Sums use a fixed-order pairwise reduction
// so reports do not depend on how trials were scheduled.
RegretReport make_regret_report(double fluid_value, std::span<const double> rewards,
                                std::span<const double> r2_per_trial,
                                std::span<const double> r3_per_trial,
                                double total_wasserstein);

// Fixed-order pairwise summation helper used by the aggregators.
double pairwise_sum(std::span<const double> values);

// Exact transportation problem between two finite nonnegative measures of
// equal total mass, minimizing sum flow_ij * cost(i, j). Used by the
// finite-finite Wasserstein route; exposed for tests.
double exact_transport(std::span<const double> supply, std::span<const double> demand,
                       const std::vector<std::vector<double>>& cost);

}  // namespace pacekit

#endif  // PACEKIT_BENCH_HPP
