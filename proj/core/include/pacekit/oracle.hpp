#ifndef PACEKIT_ORACLE_HPP
#define PACEKIT_ORACLE_HPP

#include <vector>

#include "pacekit/core.hpp"

namespace pacekit {

// Profit-maximizing decision for a request at a given dual price. The
// optimum of a linear profit over [0, cap] is bang-bang: the action is
// either 0 or the cap.
struct BestResponse {
  double action = 0.0;
  double reward = 0.0;       // f at the chosen action
  double consumption = 0.0;  // b at the chosen action
};

// action = cap iff f_coeff - price * b_coeff >= 0 and f_coeff != 0.
// A zero-profit tie with positive reward resolves to the cap (largest
// reward); zero-reward requests resolve to 0 (smallest consumption).
BestResponse best_response(const Request& request, double price, double action_cap);

// Empirical dual objective of a trace:
//   q(price) = price * budget + sum_t max(f_t - price * b_t, 0) * cap.
// Convex and piecewise linear in the price.
double dual_objective(const Trace& trace, double budget, double price, double action_cap);

// Sorted distinct critical prices f_coeff/b_coeff of the trace requests with
// f_coeff > 0 and b_coeff > 0. Each is strictly positive. At its critical
// price a request flips from accepted to rejected.
std::vector<double> breakpoints(const Trace& trace);

// Smallest minimizer of the empirical dual objective. Works by exact slope
// comparison: the slope of q between breakpoints is budget minus the total
// consumption of the still-accepted requests, so the minimizing set is read
// off the one-sided slopes without comparing function values. Serves as the
// independence oracle for the fast plan learner.
double brute_force_dual(const Trace& trace, double budget, double action_cap);

}  // namespace pacekit

#endif  // PACEKIT_ORACLE_HPP
