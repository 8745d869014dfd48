#include "pacekit/oracle.hpp"

#include <algorithm>
#include <utility>

namespace pacekit {

BestResponse best_response(const Request& request, double price, double action_cap) {
  // Accept iff the profit f - price * b is nonnegative with f != 0. For
  // f > 0, b > 0 that is price <= f/b; comparing against the ratio keeps the
  // zero-profit tie exact when the price itself is a ratio (the empirical
  // dual always is), where the f - price*b form can lose the tie to
  // rounding.
  BestResponse out;
  const bool accept =
      request.f_coeff > 0.0 &&
      (request.b_coeff == 0.0 || price <= request.f_coeff / request.b_coeff);
  if (accept) {
    out.action = action_cap;
    out.reward = request.f_coeff * action_cap;
    out.consumption = request.b_coeff * action_cap;
  }
  return out;
}

double dual_objective(const Trace& trace, double budget, double price, double action_cap) {
  double total = price * budget;
  for (const Request& r : trace.requests) {
    const double profit = r.f_coeff - price * r.b_coeff;
    if (profit > 0.0) total += profit * action_cap;
  }
  return total;
}

std::vector<double> breakpoints(const Trace& trace) {
  std::vector<double> ratios;
  ratios.reserve(trace.requests.size());
  for (const Request& r : trace.requests) {
    if (r.f_coeff > 0.0 && r.b_coeff > 0.0) ratios.push_back(r.f_coeff / r.b_coeff);
  }
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
  return ratios;
}

double brute_force_dual(const Trace& trace, double budget, double action_cap) {
  // (critical price, consumption at the cap) for every selectable request;
  // duplicates allowed here since ratios are grouped by the sorted walk.
  std::vector<std::pair<double, double>> items;
  items.reserve(trace.requests.size());
  double total = 0.0;
  for (const Request& r : trace.requests) {
    if (r.f_coeff > 0.0 && r.b_coeff > 0.0) {
      items.emplace_back(r.f_coeff / r.b_coeff, r.b_coeff * action_cap);
      total += r.b_coeff * action_cap;
    }
  }
  // Slope of q below every breakpoint is budget - total; when nonnegative the
  // objective is nondecreasing on all of [0, inf) and 0 is the minimizer.
  if (budget - total >= 0.0) return 0.0;

  std::sort(items.begin(), items.end());
  double remaining = total;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    double group_weight = 0.0;
    while (j < items.size() && items[j].first == items[i].first) {
      group_weight += items[j].second;
      ++j;
    }
    remaining -= group_weight;
    // Right slope at this breakpoint; the left slope is negative because no
    // earlier breakpoint qualified, so first-order optimality holds here.
    if (budget - remaining >= 0.0) return items[i].first;
    i = j;
  }
  return items.back().first;  // unreachable: remaining ends at 0 and budget > 0
}

}  // namespace pacekit
