#ifndef PACEKIT_CORE_HPP
#define PACEKIT_CORE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacekit/errors.hpp"

namespace pacekit {

// A request is a pair of linear functions over the action interval
// [0, action_cap]: reward f(x) = f_coeff * x and resource consumption
// b(x) = b_coeff * x. Two coefficients describe it completely.
struct Request {
  double f_coeff = 0.0;
  double b_coeff = 0.0;

  friend bool operator==(const Request&, const Request&) = default;
};

// Instance-wide constants. `rate_bound` caps the return per unit of resource:
// f_coeff <= rate_bound * b_coeff for every admissible request, so dual
// prices above rate_bound shut every request off.
struct InstanceParams {
  std::int64_t horizon = 0;      // T >= 1
  double budget = 0.0;           // B > 0
  double action_cap = 0.0;       // largest action, > 0
  double consumption_bound = 0.0;  // b(x) <= consumption_bound on [0, cap]
  double reward_bound = 0.0;       // f(x) <= reward_bound on [0, cap]
  double rate_bound = 0.0;         // f(x) <= rate_bound * b(x)
};

// One historical sample per period, in original time order.
struct Trace {
  std::vector<Request> requests;
  bool general_position = false;
};

// Bang-per-buck ratio of a request, with 0/0 := 0. Requests with zero reward
// have no critical price; they map to 0 so they sort below everything that
// can ever be selected.
inline double bang_per_buck(const Request& r) {
  if (r.f_coeff > 0.0 && r.b_coeff > 0.0) return r.f_coeff / r.b_coeff;
  return 0.0;
}

// A trace is in general position when the critical prices of its requests
// are pairwise distinct. Only requests with f_coeff > 0 and b_coeff > 0 have
// a critical price; zero-reward requests never tie anything.
bool compute_general_position(std::span<const Request> requests);

// Validation mode for auction-derived requests: a losing auction maps to a
// negative reward coefficient, which the decision rule handles (it never
// selects such a request), so the f_coeff >= 0 invariant is relaxed.
enum class ValidationMode { standard, auction_derived };

// Throws BoundViolation if any params invariant fails (budget, caps, bound
// consistency reward_bound <= rate_bound * consumption_bound).
void validate_params(const InstanceParams& params);

// Checks one request against the instance bounds; `context` names it in the
// error message.
void validate_request_bounds(const InstanceParams& params, const Request& request,
                             ValidationMode mode = ValidationMode::standard,
                             const std::string& context = {});

// True when budget >= consumption_bound * horizon, i.e. the budget
// constraint can never bind. Accepted, but callers may want to warn.
bool budget_vacuous(const InstanceParams& params);

// Checks every request against the instance bounds and returns a Trace with
// its general-position flag computed. Throws LengthMismatch or
// BoundViolation; messages name the offending request index (1-based).
Trace validate_instance(const InstanceParams& params,
                        std::vector<Request> requests,
                        ValidationMode mode = ValidationMode::standard);

// Metric on requests: d(a, b) = sup_x |f_a(x) - f_b(x)| + sup_x |b_a(x) -
// b_b(x)|. For linear functions over [0, cap] both sups sit at the cap.
double request_distance(const Request& a, const Request& b, double action_cap);

}  // namespace pacekit

#endif  // PACEKIT_CORE_HPP
