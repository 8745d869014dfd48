#include "pacekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pacekit {

bool compute_general_position(std::span<const Request> requests) {
  std::vector<double> ratios;
  ratios.reserve(requests.size());
  for (const Request& r : requests) {
    if (r.f_coeff > 0.0 && r.b_coeff > 0.0) ratios.push_back(r.f_coeff / r.b_coeff);
  }
  std::sort(ratios.begin(), ratios.end());
  return std::adjacent_find(ratios.begin(), ratios.end()) == ratios.end();
}

void validate_params(const InstanceParams& p) {
  if (p.horizon < 1) throw BoundViolation("horizon must be >= 1");
  if (!(p.budget > 0.0) || !std::isfinite(p.budget))
    throw BoundViolation("budget must be positive and finite");
  if (!(p.action_cap > 0.0) || !std::isfinite(p.action_cap))
    throw BoundViolation("action_cap must be positive and finite");
  if (!(p.consumption_bound > 0.0) || !std::isfinite(p.consumption_bound))
    throw BoundViolation("consumption_bound must be positive and finite");
  if (!(p.reward_bound > 0.0) || !std::isfinite(p.reward_bound))
    throw BoundViolation("reward_bound must be positive and finite");
  if (!(p.rate_bound > 0.0) || !std::isfinite(p.rate_bound))
    throw BoundViolation("rate_bound must be positive and finite");
  if (p.reward_bound > p.rate_bound * p.consumption_bound)
    throw BoundViolation("reward_bound exceeds rate_bound * consumption_bound");
}

bool budget_vacuous(const InstanceParams& p) {
  return p.budget >= p.consumption_bound * static_cast<double>(p.horizon);
}

void validate_request_bounds(const InstanceParams& params, const Request& r,
                             ValidationMode mode, const std::string& context) {
  const std::string at = context.empty() ? context : " (" + context + ")";
  if (!std::isfinite(r.f_coeff) || !std::isfinite(r.b_coeff))
    throw BoundViolation("non-finite coefficient" + at);
  if (r.b_coeff < 0.0) throw BoundViolation("b_coeff < 0" + at);
  if (mode == ValidationMode::standard && r.f_coeff < 0.0)
    throw BoundViolation("f_coeff < 0" + at);
  if (r.f_coeff > params.rate_bound * r.b_coeff)
    throw BoundViolation("f_coeff > rate_bound * b_coeff" + at);
  if (r.f_coeff * params.action_cap > params.reward_bound)
    throw BoundViolation("reward above reward_bound" + at);
  if (r.b_coeff * params.action_cap > params.consumption_bound)
    throw BoundViolation("consumption above consumption_bound" + at);
}

Trace validate_instance(const InstanceParams& params, std::vector<Request> requests,
                        ValidationMode mode) {
  validate_params(params);
  if (static_cast<std::int64_t>(requests.size()) != params.horizon) {
    throw LengthMismatch("expected " + std::to_string(params.horizon) + " requests, got " +
                         std::to_string(requests.size()));
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    validate_request_bounds(params, requests[i], mode, "request " + std::to_string(i + 1));
  }
  Trace trace;
  trace.general_position = compute_general_position(requests);
  trace.requests = std::move(requests);
  return trace;
}

double request_distance(const Request& a, const Request& b, double action_cap) {
  return action_cap * (std::abs(a.f_coeff - b.f_coeff) + std::abs(a.b_coeff - b.b_coeff));
}

}  // namespace pacekit
