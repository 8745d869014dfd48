#ifndef PACEKIT_TESTS_TEST_UTIL_HPP
#define PACEKIT_TESTS_TEST_UTIL_HPP

#include <initializer_list>
#include <vector>

#include "pacekit/core.hpp"

namespace pacekit::testutil {

// Params loose enough for small hand-written traces: cap 1, rate bound
// covering the given max ratio.
inline InstanceParams params_for(std::int64_t horizon, double budget, double rate_bound = 4.0,
                                 double consumption_bound = 1.0) {
  InstanceParams p;
  p.horizon = horizon;
  p.budget = budget;
  p.action_cap = 1.0;
  p.consumption_bound = consumption_bound;
  p.rate_bound = rate_bound;
  p.reward_bound = rate_bound * consumption_bound;
  return p;
}

inline std::vector<Request> reqs(std::initializer_list<Request> list) {
  return std::vector<Request>(list);
}

inline Trace trace_of(std::initializer_list<Request> list) {
  Trace t;
  t.requests = list;
  t.general_position = compute_general_position(t.requests);
  return t;
}

}  // namespace pacekit::testutil

#endif  // PACEKIT_TESTS_TEST_UTIL_HPP
