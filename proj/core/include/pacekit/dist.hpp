#ifndef PACEKIT_DIST_HPP
#define PACEKIT_DIST_HPP

#include <span>
#include <variant>
#include <vector>

#include "pacekit/core.hpp"

namespace pacekit {

// Per-period request distributions come from a small set of families with
// exact expectation routines. Finite support is the canonical exact
// representation; the uniform-reward family keeps a closed form where one
// exists and is discretized where the fluid relaxation needs atoms.

struct PointMass {
  double f_coeff = 0.0;
  double b_coeff = 0.0;
  friend bool operator==(const PointMass&, const PointMass&) = default;
};

// Reward coefficient uniform on [lo, hi]; consumption coefficient fixed.
struct UniformReward {
  double lo = 0.0;
  double hi = 0.0;
  double b_coeff = 0.0;
  friend bool operator==(const UniformReward&, const UniformReward&) = default;
};

struct FiniteSupport {
  struct Atom {
    double f_coeff = 0.0;
    double b_coeff = 0.0;
    double prob = 0.0;
    friend bool operator==(const Atom&, const Atom&) = default;
  };
  std::vector<Atom> atoms;
  friend bool operator==(const FiniteSupport&, const FiniteSupport&) = default;
};

using DistSpec = std::variant<PointMass, UniformReward, FiniteSupport>;

// Throws EmptySupport / NegativeProbability / BoundViolation. Probabilities
// must sum to 1 within 1e-9.
void validate_dist(const DistSpec& dist);

// Every point of the support must satisfy the instance bounds (for the
// uniform family, the interval endpoints).
void validate_dist_bounds(const DistSpec& dist, const InstanceParams& params);

// Exact finite representation. Uniform families discretize onto `grid`
// midpoint atoms of equal mass; point masses and finite supports pass
// through unchanged.
FiniteSupport to_finite(const DistSpec& dist, int grid);

// Worst-case shift of any reward coefficient under to_finite, times the
// action cap: a per-period bound on how much discretization can move the
// fluid value.
double discretization_bound(const DistSpec& dist, int grid, double action_cap);

// E over the distribution of the consumption of the profit-maximizing
// decision at the given price.
double expected_consumption(const DistSpec& dist, double price, double action_cap);

// E over the distribution of max_x { f(x) - price * b(x) }.
double expected_profit(const DistSpec& dist, double price, double action_cap);

// Prices at which expected_consumption changes shape: atom ratios for finite
// supports, interval endpoints over the consumption coefficient for the
// uniform family. Sorted, distinct, positive.
std::vector<double> support_breakpoints(const DistSpec& dist);

// One draw. Uniform draws land in [lo, hi); finite draws walk the atom list
// in order, so results are reproducible bit-exactly for a fixed generator.
class Rng;
Request sample_request(const DistSpec& dist, Rng& rng);

}  // namespace pacekit

#endif  // PACEKIT_DIST_HPP
