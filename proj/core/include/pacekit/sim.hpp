#ifndef PACEKIT_SIM_HPP
#define PACEKIT_SIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacekit/bench.hpp"
#include "pacekit/core.hpp"
#include "pacekit/dist.hpp"
#include "pacekit/pacing.hpp"
#include "pacekit/rng.hpp"

namespace pacekit {

// Second-price auction outcome determinants for one round.
struct AuctionEvent {
  double value = 0.0;          // bidder's value
  double competing_bid = 0.0;  // highest competing bid, the price on a win
};

// Winning yields utility (value - competing_bid) and costs the competing
// bid; losing yields and costs nothing. The reward coefficient is stored
// unclamped: a losing event maps to a negative coefficient which the
// decision rule never selects.
Request auction_to_request(const AuctionEvent& event);

// Value shading that simulates the profit-maximizing decision without
// knowing the competing bid: bid value / (1 + price). With ties won by this
// bidder, the win/lose outcome matches best_response on the adapted request.
double bid_from_multiplier(double value, double price);

// One independent draw per period. Bit-exact for a fixed seed and generator
// version; the general-position flag is computed on the result.
Trace sample_trace(std::span<const DistSpec> dists, Rng rng);

// Adds an independent Unif[0, scale] perturbation to every reward
// coefficient and re-checks general position, retrying with fresh noise up
// to 16 times. Throws PerturbationFailed after that and
// std::invalid_argument for scale <= 0.
Trace perturb_general_position(const Trace& trace, double scale, Rng rng);

// A complete experiment description: the true request distributions, the
// (possibly different) sampling distributions the trace is drawn from, and
// the Monte Carlo knobs.
struct ScenarioConfig {
  InstanceParams params;
  std::vector<DistSpec> true_dists;
  std::vector<DistSpec> sample_dists;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  double perturbation_scale = 0.0;  // 0 disables perturbation
};

// The construction where an epsilon shift between sampling and true
// distributions starves the static learned-dual policy: sampling
// distributions sit above every realized reward for the first half of the
// horizon, so the learned dual overshoots all true bang-per-buck ratios.
// Horizon must be even, 0 < epsilon < 1; budget is T/2, consumption
// coefficient 1, action cap 1, rate bound 2.
ScenarioConfig fragility_scenario(double epsilon, std::int64_t horizon);

enum class Algo { dual_ftrl, static_dual, fixed_target };

std::string algo_name(Algo algo);

struct ExperimentOptions {
  RegularizerKind regularizer = RegularizerKind::quadratic;
  double step_size = 0.0;  // <= 0 means the theory default sqrt(range/T)
  int fluid_grid = 64;     // atoms per uniform family in the fluid relaxation
  bool record_first_trajectory = true;
  int threads = 0;  // 0: PACEKIT_THREADS env or hardware concurrency
};

struct AlgoOutcome {
  Algo algo = Algo::dual_ftrl;
  RegretReport report;
  std::vector<StepRecord> first_trajectory;
  double fluid_discretization_bound = 0.0;  // total over periods
};

// Per trial: draw a trace from the sampling distributions (perturbing if
// needed), learn a plan, draw a request stream from the true distributions
// on a disjoint substream, and run every algorithm on that same stream.
// Trials run in parallel; aggregation order is fixed, so reports depend only
// on the seed.
std::vector<AlgoOutcome> run_monte_carlo(const ScenarioConfig& config,
                                         std::span<const Algo> algos,
                                         const ExperimentOptions& options = {});

// Uniform concentration radius 8 * consumption_bound * sqrt(T ln T).
double concentration_radius(double consumption_bound, std::int64_t horizon);

struct ConcentrationResult {
  double radius = 0.0;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double violation_rate = 0.0;
  double max_observed = 0.0;  // largest sup-deviation seen across trials
};

// Draws trials traces and measures the sup over prices of |trace consumption
// - expected consumption|. The deviation is piecewise constant for finite
// supports, so evaluating at every breakpoint of the union (trace and
// support), at midpoints between consecutive breakpoints, and at one point
// above the largest attains the sup.
ConcentrationResult concentration_check(std::span<const DistSpec> dists,
                                        const InstanceParams& params, std::int64_t trials,
                                        std::uint64_t seed);

}  // namespace pacekit

#endif  // PACEKIT_SIM_HPP
