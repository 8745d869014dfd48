#ifndef PACEKIT_SCENARIO_HPP
#define PACEKIT_SCENARIO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pacekit/sim.hpp"

namespace pacekit {

// Parsed scenario file: the Monte Carlo configuration plus run options.
//
// Format: flat key/value text with four sections.
//
//   [instance]      horizon, budget, action_cap, consumption_bound,
//                   reward_bound, rate_bound
//   [true_dists]    one distribution entry per line:
//                     <range> type=point f=<v> b=<v>
//                     <range> type=uniform_f lo=<v> hi=<v> b=<v>
//                     <range> type=finite atoms=f:b:p,f:b:p,...
//                   where <range> is `all` or `<first>..<last>` (1-based,
//                   inclusive). Ranges must tile 1..horizon exactly.
//   [sample_dists]  same entries, or the single line `copy = true_dists`
//   [run]           seed, trials, perturbation_scale, algos (comma list of
//                   ftrl|static|fixed), regularizer (quadratic|entropy),
//                   eta (number or `auto`), fluid_grid
//
// '#' starts a comment; blank lines are ignored.
struct Scenario {
  ScenarioConfig config;
  ExperimentOptions options;
  std::vector<Algo> algos;
};

Scenario parse_scenario_file(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

}  // namespace pacekit

#endif  // PACEKIT_SCENARIO_HPP
