#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pacekit/bench.hpp"
#include "pacekit/oracle.hpp"
#include "pacekit/pacing.hpp"
#include "pacekit/scenario.hpp"
#include "pacekit/sim.hpp"
#include "pacekit/trace_io.hpp"
#include "pacekit/traceplan.hpp"
#include "pacekit/verify.hpp"
#include "pacekit/version.hpp"

namespace fs = std::filesystem;

namespace pacekit::cli {

namespace {

std::string provenance(std::uint64_t seed) {
  std::ostringstream out;
  out << "pacekit " << kVersion << " seed=" << seed << " gen=" << kGeneratorVersion;
  return out.str();
}

struct PlanArgs {
  std::string trace_path;
  double budget = 0.0;
  double action_cap = 1.0;
  double rate_bound = 0.0;
  double consumption_bound = 0.0;  // 0: derive from the trace
  double reward_bound = 0.0;       // 0: rate_bound * consumption_bound
  double perturb = 0.0;
  std::uint64_t seed = 0;
  std::string out_path = "targets.csv";
};

// Fills derived bounds and validates. The derived consumption bound is the
// largest consumption in the data; the derived reward bound is the loosest
// value consistent with the rate bound.
InstanceParams make_params(std::span<const Request> requests, double budget, double action_cap,
                           double rate_bound, double consumption_bound, double reward_bound) {
  InstanceParams params;
  params.horizon = static_cast<std::int64_t>(requests.size());
  params.budget = budget;
  params.action_cap = action_cap;
  params.rate_bound = rate_bound;
  if (consumption_bound <= 0.0) {
    double max_b = 0.0;
    for (const Request& r : requests) max_b = std::max(max_b, r.b_coeff);
    consumption_bound = max_b > 0.0 ? max_b * action_cap : 1.0;
  }
  params.consumption_bound = consumption_bound;
  params.reward_bound = reward_bound > 0.0 ? reward_bound : rate_bound * consumption_bound;
  return params;
}

int cmd_plan(const PlanArgs& args) {
  std::vector<Request> requests = read_trace_csv(args.trace_path);
  if (requests.empty()) throw CsvError(args.trace_path + ": trace has no rows");
  InstanceParams params = make_params(requests, args.budget, args.action_cap, args.rate_bound,
                                      args.consumption_bound, args.reward_bound);

  Trace trace = validate_instance(params, std::move(requests));
  if (!trace.general_position && args.perturb > 0.0) {
    trace = perturb_general_position(trace, args.perturb, Rng(args.seed).fork(rng_domain::kPerturb));
    // Perturbation raises rewards by up to the scale; re-derive loose bounds.
    params = make_params(trace.requests, args.budget, args.action_cap, args.rate_bound, 0.0, 0.0);
    trace = validate_instance(params, std::move(trace.requests));
  }
  if (budget_vacuous(params)) {
    std::cerr << "note: budget never binds (budget >= consumption_bound * horizon)\n";
  }

  const TargetPlan plan = learn_plan(trace, params.budget, params.action_cap);
  std::cout << "mu_tilde = " << format_double(plan.empirical_dual) << "\n";
  std::cout << "total_targets = " << format_double(plan.total_targets) << "\n";

  std::ofstream out(args.out_path);
  if (!out) throw IoError("cannot write " + args.out_path);
  out << "# " << provenance(args.seed) << "\n";
  out << "t,lambda\n";
  for (std::size_t t = 0; t < plan.targets.size(); ++t) {
    out << (t + 1) << ',' << format_double(plan.targets[t]) << '\n';
  }
  if (!out) throw IoError("write failed: " + args.out_path);
  return kExitOk;
}

struct SimulateArgs {
  std::string algo = "ftrl";
  std::string trace_path;
  std::string stream_path;
  double budget = 0.0;
  double action_cap = 1.0;
  double rate_bound = 0.0;
  double consumption_bound = 0.0;
  double reward_bound = 0.0;
  double perturb = 1e-9;
  std::string regularizer = "quadratic";
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string out_path = "episode.csv";
};

bool looks_like_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    return line[start] == '[';
  }
  return false;
}

std::vector<Request> load_stream(const SimulateArgs& args) {
  if (looks_like_scenario(args.stream_path)) {
    const Scenario scenario = parse_scenario_file(args.stream_path);
    return sample_trace(scenario.config.true_dists, Rng(args.seed).fork(rng_domain::kStream))
        .requests;
  }
  return read_trace_csv(args.stream_path);
}

void write_episode_csv(const std::string& path, const EpisodeResult& episode,
                       std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "# " << provenance(seed) << "\n";
  out << "t,mu,action,reward,consumption,budget_remaining\n";
  for (const StepRecord& rec : episode.steps) {
    out << rec.t << ',' << format_double(rec.price) << ',' << format_double(rec.action) << ','
        << format_double(rec.reward) << ',' << format_double(rec.consumption) << ','
        << format_double(rec.budget_remaining) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

int cmd_simulate(const SimulateArgs& args) {
  const std::vector<Request> stream = load_stream(args);
  if (stream.empty()) throw CsvError(args.stream_path + ": stream has no rows");

  std::vector<Request> plan_requests;
  if (!args.trace_path.empty()) plan_requests = read_trace_csv(args.trace_path);

  const InstanceParams params =
      make_params(stream, args.budget, args.action_cap, args.rate_bound,
                  args.consumption_bound, args.reward_bound);

  const RegularizerKind kind = args.regularizer == "entropy" ? RegularizerKind::shifted_entropy
                                                             : RegularizerKind::quadratic;
  const RegularizerSpec reg = make_regularizer(kind, params.rate_bound);
  const double eta = args.eta > 0.0 ? args.eta : default_step_size(reg, params.horizon);

  EpisodeResult episode;
  if (args.algo == "fixed") {
    episode = run_fixed_target(stream, params, reg, eta);
  } else {
    if (args.trace_path.empty()) {
      throw ConfigError("--trace is required for algo '" + args.algo + "'");
    }
    InstanceParams trace_params =
        make_params(plan_requests, args.budget, args.action_cap, args.rate_bound,
                    args.consumption_bound, args.reward_bound);
    Trace trace = validate_instance(trace_params, std::move(plan_requests));
    if (!trace.general_position && args.perturb > 0.0) {
      trace = perturb_general_position(trace, args.perturb,
                                       Rng(args.seed).fork(rng_domain::kPerturb));
    }
    const TargetPlan plan = learn_plan(trace, params.budget, params.action_cap);
    if (args.algo == "static") {
      episode = run_static_dual(stream, plan.empirical_dual, params);
    } else if (args.algo == "ftrl") {
      if (plan.targets.size() != stream.size()) {
        throw LengthMismatch("trace and stream must have the same number of periods");
      }
      episode = run_dual_ftrl(stream, plan, params, reg, eta);
    } else {
      throw ConfigError("unknown algo '" + args.algo + "'");
    }
  }

  write_episode_csv(args.out_path, episode, args.seed);
  std::cout << "total_reward = " << format_double(episode.total_reward) << "\n"
            << "total_consumption = " << format_double(episode.total_consumption) << "\n"
            << "stop_time = " << episode.stop_time << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string dists_path;
  double budget = -1.0;  // <0: take the scenario's budget
  int fluid_grid = 0;    // 0: scenario setting
  std::string out_path = "beta.csv";
};

int cmd_bench(const BenchArgs& args) {
  const Scenario scenario = parse_scenario_file(args.dists_path);
  const InstanceParams& params = scenario.config.params;
  const double budget = args.budget >= 0.0 ? args.budget : params.budget;
  const int grid = args.fluid_grid > 0 ? args.fluid_grid : scenario.options.fluid_grid;

  std::vector<FiniteSupport> finite;
  double disc_bound = 0.0;
  for (const DistSpec& d : scenario.config.true_dists) {
    finite.push_back(to_finite(d, grid));
    disc_bound += discretization_bound(d, grid, params.action_cap);
  }
  const FluidSolution fluid = fluid_value(finite, budget, params.action_cap);

  std::cout << "fluid = " << format_double(fluid.value) << "\n"
            << "optimal_dual = " << format_double(fluid.optimal_dual) << "\n"
            << "boundary_fraction = " << format_double(fluid.boundary_fraction) << "\n";
  if (disc_bound > 0.0) {
    std::cout << "discretization_bound = " << format_double(disc_bound) << "\n";
  }

  std::ofstream out(args.out_path);
  if (!out) throw IoError("cannot write " + args.out_path);
  out << "# " << provenance(scenario.config.seed) << "\n";
  out << "t,beta\n";
  for (std::size_t t = 0; t < fluid.per_period_consumption.size(); ++t) {
    out << (t + 1) << ',' << format_double(fluid.per_period_consumption[t]) << '\n';
  }
  if (!out) throw IoError("write failed: " + args.out_path);
  return kExitOk;
}

struct ExperimentArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> horizon;
  int threads = 0;
};

void override_horizon(Scenario& scenario, std::int64_t horizon) {
  auto uniform = [](const std::vector<DistSpec>& dists) {
    return std::all_of(dists.begin(), dists.end(),
                       [&](const DistSpec& d) { return d == dists.front(); });
  };
  if (!uniform(scenario.config.true_dists) || !uniform(scenario.config.sample_dists)) {
    throw ConfigError("--horizon override requires uniform ('all') distribution sections");
  }
  scenario.config.params.horizon = horizon;
  scenario.config.true_dists.assign(static_cast<std::size_t>(horizon),
                                    scenario.config.true_dists.front());
  scenario.config.sample_dists.assign(static_cast<std::size_t>(horizon),
                                      scenario.config.sample_dists.front());
}

int cmd_experiment(const ExperimentArgs& args) {
  Scenario scenario = parse_scenario_file(args.config_path);
  if (args.seed) scenario.config.seed = *args.seed;
  if (args.trials) scenario.config.trials = *args.trials;
  if (args.horizon) override_horizon(scenario, *args.horizon);
  scenario.options.threads = args.threads;

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + args.out_dir + ": " + ec.message());

  std::vector<std::string> written;
  auto cleanup = [&written] {
    for (const std::string& path : written) {
      std::error_code ignore;
      fs::remove(path, ignore);
    }
  };

  try {
    const std::vector<AlgoOutcome> outcomes =
        run_monte_carlo(scenario.config, scenario.algos, scenario.options);

    const std::string report_path = (fs::path(args.out_dir) / "report.csv").string();
    {
      std::ofstream out(report_path);
      if (!out) throw IoError("cannot write " + report_path);
      written.push_back(report_path);
      out << "# " << provenance(scenario.config.seed) << "\n";
      if (!outcomes.empty() && outcomes.front().fluid_discretization_bound > 0.0) {
        out << "# fluid_discretization_bound="
            << format_double(outcomes.front().fluid_discretization_bound) << "\n";
      }
      out << "algo,fluid,mean_reward,stderr,regret,R2,R3,total_W,trials,seed\n";
      for (const AlgoOutcome& outcome : outcomes) {
        const RegretReport& r = outcome.report;
        out << algo_name(outcome.algo) << ',' << format_double(r.fluid_value) << ','
            << format_double(r.mean_reward) << ',' << format_double(r.std_error) << ','
            << format_double(r.regret) << ',' << format_double(r.r2) << ','
            << format_double(r.r3_estimate) << ',' << format_double(r.total_wasserstein) << ','
            << r.trials << ',' << scenario.config.seed << '\n';
      }
      if (!out) throw IoError("write failed: " + report_path);
    }

    for (const AlgoOutcome& outcome : outcomes) {
      if (outcome.first_trajectory.empty()) continue;
      const std::string traj_path =
          (fs::path(args.out_dir) / ("trajectory_" + algo_name(outcome.algo) + ".csv")).string();
      written.push_back(traj_path);
      EpisodeResult episode;
      episode.steps = outcome.first_trajectory;
      write_episode_csv(traj_path, episode, scenario.config.seed);
    }
  } catch (...) {
    cleanup();
    throw;
  }

  std::cout << "wrote " << written.size() << " files to " << args.out_dir << "\n";
  return kExitOk;
}

struct VerifyArgs {
  bool quick = false;
  std::uint64_t seed = 20230601;
};

int cmd_verify(const VerifyArgs& args) {
  const std::vector<verify::SuiteResult> results =
      verify::run_all(args.seed, args.quick ? 10 : 1);
  bool all_pass = true;
  std::printf("%-26s %10s %10s  %s\n", "property", "instances", "violations", "result");
  for (const auto& r : results) {
    std::printf("%-26s %10lld %10lld  %s\n", r.name.c_str(),
                static_cast<long long>(r.instances), static_cast<long long>(r.violations),
                r.pass() ? "PASS" : "FAIL");
    if (!r.detail.empty()) std::printf("  %s\n", r.detail.c_str());
    all_pass = all_pass && r.pass();
  }
  std::printf("seed %llu (replay with --seed)\n", static_cast<unsigned long long>(args.seed));
  return all_pass ? kExitOk : kExitPropertyFailure;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"pacekit: budget pacing from a single historical trace"};
  app.require_subcommand(1);

  PlanArgs plan;
  CLI::App* plan_cmd = app.add_subcommand("plan", "learn the empirical dual and target spend");
  plan_cmd->add_option("--trace", plan.trace_path, "trace CSV (t,f_coeff,b_coeff)")->required();
  plan_cmd->add_option("--budget", plan.budget, "total budget")->required();
  plan_cmd->add_option("--xbar", plan.action_cap, "action cap")->required();
  plan_cmd->add_option("--kappa", plan.rate_bound, "rate bound")->required();
  plan_cmd->add_option("--bbar", plan.consumption_bound, "consumption bound (default: derived)");
  plan_cmd->add_option("--fbar", plan.reward_bound, "reward bound (default: kappa*bbar)");
  plan_cmd->add_option("--perturb", plan.perturb, "perturbation scale for degenerate traces");
  plan_cmd->add_option("--seed", plan.seed, "seed for the perturbation stream");
  plan_cmd->add_option("--out", plan.out_path, "targets CSV path (default targets.csv)");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run one policy on a request stream");
  sim_cmd->add_option("--algo", sim.algo, "ftrl|static|fixed")->required();
  sim_cmd->add_option("--trace", sim.trace_path, "trace CSV used to learn the plan");
  sim_cmd->add_option("--stream", sim.stream_path, "request stream: CSV or scenario config")
      ->required();
  sim_cmd->add_option("--budget", sim.budget, "total budget")->required();
  sim_cmd->add_option("--xbar", sim.action_cap, "action cap")->required();
  sim_cmd->add_option("--kappa", sim.rate_bound, "rate bound")->required();
  sim_cmd->add_option("--bbar", sim.consumption_bound, "consumption bound (default: derived)");
  sim_cmd->add_option("--fbar", sim.reward_bound, "reward bound (default: kappa*bbar)");
  sim_cmd->add_option("--perturb", sim.perturb, "perturbation scale for degenerate traces");
  sim_cmd->add_option("--reg", sim.regularizer, "quadratic|entropy");
  sim_cmd->add_option("--eta", sim.eta, "step size (default sqrt(range/T))");
  sim_cmd->add_option("--seed", sim.seed, "seed when sampling the stream from a config");
  sim_cmd->add_option("--out", sim.out_path, "episode CSV path (default episode.csv)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "exact fluid benchmark for a scenario");
  bench_cmd->add_option("--dists", bench.dists_path, "scenario config file")->required();
  bench_cmd->add_option("--budget", bench.budget, "budget override")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--grid", bench.fluid_grid, "atoms per uniform family");
  bench_cmd->add_option("--out", bench.out_path, "per-period consumption CSV");

  ExperimentArgs exp;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Monte Carlo regret experiment");
  exp_cmd->add_option("--config", exp.config_path, "scenario config file")->required();
  exp_cmd->add_option("--out", exp.out_dir, "output directory")->required();
  std::uint64_t seed_override = 0;
  std::int64_t trials_override = 0, horizon_override = 0;
  CLI::Option* seed_opt = exp_cmd->add_option("--seed", seed_override, "seed override");
  CLI::Option* trials_opt = exp_cmd->add_option("--trials", trials_override, "trials override");
  CLI::Option* horizon_opt =
      exp_cmd->add_option("--horizon", horizon_override, "horizon override");
  exp_cmd->add_option("--threads", exp.threads, "worker cap (default PACEKIT_THREADS)");

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the executable property suites");
  verify_cmd->add_flag("--quick", verify_args.quick, "scale instance counts down 10x");
  verify_cmd->add_option("--seed", verify_args.seed, "suite seed (replay)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  if (plan_cmd->parsed()) return cmd_plan(plan);
  if (sim_cmd->parsed()) return cmd_simulate(sim);
  if (bench_cmd->parsed()) return cmd_bench(bench);
  if (exp_cmd->parsed()) {
    if (*seed_opt) exp.seed = seed_override;
    if (*trials_opt) exp.trials = trials_override;
    if (*horizon_opt) exp.horizon = horizon_override;
    return cmd_experiment(exp);
  }
  if (verify_cmd->parsed()) return cmd_verify(verify_args);
  return kExitInputError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace pacekit::cli
