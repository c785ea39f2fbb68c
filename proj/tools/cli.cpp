// Command-line front end: solve departure schedules, simulate single runs or
// Monte Carlo batches, and sweep the three horizon scenarios to CSV.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/analytics.hpp"
#include "aoi/core.hpp"
#include "aoi/experiments.hpp"
#include "aoi/rng.hpp"
#include "aoi/solver.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g9(double v) {
  if (v == 0.0) v = 0.0;  // never print "-0"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// CSV fields carry 9 significant digits; summaries are aggregated from the
// rounded values so re-parsing a file and re-aggregating reproduces them.
double round9(double v) { return std::strtod(g9(v).c_str(), nullptr); }

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double parse_number(const std::string& token, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size() || token.empty())
    throw UsageError("bad number '" + token + "' in " + context);
  return v;
}

// Grammar: comma-separated list; "name:arg" opens a spec, bare numbers extend
// the last one. "uniform:0,1" is one spec, "det:1,det:1" is two.
std::vector<aoi::DelayModel> parse_delay_specs(const std::string& text) {
  struct RawSpec {
    std::string name;
    std::vector<double> args;
  };
  std::vector<RawSpec> specs;
  for (const std::string& token : split(text, ',')) {
    const auto colon = token.find(':');
    if (colon != std::string::npos) {
      RawSpec spec;
      spec.name = token.substr(0, colon);
      const std::string rest = token.substr(colon + 1);
      if (!rest.empty()) spec.args.push_back(parse_number(rest, "delay spec '" + token + "'"));
      specs.push_back(std::move(spec));
    } else {
      if (specs.empty())
        throw UsageError("bad delay spec '" + token + "': expected name:params");
      specs.back().args.push_back(parse_number(token, "delay spec list"));
    }
  }
  if (specs.empty()) throw UsageError("empty delay spec");

  std::vector<aoi::DelayModel> models;
  models.reserve(specs.size());
  for (const RawSpec& spec : specs) {
    if (spec.name == "det") {
      if (spec.args.size() != 1)
        throw UsageError("delay spec 'det' takes one value, got " + std::to_string(spec.args.size()));
      models.push_back(aoi::DelayModel::deterministic(spec.args[0]));
    } else if (spec.name == "uniform") {
      if (spec.args.size() != 2)
        throw UsageError("delay spec 'uniform' takes lo,hi, got " + std::to_string(spec.args.size()));
      models.push_back(aoi::DelayModel::uniform(spec.args[0], spec.args[1]));
    } else if (spec.name == "exp") {
      if (spec.args.size() != 1)
        throw UsageError("delay spec 'exp' takes a rate, got " + std::to_string(spec.args.size()));
      models.push_back(aoi::DelayModel::exponential(spec.args[0]));
    } else {
      throw UsageError("unknown delay distribution '" + spec.name + "'");
    }
  }
  return models;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("AOI_SEED");
  if (env == nullptr || *env == '\0') return 0;
  return std::strtoull(env, nullptr, 10);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

void write_manifest(const std::string& command, const std::string& out_path, std::uint64_t seed) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config_path"] = nullptr;
  manifest["seed"] = seed;
  manifest["tool_version"] = kToolVersion;
  manifest["emitted_files"] = nlohmann::json::array({out_path});
  write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

// Flags shared by solve and simulate's --from-solve path.
struct ModelFlags {
  double horizon = 0.0;
  double a0 = 0.0;
  double k = 1.0;
  double ck = 1.0;
  std::string delays;
  int n = 0;
  double rho = 0.0;
  bool n_given = false;
  bool rho_given = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags, bool delays_required) {
  cmd->add_option("--horizon", flags.horizon, "Horizon length T")->required();
  cmd->add_option("--a0", flags.a0, "Initial age");
  cmd->add_option("--k", flags.k, "Penalty exponent (>= 1)");
  cmd->add_option("--ck", flags.ck, "Penalty scale");
  auto* delays = cmd->add_option(
      "--delays", flags.delays,
      "Comma list of delay specs: det:c | uniform:lo,hi | exp:rate; a single spec is replicated");
  if (delays_required) delays->required();
}

void add_budget_flags(CLI::App* cmd, ModelFlags& flags) {
  auto* n_opt = cmd->add_option("--n", flags.n, "Number of updates");
  auto* rho_opt =
      cmd->add_option("--rho", flags.rho, "Update rate; expands to n = round(rho * horizon)");
  n_opt->excludes(rho_opt);
  rho_opt->excludes(n_opt);
  cmd->callback([&flags, n_opt, rho_opt] {
    flags.n_given = n_opt->count() > 0;
    flags.rho_given = rho_opt->count() > 0;
  });
}

// Replicates a single spec to the requested budget and checks the count.
std::vector<aoi::DelayModel> materialize_models(const ModelFlags& flags, int n) {
  std::vector<aoi::DelayModel> models = parse_delay_specs(flags.delays);
  if (models.size() == 1 && n > 1) models.assign(static_cast<std::size_t>(n), models.front());
  if (static_cast<int>(models.size()) != n)
    throw UsageError("expected " + std::to_string(n) + " delay specs, got " +
                     std::to_string(models.size()));
  return models;
}

int resolve_budget(const ModelFlags& flags) {
  if (flags.n_given) return flags.n;
  if (flags.rho_given) return aoi::budget_for(flags.rho, flags.horizon);
  return static_cast<int>(parse_delay_specs(flags.delays).size());
}

struct SolvedModel {
  aoi::Policy policy;
  std::vector<aoi::DelayModel> models;
  std::vector<double> expected;
  aoi::PenaltyParams params;
};

SolvedModel solve_from_flags(const ModelFlags& flags) {
  SolvedModel out;
  out.params = aoi::PenaltyParams(flags.k, flags.ck, flags.a0);
  const int n = resolve_budget(flags);
  out.models = materialize_models(flags, n);
  out.expected.reserve(out.models.size());
  for (const aoi::DelayModel& m : out.models) out.expected.push_back(m.mean());

  aoi::SolverInput in;
  in.n = n;
  in.horizon = flags.horizon;
  in.expected_delays = out.expected;
  in.params = out.params;
  out.policy = aoi::solve_critical_policy(in);
  return out;
}

std::string policy_line(const aoi::Policy& policy) {
  std::string line = "δ = ";
  for (std::size_t i = 0; i < policy.departures.size(); ++i) {
    if (i > 0) line += ", ";
    line += f6(policy.departures[i]);
  }
  line += "; A* = " + f6(policy.critical_age);
  line += "; clamped = " + std::to_string(policy.clamped_count);
  return line;
}

int run_solve(const ModelFlags& flags, const std::string& out_path, std::uint64_t seed) {
  const SolvedModel solved = solve_from_flags(flags);
  std::printf("%s\n", policy_line(solved.policy).c_str());

  if (!out_path.empty()) {
    std::string csv = "index,departure,expected_delay\n";
    for (std::size_t i = 0; i < solved.policy.departures.size(); ++i) {
      csv += std::to_string(i) + "," + g9(solved.policy.departures[i]) + "," +
             g9(solved.expected[i]) + "\n";
    }
    write_file(out_path, csv);
    write_manifest("solve", out_path, seed);
  }
  return 0;
}

struct SimulateFlags {
  ModelFlags model;
  std::string departures;
  bool from_solve = false;
  std::string partial;
  long long trials = 1;
  int threads = 1;
};

int run_simulate(const SimulateFlags& flags, const std::string& out_path, std::uint64_t seed) {
  if (flags.from_solve == !flags.departures.empty())
    throw UsageError("pass exactly one of --departures or --from-solve");

  SolvedModel solved;
  if (flags.from_solve) {
    solved = solve_from_flags(flags.model);
  } else {
    std::vector<double> departures;
    for (const std::string& token : split(flags.departures, ','))
      departures.push_back(parse_number(token, "--departures"));
    solved.params = aoi::PenaltyParams(flags.model.k, flags.model.ck, flags.model.a0);
    solved.models = materialize_models(flags.model, static_cast<int>(departures.size()));
    for (const aoi::DelayModel& m : solved.models) solved.expected.push_back(m.mean());
    solved.policy = aoi::policy_from_departures(std::move(departures), flags.model.horizon,
                                                solved.expected, solved.params);
  }

  const std::size_t n = solved.policy.departures.size();
  std::vector<bool> partial_flags;
  if (!flags.partial.empty()) {
    partial_flags.assign(n, false);
    for (const std::string& token : split(flags.partial, ',')) {
      const double idx = parse_number(token, "--partial");
      const auto i = static_cast<long long>(idx);
      if (static_cast<double>(i) != idx || i < 1 || i > static_cast<long long>(n))
        throw UsageError("--partial index '" + token + "' out of range 1.." + std::to_string(n));
      partial_flags[static_cast<std::size_t>(i - 1)] = true;
    }
  }

  const auto run_one = [&](long long trial) {
    std::mt19937_64 rng = aoi::trial_rng(seed, static_cast<std::uint64_t>(trial));
    std::vector<double> delays;
    delays.reserve(n);
    for (const aoi::DelayModel& m : solved.models) delays.push_back(m.sample(rng));
    return aoi::build_trajectory(solved.policy, delays, solved.params, partial_flags);
  };

  std::string csv;
  if (flags.trials == 1) {
    const aoi::Trajectory traj = run_one(0);
    csv = "start,end,offset,segment_penalty\n";
    for (const aoi::Segment& seg : traj.segments) {
      csv += g9(seg.start) + "," + g9(seg.end) + "," + g9(seg.offset) + "," +
             g9(aoi::segment_penalty(seg, solved.params)) + "\n";
    }
    std::printf("total_penalty = %s\n", f6(traj.total_penalty).c_str());
  } else {
    const std::vector<double> totals = aoi::run_trials(
        flags.trials, flags.threads,
        [&](long long trial) { return run_one(trial).total_penalty; });
    csv = "trial,total_penalty\n";
    std::vector<double> rounded;
    rounded.reserve(totals.size());
    for (std::size_t i = 0; i < totals.size(); ++i) {
      csv += std::to_string(i) + "," + g9(totals[i]) + "\n";
      rounded.push_back(round9(totals[i]));
    }
    const aoi::ExperimentStats stats = aoi::summarize(rounded);
    csv += "summary," + g9(stats.mean) + "," + g9(stats.std_dev) + "," +
           g9(stats.ci_half_width) + "\n";
    std::printf("mean = %s, std = %s, ci = %s (%lld trials)\n", f6(stats.mean).c_str(),
                f6(stats.std_dev).c_str(), f6(stats.ci_half_width).c_str(), stats.trials);
  }

  if (!out_path.empty()) {
    write_file(out_path, csv);
    write_manifest("simulate", out_path, seed);
  } else {
    std::fputs(csv.c_str(), stdout);
  }
  return 0;
}

struct SweepFlags {
  std::string scenarios = "infinite,known,unknown";
  double rho = 0.4;
  std::string horizons;
  long long trials = 10000;
  double total_time = 1000.0;
  std::string delays = "uniform:0,1";
  double a0 = 0.0;
  double k = 1.0;
  double ck = 1.0;
  int threads = 1;
};

int run_sweep(const SweepFlags& flags, const std::string& out_path, std::uint64_t seed) {
  aoi::ScenarioConfig cfg;
  cfg.scenarios.clear();
  for (const std::string& token : split(flags.scenarios, ',')) {
    if (token == "infinite")
      cfg.scenarios.push_back(aoi::Scenario::Infinite);
    else if (token == "known")
      cfg.scenarios.push_back(aoi::Scenario::Known);
    else if (token == "unknown")
      cfg.scenarios.push_back(aoi::Scenario::Unknown);
    else
      throw UsageError("unknown scenario '" + token + "'");
  }
  if (cfg.scenarios.empty()) throw UsageError("empty scenario list");

  for (const std::string& token : split(flags.horizons, ','))
    cfg.horizon_values.push_back(parse_number(token, "--horizons"));
  if (cfg.horizon_values.empty()) throw UsageError("empty horizon list");

  const std::vector<aoi::DelayModel> models = parse_delay_specs(flags.delays);
  if (models.size() != 1)
    throw UsageError("sweep takes a single delay spec, got " + std::to_string(models.size()));

  cfg.rho = flags.rho;
  cfg.total_time = flags.total_time;
  cfg.trials = flags.trials;
  cfg.seed = seed;
  cfg.delay_model = models.front();
  cfg.params = aoi::PenaltyParams(flags.k, flags.ck, flags.a0);
  cfg.threads = flags.threads;

  const std::vector<aoi::SweepRow> rows = aoi::sweep(cfg);
  std::string csv = "scenario,T,N,trials,mean_penalty_per_time,std_penalty_per_time,ci_half_width\n";
  for (const aoi::SweepRow& row : rows) {
    csv += std::string(aoi::scenario_name(row.scenario)) + "," + g9(row.t) + "," +
           std::to_string(row.n) + "," + std::to_string(row.trials) + "," + g9(row.mean) + "," +
           g9(row.std_dev) + "," + g9(row.ci_half_width) + "\n";
  }

  if (!out_path.empty()) {
    write_file(out_path, csv);
    write_manifest("sweep", out_path, seed);
    std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  } else {
    std::fputs(csv.c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information scheduling and simulation toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();

  ModelFlags solve_flags;
  std::string solve_out;
  CLI::App* solve = app.add_subcommand("solve", "Compute the equal-peak departure schedule");
  add_model_flags(solve, solve_flags, true);
  add_budget_flags(solve, solve_flags);
  solve->add_option("--out", solve_out, "Write the schedule as CSV");
  solve->add_option("--seed", seed, "Seed recorded in the manifest");

  SimulateFlags sim_flags;
  std::string sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a schedule with sampled delays");
  add_model_flags(simulate, sim_flags.model, true);
  add_budget_flags(simulate, sim_flags.model);
  simulate->add_option("--departures", sim_flags.departures, "Comma list of departure times");
  simulate->add_flag("--from-solve", sim_flags.from_solve,
                     "Solve the schedule from --n/--rho and --delays instead");
  simulate->add_option("--partial", sim_flags.partial, "1-based indices sent as partial updates");
  simulate->add_option("--trials", sim_flags.trials, "Trial count (1 emits segments, >1 totals)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim_flags.threads, "Worker threads for trials")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Trial RNG seed");
  simulate->add_option("--out", sim_out, "Write the CSV here instead of stdout");

  SweepFlags sweep_flags;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep horizon scenarios to CSV");
  sweep->add_option("--scenarios", sweep_flags.scenarios, "Subset of infinite,known,unknown");
  sweep->add_option("--rho", sweep_flags.rho, "Update rate N/T");
  sweep->add_option("--horizons", sweep_flags.horizons, "Comma list of T values")->required();
  sweep->add_option("--trials", sweep_flags.trials, "Monte Carlo trials per cell")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--total-time", sweep_flags.total_time,
                    "Total simulated time for the unknown-horizon scenario");
  sweep->add_option("--delays", sweep_flags.delays, "Single delay spec shared by all updates");
  sweep->add_option("--a0", sweep_flags.a0, "Initial age");
  sweep->add_option("--k", sweep_flags.k, "Penalty exponent");
  sweep->add_option("--ck", sweep_flags.ck, "Penalty scale");
  sweep->add_option("--threads", sweep_flags.threads, "Worker threads for trials")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Trial RNG seed");
  sweep->add_option("--out", sweep_out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    if (solve->parsed()) return run_solve(solve_flags, solve_out, seed);
    if (simulate->parsed()) return run_simulate(sim_flags, sim_out, seed);
    if (sweep->parsed()) return run_sweep(sweep_flags, sweep_out, seed);
  } catch (const aoi::OrderingViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const aoi::ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::bad_alloc&) {
    std::fputs("error: out of memory\n", stderr);
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
