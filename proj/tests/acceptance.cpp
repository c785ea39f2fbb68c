// Acceptance gate: one pass/fail line per shipped guarantee. argv[1] is the
// CLI binary, used by the determinism criterion; everything else exercises
// the library directly against its independent oracles.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aoi/analytics.hpp"
#include "aoi/experiments.hpp"
#include "aoi/oracle.hpp"
#include "aoi/rng.hpp"
#include "aoi/solver.hpp"

using namespace aoi;

namespace {

std::string cli;
std::string scratch;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool report(int criterion, const char* what, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what,
              detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

// --- criterion 1: equal-peak structure of the closed-form schedule ---------

bool criterion_equal_peaks() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng = trial_rng(101, 0);

  double worst = 0.0;
  int done = 0;
  while (done < 500) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const double horizon = 1.0 + 99.0 * uniform01(rng);
    const double a0 = 10.0 * uniform01(rng);
    const double k = 1.0 + static_cast<double>(rng() % 3);

    SolverInput in;
    in.n = n;
    in.horizon = horizon;
    for (int i = 0; i < n; ++i)
      in.expected_delays.push_back((0.02 + 0.96 * uniform01(rng)) * horizon / n);
    in.params = PenaltyParams(k, 1.0, a0);
    if (clamp_triggered(in)) continue;  // peaks are equal only off the boundary

    Policy p;
    try {
      p = solve_critical_policy(in);
    } catch (const OrderingViolation&) {
      continue;
    }
    ++done;

    const double d0 = in.params.d0();
    double sum = 0.0;
    double prev = -d0;
    for (int i = 0; i < n; ++i) {
      const double e = in.expected_delays[static_cast<std::size_t>(i)];
      const double peak = in.params.age_of(p.departures[static_cast<std::size_t>(i)] + e - prev);
      worst = std::max(worst, std::abs(peak - p.critical_age) / std::max(1.0, p.critical_age));
      prev = p.departures[static_cast<std::size_t>(i)];
      sum += e;
    }
    const double final_peak = in.params.age_of(horizon - prev);
    worst = std::max(worst, std::abs(final_peak - p.critical_age) / std::max(1.0, p.critical_age));

    const double closed_last = (n * horizon - d0 - sum) / (n + 1);
    worst = std::max(worst, std::abs(prev - closed_last) / std::max(1.0, std::abs(closed_last)));
  }

  const double elapsed = seconds_since(start);
  const bool pass = worst < 1e-9 && elapsed < 1.0;
  return report(1, "closed-form schedules satisfy the equal-peak system",
                pass, fmt("max residual %.2e, %.2fs", worst, elapsed));
}

// --- criterion 2: never beaten by brute force -------------------------------

bool criterion_grid_optimality() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng = trial_rng(202, 0);

  double worst_gap = -1e300;
  int done = 0;
  while (done < 50) {
    const int n = 1 + static_cast<int>(rng() % 2);
    const double k = 1.0 + static_cast<double>(rng() % 2);
    const double horizon = 2.0 + 18.0 * uniform01(rng);
    double a0 = 0.0;
    if (done % 3 == 1) a0 = 5.0 * uniform01(rng);
    if (done % 3 == 2) a0 = (1.0 + 19.0 * uniform01(rng)) * horizon;  // forces clamping

    SolverInput in;
    in.n = n;
    in.horizon = horizon;
    for (int i = 0; i < n; ++i)
      in.expected_delays.push_back((0.05 + 0.40 * uniform01(rng)) * horizon / n);
    in.params = PenaltyParams(k, 1.0, a0);

    Policy solved;
    try {
      solved = solve_critical_policy(in);
    } catch (const OrderingViolation&) {
      continue;
    }
    ++done;

    const double mine = expected_penalty(solved, in.expected_delays, in.params);
    const auto grid = grid_search_policy(in, 0.01 * horizon);
    worst_gap = std::max(worst_gap, (mine - grid.penalty) / std::max(1.0, grid.penalty));
  }

  const double elapsed = seconds_since(start);
  const bool pass = worst_gap <= 1e-9 && elapsed < 60.0;
  return report(2, "schedule penalty never exceeds the grid-search optimum",
                pass, fmt("worst relative gap %.2e, %.2fs", worst_gap, elapsed));
}

// --- criterion 3: closed-form integration vs quadrature ---------------------

bool criterion_integration() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng = trial_rng(303, 0);

  double worst = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const int n = static_cast<int>(rng() % 6);
    const double horizon = 1.0 + 19.0 * uniform01(rng);
    const double k = 1.0 + static_cast<double>(rng() % 3);
    const PenaltyParams params(k, 0.5 + uniform01(rng), 5.0 * uniform01(rng));

    Policy p;
    p.horizon = horizon;
    p.critical_age = 1.0;
    std::vector<double> delays;
    std::vector<bool> flags;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      t += (horizon - t) * 0.6 * uniform01(rng);
      p.departures.push_back(t);
      delays.push_back(3.0 * uniform01(rng));  // long delays overtake and waste
      flags.push_back(rng() % 4 == 0);
    }

    const Trajectory traj = build_trajectory(p, delays, params, flags);
    const double numeric = quadrature_penalty(traj, params, horizon / 20000.0);
    worst = std::max(worst, std::abs(numeric - traj.total_penalty) /
                                std::max(1.0, traj.total_penalty));
  }

  const double elapsed = seconds_since(start);
  const bool pass = worst <= 1e-6 && elapsed < 60.0;
  return report(3, "segment-sum penalties match numeric integration",
                pass, fmt("max relative error %.2e, %.2fs", worst, elapsed));
}

// --- criterion 4: sampled means vs the linear-penalty formula ---------------

bool criterion_linear_exactness() {
  const auto start = std::chrono::steady_clock::now();

  bool pass = true;
  double worst_sigma = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double horizon = 2.5 * n;
    SolverInput in;
    in.n = n;
    in.horizon = horizon;
    in.expected_delays.assign(static_cast<std::size_t>(n), 0.5);
    in.params = PenaltyParams();
    const Policy p = solve_critical_policy(in);

    const std::vector<DelayModel> models(static_cast<std::size_t>(n),
                                         DelayModel::uniform(0.0, 1.0));
    const ExperimentStats stats =
        monte_carlo(p, models, in.params, {}, 100000, 400 + static_cast<std::uint64_t>(n));
    const double formula = expected_penalty(p, in.expected_delays, in.params);
    const double sigmas = std::abs(stats.mean - formula) / stats.ci_half_width;
    worst_sigma = std::max(worst_sigma, sigmas);
    pass = pass && sigmas <= 3.0;
  }

  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 60.0;
  return report(4, "sampled means match the expected-penalty formula at unit exponent",
                pass, fmt("worst deviation %.2f intervals, %.2fs", worst_sigma, elapsed));
}

// --- criterion 5: partial-update closed form and delay independence ---------

bool criterion_partial_closed_form() {
  const auto start = std::chrono::steady_clock::now();
  const double horizon = 10.0;
  const PenaltyParams params(1.0, 1.0, 2.0);

  double worst_closed = 0.0;
  double worst_invariance = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const std::vector<double> delays(static_cast<std::size_t>(n), 0.3);
    const std::vector<bool> flags(static_cast<std::size_t>(n), true);
    const Policy p = partial_update_policy(n, horizon, delays, params);
    const double total = build_trajectory(p, delays, params, flags).total_penalty;
    const double closed = partial_update_penalty_closed_form(n, horizon, params);
    worst_closed = std::max(worst_closed, std::abs(total - closed) / std::max(1.0, closed));

    // Same arrival instants from different delays: the total cannot move.
    Policy q = p;
    std::vector<double> other(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double d = (i % 2 == 0) ? 0.45 : 0.225;
      other[static_cast<std::size_t>(i)] = d;
      q.departures[static_cast<std::size_t>(i)] = (i + 1) * horizon / (n + 1) - d;
    }
    const double moved = build_trajectory(q, other, params, flags).total_penalty;
    worst_invariance =
        std::max(worst_invariance, std::abs(moved - total) / std::max(1.0, total));
  }

  const double elapsed = seconds_since(start);
  const bool pass = worst_closed <= 1e-9 && worst_invariance <= 1e-12;
  return report(5, "partial-update totals match the closed form and ignore delay values",
                pass,
                fmt("closed-form residual %.2e, invariance residual %.2e", worst_closed,
                    worst_invariance) + fmt(", %.2fs", elapsed));
}

// --- criteria 6 & 7: scenario sweep trends and the variance bound -----------

std::vector<SweepRow> sweep_rows;

const SweepRow& cell(Scenario s, double t) {
  for (const SweepRow& row : sweep_rows)
    if (row.scenario == s && row.t == t) return row;
  throw std::logic_error("missing sweep cell");
}

bool criterion_scenario_trends() {
  const auto start = std::chrono::steady_clock::now();

  ScenarioConfig cfg;
  cfg.horizon_values = {25.0, 50.0, 100.0, 250.0};
  cfg.trials = 10000;
  cfg.seed = 606;
  sweep_rows = sweep(cfg);

  bool pass = true;
  std::string detail;
  for (double t : cfg.horizon_values) {
    const SweepRow& known = cell(Scenario::Known, t);
    const SweepRow& infinite = cell(Scenario::Infinite, t);
    if (known.mean > infinite.mean) {
      pass = false;
      detail += fmt("mean order broken at T=%g; ", t);
    }
    if (infinite.std_dev < known.std_dev) {
      pass = false;
      detail += fmt("std order broken at T=%g; ", t);
    }
  }
  const double unknown_small = cell(Scenario::Unknown, 25.0).mean;
  const double infinite_small = cell(Scenario::Infinite, 25.0).mean;
  const double unknown_large = cell(Scenario::Unknown, 250.0).mean;
  const double infinite_large = cell(Scenario::Infinite, 250.0).mean;
  if (!(unknown_small > infinite_small)) {
    pass = false;
    detail += "short-horizon carry-over missing; ";
  }
  if (!(unknown_large <= 1.02 * infinite_large)) {
    pass = false;
    detail += "long-horizon convergence missing; ";
  }

  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 300.0;
  detail += fmt("known/inf@25 %.4f/%.4f", cell(Scenario::Known, 25.0).mean, infinite_small);
  detail += fmt(", unk@25 %.4f", unknown_small);
  detail += fmt(", unk/inf@250 %.4f/%.4f", unknown_large, infinite_large);
  detail += fmt(", %.1fs", elapsed);
  return report(6, "scenario sweep reproduces the reference orderings", pass, detail);
}

bool criterion_variance_bound() {
  bool pass = true;
  int checked = 0;
  double tightest = 1e300;
  for (const SweepRow& row : sweep_rows) {
    if (!row.bound.has_value()) continue;
    ++checked;
    pass = pass && row.variance < *row.bound;
    tightest = std::min(tightest, *row.bound - row.variance);
  }
  pass = pass && checked == 8;  // every fixed-schedule cell carries a bound
  return report(7, "sampled variance stays below the analytic bound", pass,
                fmt("8 cells, smallest margin %.3g", tightest));
}

// --- criterion 8: byte-identical reruns through the CLI ---------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_cli(const std::string& args) {
  const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool rerun_identical(const std::string& args, const std::string& out_path) {
  if (run_cli(args + " --out " + out_path) != 0) return false;
  const std::string csv = slurp(out_path);
  const std::string manifest = slurp(out_path + ".manifest.json");
  if (run_cli(args + " --out " + out_path) != 0) return false;
  return !csv.empty() && csv == slurp(out_path) && manifest == slurp(out_path + ".manifest.json");
}

bool criterion_cli_determinism() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;

  pass = pass && rerun_identical("solve --n 4 --horizon 10 --delays uniform:0,1 --seed 1",
                                 scratch + "/solve.csv");

  const std::string sim = "simulate --from-solve --rho 0.4 --horizon 25"
                          " --delays uniform:0,1 --trials 2000 --seed 8";
  pass = pass && rerun_identical(sim, scratch + "/sim.csv");
  pass = pass && run_cli(sim + " --threads 4 --out " + scratch + "/sim_mt.csv") == 0;
  pass = pass && slurp(scratch + "/sim.csv") == slurp(scratch + "/sim_mt.csv");

  const std::string sweep_cmd = "sweep --horizons 10,25 --trials 500 --seed 9 --total-time 100";
  pass = pass && rerun_identical(sweep_cmd, scratch + "/sweep.csv");
  pass = pass && run_cli(sweep_cmd + " --threads 4 --out " + scratch + "/sweep_mt.csv") == 0;
  pass = pass && slurp(scratch + "/sweep.csv") == slurp(scratch + "/sweep_mt.csv");

  return report(8, "reruns and thread counts leave CSV output byte-identical", pass,
                fmt("%.2fs", seconds_since(start)));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 2;
  }
  cli = argv[1];

  char tmpl[] = "/tmp/aoi_acceptance_XXXXXX";
  if (mkdtemp(tmpl) == nullptr) {
    std::perror("mkdtemp");
    return 2;
  }
  scratch = tmpl;

  bool pass = true;
  pass &= criterion_equal_peaks();
  pass &= criterion_grid_optimality();
  pass &= criterion_integration();
  pass &= criterion_linear_exactness();
  pass &= criterion_partial_closed_form();
  pass &= criterion_scenario_trends();
  pass &= criterion_variance_bound();
  pass &= criterion_cli_determinism();

  std::printf("%s\n", pass ? "acceptance: all criteria passed" : "acceptance: FAILURES above");
  return pass ? 0 : 1;
}
