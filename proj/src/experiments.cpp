#include "aoi/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "aoi/rng.hpp"
#include "aoi/solver.hpp"

namespace aoi {

namespace {

void check_budget_args(double rho, double t) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("update budget: rho must be positive");
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("update budget: window must be positive");
}

// Equal-peak schedule for one period of length t with the given initial age.
Policy solve_period(const ScenarioConfig& cfg, double t, const PenaltyParams& params) {
  const int n = budget_for(cfg.rho, t);
  if (n < 1) {
    Policy policy;
    policy.horizon = t;
    policy.critical_age = params.age_of(t + params.d0());
    return policy;
  }
  SolverInput in;
  in.n = n;
  in.horizon = t;
  in.expected_delays.assign(static_cast<std::size_t>(n), cfg.delay_model.mean());
  in.params = params;
  return solve_critical_policy(in);
}

// Rescales totals to per-unit-time statistics.
ExperimentStats per_time(ExperimentStats stats, double elapsed) {
  stats.mean /= elapsed;
  stats.std_dev /= elapsed;
  stats.ci_half_width /= elapsed;
  stats.variance /= elapsed * elapsed;
  if (stats.bound) *stats.bound /= elapsed * elapsed;
  return stats;
}

void attach_bound(ExperimentStats& stats, const Policy& policy,
                  const std::vector<double>& expected_delays, const PenaltyParams& params) {
  const double expected = expected_penalty(policy, expected_delays, params);
  const VarianceBound vb = variance_upper_bound(policy, expected, expected_delays, params);
  if (!vb.flagged) stats.bound = vb.value;
}

}  // namespace

const char* scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::Infinite:
      return "infinite";
    case Scenario::Known:
      return "known";
    case Scenario::Unknown:
      return "unknown";
  }
  throw std::invalid_argument("scenario_name: unknown scenario");
}

int budget_for(double rho, double t) {
  check_budget_args(rho, t);
  return static_cast<int>(std::llround(rho * t));
}

int infinite_update_count(double rho, double t) {
  check_budget_args(rho, t);
  return static_cast<int>(std::floor(rho * t + 1e-9));
}

ExperimentStats run_known_horizon(const ScenarioConfig& cfg, double t) {
  const Policy policy = solve_period(cfg, t, cfg.params);
  const std::vector<double> expected(policy.departures.size(), cfg.delay_model.mean());
  const std::vector<DelayModel> models(policy.departures.size(), cfg.delay_model);

  ExperimentStats stats =
      monte_carlo(policy, models, cfg.params, {}, cfg.trials, cfg.seed, cfg.threads);
  attach_bound(stats, policy, expected, cfg.params);
  return per_time(stats, t);
}

ExperimentStats run_infinite_horizon(const ScenarioConfig& cfg, double t) {
  const Policy policy =
      infinite_horizon_policy(cfg.rho, t, cfg.delay_model.mean(), cfg.params);
  const std::vector<double> expected(policy.departures.size(), cfg.delay_model.mean());
  const std::vector<DelayModel> models(policy.departures.size(), cfg.delay_model);

  ExperimentStats stats =
      monte_carlo(policy, models, cfg.params, {}, cfg.trials, cfg.seed, cfg.threads);
  attach_bound(stats, policy, expected, cfg.params);
  return per_time(stats, t);
}

ExperimentStats run_unknown_horizon(const ScenarioConfig& cfg, double t) {
  const auto periods = static_cast<long long>(std::floor(cfg.total_time / t + 1e-9));
  if (periods < 1)
    throw std::invalid_argument("unknown horizon: total_time shorter than one period");
  const double elapsed = static_cast<double>(periods) * t;

  const auto trial_fn = [&cfg, t, periods](long long trial) {
    std::mt19937_64 rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(trial));
    double carried_age = cfg.params.a0;
    double total = 0.0;
    for (long long p = 0; p < periods; ++p) {
      const PenaltyParams period_params(cfg.params.k, cfg.params.ck, carried_age);
      const Policy policy = solve_period(cfg, t, period_params);
      std::vector<double> delays;
      delays.reserve(policy.departures.size());
      for (std::size_t i = 0; i < policy.departures.size(); ++i)
        delays.push_back(cfg.delay_model.sample(rng));
      const Trajectory traj = build_trajectory(policy, delays, period_params);
      total += traj.total_penalty;
      carried_age = age_at(t, traj, period_params);
    }
    return total;
  };

  ExperimentStats stats = summarize(run_trials(cfg.trials, cfg.threads, trial_fn));
  return per_time(stats, elapsed);
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(cfg.scenarios.size() * cfg.horizon_values.size());
  for (Scenario scenario : cfg.scenarios) {
    for (double t : cfg.horizon_values) {
      SweepRow row;
      row.scenario = scenario;
      row.t = t;
      ExperimentStats stats;
      switch (scenario) {
        case Scenario::Infinite:
          row.n = infinite_update_count(cfg.rho, t);
          stats = run_infinite_horizon(cfg, t);
          break;
        case Scenario::Known:
          row.n = budget_for(cfg.rho, t);
          stats = run_known_horizon(cfg, t);
          break;
        case Scenario::Unknown:
          row.n = budget_for(cfg.rho, t);
          stats = run_unknown_horizon(cfg, t);
          break;
      }
      row.trials = stats.trials;
      row.mean = stats.mean;
      row.std_dev = stats.std_dev;
      row.ci_half_width = stats.ci_half_width;
      row.variance = stats.variance;
      row.bound = stats.bound;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace aoi
