#pragma once

#include <cstdint>
#include <vector>

#include "aoi/analytics.hpp"
#include "aoi/core.hpp"

namespace aoi {

enum class Scenario { Infinite, Known, Unknown };

const char* scenario_name(Scenario scenario);

struct ScenarioConfig {
  std::vector<Scenario> scenarios{Scenario::Infinite, Scenario::Known, Scenario::Unknown};
  double rho = 0.4;
  std::vector<double> horizon_values;
  double total_time = 1000.0;  // unknown-horizon scenario only
  long long trials = 10000;
  std::uint64_t seed = 0;
  DelayModel delay_model = DelayModel::uniform(0.0, 1.0);
  PenaltyParams params;
  int threads = 1;
};

// Update budget rho*t rounded to an integer, half away from zero.
int budget_for(double rho, double t);

// Number of departures the steady-state schedule places inside a window.
int infinite_update_count(double rho, double t);

// Each runner reports per-time statistics (total penalty divided by elapsed
// simulated time). Where a fixed schedule exists the variance bound is
// attached, scaled to the same per-time units.
ExperimentStats run_known_horizon(const ScenarioConfig& cfg, double t);
ExperimentStats run_infinite_horizon(const ScenarioConfig& cfg, double t);

// Horizon revealed only piecewise: [0, total_time] is split into periods of
// length t, each solved as a fresh known-horizon problem whose initial age is
// the realized age carried over from the previous period's end.
ExperimentStats run_unknown_horizon(const ScenarioConfig& cfg, double t);

struct SweepRow {
  Scenario scenario;
  double t = 0.0;
  int n = 0;
  long long trials = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double ci_half_width = 0.0;
  double variance = 0.0;
  std::optional<double> bound;
};

std::vector<SweepRow> sweep(const ScenarioConfig& cfg);

}  // namespace aoi
