#include "aoi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aoi {

namespace {

struct StepSolution {
  double gap = 0.0;
  std::vector<double> departures;  // subproblem coordinates
};

StepSolution equal_peak_departures(const SolverInput& in) {
  const double d0 = in.params.d0();
  const double sum =
      std::accumulate(in.expected_delays.begin(), in.expected_delays.end(), 0.0);
  StepSolution sol;
  sol.gap = (d0 + in.horizon + sum) / (in.n + 1);
  sol.departures.resize(static_cast<std::size_t>(in.n));
  double prev = -d0;
  for (int i = 0; i < in.n; ++i) {
    prev = prev + sol.gap - in.expected_delays[static_cast<std::size_t>(i)];
    sol.departures[static_cast<std::size_t>(i)] = prev;
  }
  return sol;
}

}  // namespace

void SolverInput::validate() const {
  if (n < 1) throw std::invalid_argument("solver input: need at least one update");
  if (expected_delays.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("solver input: one expected delay per update required");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("solver input: horizon must be positive");
  for (double e : expected_delays)
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::invalid_argument("solver input: expected delays must be positive");
}

bool clamp_triggered(const SolverInput& input) {
  input.validate();
  return equal_peak_departures(input).departures.front() < 0.0;
}

SolverInput recast_after_clamp(const SolverInput& input) {
  if (!clamp_triggered(input))
    throw std::invalid_argument("recast_after_clamp: first departure is non-negative");
  if (input.n == 1)
    throw std::invalid_argument("recast_after_clamp: single update, nothing to re-solve (policy is {0})");
  const double e1 = input.expected_delays.front();
  if (!(input.horizon - e1 > 0.0))
    throw std::invalid_argument("recast_after_clamp: first expected delay swallows the horizon");

  SolverInput sub;
  sub.n = input.n - 1;
  sub.horizon = input.horizon - e1;
  sub.expected_delays.assign(input.expected_delays.begin() + 1, input.expected_delays.end());
  sub.params = PenaltyParams(input.params.k, input.params.ck, input.params.age_of(e1));
  return sub;
}

Policy solve_critical_policy(const SolverInput& input) {
  input.validate();

  Policy policy;
  policy.horizon = input.horizon;

  SolverInput cur = input;
  double shift = 0.0;  // absolute time of the current subproblem origin
  int clamped = 0;

  for (;;) {
    const StepSolution sol = equal_peak_departures(cur);

    if (sol.departures.front() + shift >= 0.0) {
      for (std::size_t i = 1; i < sol.departures.size(); ++i)
        if (sol.departures[i] < sol.departures[i - 1])
          throw OrderingViolation(policy.departures.size() + i + 1);
      for (double d : sol.departures) policy.departures.push_back(d + shift);
      policy.critical_age = cur.params.age_of(sol.gap);
      policy.clamped_count = clamped;
      return policy;
    }

    // First departure of this level would be negative: send it immediately.
    ++clamped;
    policy.departures.push_back(0.0);
    if (cur.n == 1 || !(cur.horizon - cur.expected_delays.front() > 0.0)) {
      // Nothing re-solvable remains; any leftover updates also go at once.
      for (int i = 1; i < cur.n; ++i) {
        policy.departures.push_back(0.0);
        ++clamped;
      }
      policy.critical_age = input.params.age_of(input.horizon);
      policy.clamped_count = clamped;
      return policy;
    }
    shift += cur.expected_delays.front();
    cur = recast_after_clamp(cur);
  }
}

std::vector<std::size_t> reorder_sources(const std::vector<double>& expected_delays,
                                         const SolverInput& input) {
  SolverInput probe = input;
  probe.expected_delays = expected_delays;
  probe.n = static_cast<int>(expected_delays.size());

  std::vector<std::size_t> perm(expected_delays.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (!clamp_triggered(probe)) return perm;

  const auto min_it = std::min_element(expected_delays.begin(), expected_delays.end());
  const auto min_pos = static_cast<std::size_t>(min_it - expected_delays.begin());
  perm.erase(perm.begin() + static_cast<std::ptrdiff_t>(min_pos));
  perm.insert(perm.begin(), min_pos);
  return perm;
}

Policy infinite_horizon_policy(double rho, double window, double expected_delay_mean,
                               const PenaltyParams& params) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("infinite horizon: rho must be positive");
  if (!(window > 0.0) || !std::isfinite(window))
    throw std::invalid_argument("infinite horizon: window must be positive");
  if (!(expected_delay_mean > 0.0))
    throw std::invalid_argument("infinite horizon: expected delay mean must be positive");

  Policy policy;
  policy.horizon = window;
  const double d0 = params.d0();
  const auto count = static_cast<long long>(std::floor(rho * window + 1e-9));
  for (long long i = 1; i <= count; ++i) {
    const double raw = static_cast<double>(i) / rho - d0;
    const double dep = std::max(0.0, raw);
    if (dep > window) break;
    if (raw < 0.0) ++policy.clamped_count;
    policy.departures.push_back(dep);
  }
  policy.critical_age = params.age_of(1.0 / rho + expected_delay_mean);
  return policy;
}

Policy policy_from_departures(std::vector<double> departures, double horizon,
                              const std::vector<double>& expected_delays,
                              const PenaltyParams& params) {
  if (expected_delays.size() != departures.size())
    throw std::invalid_argument("policy_from_departures: one expected delay per departure required");

  Policy policy;
  policy.departures = std::move(departures);
  policy.horizon = horizon;

  double prev = -params.d0();
  double peak = 0.0;
  for (std::size_t i = 0; i < policy.departures.size(); ++i) {
    peak = std::max(peak, params.age_of(policy.departures[i] + expected_delays[i] - prev));
    prev = policy.departures[i];
  }
  peak = std::max(peak, params.age_of(horizon - prev));
  policy.critical_age = peak;

  validate_policy(policy);
  return policy;
}

}  // namespace aoi
