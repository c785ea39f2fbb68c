#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

struct ExperimentStats {
  long long trials = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_dev = 0.0;
  double ci_half_width = 0.0;  // 1.96 * std_dev / sqrt(trials)
  std::optional<double> bound;
};

// Expected total penalty of a schedule, integrating the expected age curve
// between consecutive expected arrivals:
//
//   sum_{i=0..N} ck * [ (delta_{i+1} + E[d_{i+1}] - delta_i)^(k+1)
//                       - E[d_i]^(k+1) ] / (k+1)
//
// with the completion delta_0 = -d0, E[d_0] = d0, delta_{N+1} = T and
// E[d_{N+1}] = 0. Exact for k = 1 when arrivals stay ordered and inside the
// horizon; an expected-value approximation otherwise.
double expected_penalty(const Policy& policy, const std::vector<double>& expected_delays,
                        const PenaltyParams& params);

// Evenly spaced target arrivals for partial updates: departure i is
// max(0, i*T/(N+1) - E[d_i]).
Policy partial_update_policy(int n, double horizon, const std::vector<double>& expected_delays,
                             const PenaltyParams& params = {});

// ck*T^2 / (2(N+1)) + a0*T; only defined for k = 1 (throws otherwise).
double partial_update_penalty_closed_form(int n, double horizon, const PenaltyParams& params);

// True when full updates are never worse than partial ones: every delay at
// most a0/ck. Requires k = 1 (the regime where the comparison is known).
bool full_vs_partial_dominates(const std::vector<double>& delays, const PenaltyParams& params);

struct VarianceBound {
  double value = 0.0;
  bool flagged = false;  // a factor went negative; the bound is vacuous
};

// Bhatia-Davis style upper bound on the variance of the total penalty:
// (T*A_crit - S) * (S - min(a0, min_i E[d_i])), with S the expected penalty.
VarianceBound variance_upper_bound(const Policy& policy, double expected_penalty_value,
                                   const std::vector<double>& expected_delays,
                                   const PenaltyParams& params);

// Sum with pairwise splitting; order-insensitive to well below 1e-10 relative.
double pairwise_sum(std::span<const double> values);

// Mean / unbiased variance / 95% normal CI of per-trial values. At least two
// values required.
ExperimentStats summarize(const std::vector<double>& values);

// Evaluates trial_fn(0..trials-1) into a vector, optionally across threads.
// trial_fn must be pure in the trial index; results are identical for any
// thread count.
std::vector<double> run_trials(long long trials, int threads,
                               const std::function<double(long long)>& trial_fn);

// Samples delays per trial from a stream derived from (seed, trial index),
// builds the trajectory, and summarizes total penalties. Needs one delay
// model per departure and at least two trials.
ExperimentStats monte_carlo(const Policy& policy, const std::vector<DelayModel>& delay_models,
                            const PenaltyParams& params, const std::vector<bool>& partial_flags,
                            long long trials, std::uint64_t seed, int threads = 1);

}  // namespace aoi
