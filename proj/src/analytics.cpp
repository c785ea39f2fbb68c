#include "aoi/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "aoi/rng.hpp"

namespace aoi {

double expected_penalty(const Policy& policy, const std::vector<double>& expected_delays,
                        const PenaltyParams& params) {
  const std::size_t n = policy.departures.size();
  if (expected_delays.size() != n)
    throw std::invalid_argument("expected_penalty: one expected delay per departure required");

  const double kp1 = params.k + 1.0;
  double total = 0.0;
  double prev_departure = -params.d0();
  double prev_delay = params.d0();
  for (std::size_t i = 0; i <= n; ++i) {
    const double next_departure = i < n ? policy.departures[i] : policy.horizon;
    const double next_delay = i < n ? expected_delays[i] : 0.0;
    total += params.ck *
             (std::pow(next_departure + next_delay - prev_departure, kp1) - std::pow(prev_delay, kp1)) /
             kp1;
    prev_departure = next_departure;
    prev_delay = next_delay;
  }
  return total;
}

Policy partial_update_policy(int n, double horizon, const std::vector<double>& expected_delays,
                             const PenaltyParams& params) {
  if (n < 1) throw std::invalid_argument("partial_update_policy: need at least one update");
  if (!(horizon > 0.0)) throw std::invalid_argument("partial_update_policy: horizon must be positive");
  if (expected_delays.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("partial_update_policy: one expected delay per update required");

  Policy policy;
  policy.horizon = horizon;
  const double spacing = horizon / (n + 1);
  for (int i = 1; i <= n; ++i) {
    const double raw = i * spacing - expected_delays[static_cast<std::size_t>(i - 1)];
    if (raw < 0.0) ++policy.clamped_count;
    policy.departures.push_back(std::max(0.0, raw));
  }
  if (!std::is_sorted(policy.departures.begin(), policy.departures.end()))
    throw std::invalid_argument("partial_update_policy: expected delays produce unsorted departures");
  policy.critical_age = params.age_of(spacing + params.d0());
  return policy;
}

double partial_update_penalty_closed_form(int n, double horizon, const PenaltyParams& params) {
  if (n < 0) throw std::invalid_argument("partial penalty: negative update count");
  if (!(horizon > 0.0)) throw std::invalid_argument("partial penalty: horizon must be positive");
  if (params.k != 1.0)
    throw std::domain_error("partial penalty closed form is only defined for k = 1");
  return params.ck * horizon * horizon / (2.0 * (n + 1)) + params.a0 * horizon;
}

bool full_vs_partial_dominates(const std::vector<double>& delays, const PenaltyParams& params) {
  if (params.k != 1.0)
    throw std::domain_error("full-vs-partial comparison is only defined for k = 1");
  const double threshold = params.a0 / params.ck;
  return std::all_of(delays.begin(), delays.end(), [&](double d) { return d <= threshold; });
}

VarianceBound variance_upper_bound(const Policy& policy, double expected_penalty_value,
                                   const std::vector<double>& expected_delays,
                                   const PenaltyParams& params) {
  // The anchor mixes an age with expected delays (time units); kept as stated,
  // with the flag marking the cases where that turns the bound vacuous.
  double anchor = params.a0;
  for (double e : expected_delays) anchor = std::min(anchor, e);

  const double upper_gap = policy.horizon * policy.critical_age - expected_penalty_value;
  const double lower_gap = expected_penalty_value - anchor;
  return {upper_gap * lower_gap, upper_gap < 0.0 || lower_gap < 0.0};
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ExperimentStats summarize(const std::vector<double>& values) {
  const auto n = static_cast<long long>(values.size());
  if (n < 2) throw std::invalid_argument("summarize: at least two trials required (variance undefined)");

  ExperimentStats stats;
  stats.trials = n;
  stats.mean = pairwise_sum(values) / static_cast<double>(n);

  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dev = values[i] - stats.mean;
    sq[i] = dev * dev;
  }
  stats.variance = pairwise_sum(sq) / static_cast<double>(n - 1);
  stats.std_dev = std::sqrt(stats.variance);
  stats.ci_half_width = 1.96 * stats.std_dev / std::sqrt(static_cast<double>(n));
  return stats;
}

std::vector<double> run_trials(long long trials, int threads,
                               const std::function<double(long long)>& trial_fn) {
  if (trials < 0) throw std::invalid_argument("run_trials: negative trial count");
  std::vector<double> values(static_cast<std::size_t>(trials));
  const int workers = std::max(1, threads);
  if (workers == 1 || trials < 2 * workers) {
    for (long long i = 0; i < trials; ++i) values[static_cast<std::size_t>(i)] = trial_fn(i);
    return values;
  }

  const long long chunk = (trials + workers - 1) / workers;
  std::vector<std::future<void>> futures;
  for (int w = 0; w < workers; ++w) {
    const long long lo = w * chunk;
    const long long hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, [lo, hi, &values, &trial_fn] {
      for (long long i = lo; i < hi; ++i) values[static_cast<std::size_t>(i)] = trial_fn(i);
    }));
  }
  for (auto& f : futures) f.get();
  return values;
}

ExperimentStats monte_carlo(const Policy& policy, const std::vector<DelayModel>& delay_models,
                            const PenaltyParams& params, const std::vector<bool>& partial_flags,
                            long long trials, std::uint64_t seed, int threads) {
  validate_policy(policy);
  if (delay_models.size() != policy.departures.size())
    throw std::invalid_argument("monte_carlo: one delay model per departure required");
  if (trials < 2)
    throw std::invalid_argument("monte_carlo: at least two trials required (variance undefined)");

  const auto values = run_trials(trials, threads, [&](long long trial) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(trial));
    std::vector<double> delays(delay_models.size());
    for (std::size_t j = 0; j < delay_models.size(); ++j) delays[j] = delay_models[j].sample(rng);
    return build_trajectory(policy, delays, params, partial_flags).total_penalty;
  });
  return summarize(values);
}

}  // namespace aoi
