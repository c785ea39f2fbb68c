#include "aoi/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "aoi/rng.hpp"

namespace aoi {

PenaltyParams::PenaltyParams(double k_, double ck_, double a0_) : k(k_), ck(ck_), a0(a0_) {
  if (!(k >= 1.0) || !std::isfinite(k))
    throw std::invalid_argument("penalty params: exponent k must be >= 1");
  if (!(ck > 0.0) || !std::isfinite(ck))
    throw std::invalid_argument("penalty params: scale ck must be positive");
  if (!(a0 >= 0.0) || !std::isfinite(a0))
    throw std::invalid_argument("penalty params: initial age a0 must be non-negative");
}

double PenaltyParams::d0() const { return elapsed_for(a0); }

double PenaltyParams::age_of(double elapsed) const { return ck * std::pow(elapsed, k); }

double PenaltyParams::elapsed_for(double age) const { return std::pow(age / ck, 1.0 / k); }

DelayModel DelayModel::deterministic(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("delay model: deterministic value must be positive");
  return DelayModel(DelayKind::Deterministic, value, value);
}

DelayModel DelayModel::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw std::invalid_argument("delay model: uniform bounds need 0 <= lo < hi");
  return DelayModel(DelayKind::Uniform, lo, hi);
}

DelayModel DelayModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("delay model: exponential rate must be positive");
  return DelayModel(DelayKind::Exponential, rate, 0.0);
}

double DelayModel::mean() const {
  switch (kind_) {
    case DelayKind::Deterministic: return a_;
    case DelayKind::Uniform: return 0.5 * (a_ + b_);
    case DelayKind::Exponential: return 1.0 / a_;
  }
  return 0.0;
}

double DelayModel::second_moment() const {
  switch (kind_) {
    case DelayKind::Deterministic: return a_ * a_;
    case DelayKind::Uniform: return (a_ * a_ + a_ * b_ + b_ * b_) / 3.0;
    case DelayKind::Exponential: return 2.0 / (a_ * a_);
  }
  return 0.0;
}

double DelayModel::sample(std::mt19937_64& rng) const {
  switch (kind_) {
    case DelayKind::Deterministic: return a_;
    case DelayKind::Uniform: return a_ + (b_ - a_) * uniform01(rng);
    case DelayKind::Exponential: return -std::log1p(-uniform01(rng)) / a_;
  }
  return a_;
}

std::string DelayModel::describe() const {
  char buf[64];
  switch (kind_) {
    case DelayKind::Deterministic: std::snprintf(buf, sizeof buf, "det:%g", a_); break;
    case DelayKind::Uniform: std::snprintf(buf, sizeof buf, "uniform:%g,%g", a_, b_); break;
    case DelayKind::Exponential: std::snprintf(buf, sizeof buf, "exp:%g", a_); break;
  }
  return buf;
}

void validate_policy(const Policy& policy) {
  if (!(policy.horizon > 0.0) || !std::isfinite(policy.horizon))
    throw std::invalid_argument("policy: horizon must be positive");
  double prev = 0.0;
  for (double d : policy.departures) {
    if (!(d >= 0.0) || d > policy.horizon)
      throw std::invalid_argument("policy: departures must lie in [0, horizon]");
    if (d < prev) throw std::invalid_argument("policy: departures must be sorted ascending");
    prev = d;
  }
  if (!policy.departures.empty() && !(policy.critical_age > 0.0))
    throw std::invalid_argument("policy: critical_age must be positive");
}

OrderingViolation::OrderingViolation(std::size_t index_)
    : std::runtime_error("solver: departure ordering violated at update " + std::to_string(index_) +
                         " (expected delay exceeds the equal-peak gap)"),
      index(index_) {}

std::vector<bool> classify_useful(const std::vector<double>& departures,
                                  const std::vector<double>& arrivals, double horizon) {
  if (departures.size() != arrivals.size())
    throw std::invalid_argument("classify_useful: departures/arrivals length mismatch");
  if (!std::is_sorted(departures.begin(), departures.end()))
    throw std::invalid_argument("classify_useful: departures must be sorted ascending");

  const std::size_t n = departures.size();
  std::vector<bool> useful(n, false);
  // An update is overtaken when some later departure arrives no later than it.
  double later_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = n; i-- > 0;) {
    useful[i] = arrivals[i] <= horizon && arrivals[i] < later_min;
    later_min = std::min(later_min, arrivals[i]);
  }
  return useful;
}

double segment_penalty(const Segment& segment, const PenaltyParams& params) {
  const double kp1 = params.k + 1.0;
  return params.ck / kp1 *
         (std::pow(segment.end - segment.offset, kp1) - std::pow(segment.start - segment.offset, kp1));
}

Trajectory build_trajectory(const Policy& policy, const std::vector<double>& sampled_delays,
                            const PenaltyParams& params, const std::vector<bool>& partial_flags) {
  validate_policy(policy);
  const std::size_t n = policy.departures.size();
  if (sampled_delays.size() != n)
    throw std::invalid_argument("build_trajectory: one sampled delay per departure required");
  if (!partial_flags.empty() && partial_flags.size() != n)
    throw std::invalid_argument("build_trajectory: partial_flags length mismatch");
  for (double d : sampled_delays)
    if (!(d >= 0.0)) throw std::invalid_argument("build_trajectory: negative sampled delay");

  Trajectory traj;
  traj.horizon = policy.horizon;
  traj.arrivals.resize(n);
  for (std::size_t i = 0; i < n; ++i) traj.arrivals[i] = policy.departures[i] + sampled_delays[i];
  traj.useful = classify_useful(policy.departures, traj.arrivals, policy.horizon);

  double seg_start = 0.0;
  double offset = -params.d0();
  double prev_post_age = params.a0;  // age right after the previous useful arrival
  for (std::size_t i = 0; i < n; ++i) {
    if (!traj.useful[i]) continue;
    const double t = traj.arrivals[i];
    if (t > seg_start) {
      traj.segments.push_back({seg_start, t, offset});
      seg_start = t;
    }
    const bool partial = !partial_flags.empty() && partial_flags[i];
    if (partial) {
      // Reset level is inherited, so prev_post_age carries over unchanged.
      offset = t - params.elapsed_for(prev_post_age);
    } else {
      offset = policy.departures[i];
      prev_post_age = params.age_of(t - offset);
    }
  }
  // Final segment may be zero-width when an update lands exactly at the
  // horizon; keeping it preserves the right-continuous value at T.
  traj.segments.push_back({seg_start, policy.horizon, offset});

  double total = 0.0;
  for (const Segment& s : traj.segments) total += segment_penalty(s, params);
  traj.total_penalty = total;
  return traj;
}

double age_at(double t, const Trajectory& trajectory, const PenaltyParams& params) {
  if (trajectory.segments.empty()) throw std::invalid_argument("age_at: empty trajectory");
  if (!(t >= 0.0) || t > trajectory.horizon)
    throw std::domain_error("age_at: t outside [0, horizon]");
  auto it = std::upper_bound(trajectory.segments.begin(), trajectory.segments.end(), t,
                             [](double v, const Segment& s) { return v < s.start; });
  --it;  // front().start == 0, so it never underflows
  return params.age_of(t - it->offset);
}

}  // namespace aoi
