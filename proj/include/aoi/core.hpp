#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

// Polynomial age penalty: a segment that was reset at time `offset` costs
// ck * (t - offset)^k at time t. The initial age a0 is folded in through
// d0 = (a0/ck)^(1/k), the time-units equivalent of a0, so the pre-arrival
// segment can be written with offset -d0.
struct PenaltyParams {
  double k = 1.0;
  double ck = 1.0;
  double a0 = 0.0;

  PenaltyParams() = default;
  PenaltyParams(double k_, double ck_, double a0_);

  double d0() const;
  double age_of(double elapsed) const;   // ck * elapsed^k
  double elapsed_for(double age) const;  // inverse: (age/ck)^(1/k)
};

enum class DelayKind { Deterministic, Uniform, Exponential };

// Network delay of one update. Delays are non-negative; the uniform lower
// bound may be zero, everything else is strictly positive.
class DelayModel {
 public:
  static DelayModel deterministic(double value);
  static DelayModel uniform(double lo, double hi);
  static DelayModel exponential(double rate);

  DelayKind kind() const { return kind_; }
  double mean() const;
  double second_moment() const;
  double sample(std::mt19937_64& rng) const;
  std::string describe() const;

 private:
  DelayModel(DelayKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  DelayKind kind_;
  double a_;  // value / lower bound / rate
  double b_;  // upper bound (uniform only)
};

// Departure schedule over [0, horizon]. critical_age is the equal-peak
// ceiling for solver output; for hand-built schedules it is the largest
// expected peak age. clamped_count says how many departures were forced to 0.
struct Policy {
  std::vector<double> departures;
  double horizon = 0.0;
  double critical_age = 0.0;
  int clamped_count = 0;
};

// Throws std::invalid_argument unless departures are sorted, inside
// [0, horizon], and critical_age is positive when there is at least one update.
void validate_policy(const Policy& policy);

// One piece of the realized age curve: age(t) = ck * (t - offset)^k on
// [start, end). offset <= start always holds.
struct Segment {
  double start;
  double end;
  double offset;
};

struct Trajectory {
  std::vector<double> arrivals;
  std::vector<bool> useful;
  std::vector<Segment> segments;
  double total_penalty = 0.0;
  double horizon = 0.0;
};

// Raised by the schedule solver when an expected delay exceeds the equal-peak
// gap and the recursion would move a departure backwards.
struct OrderingViolation : std::runtime_error {
  explicit OrderingViolation(std::size_t index_);
  std::size_t index;  // 1-based update whose departure went backwards
};

// Raised when a requested computation would exceed a hard size budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Age at time t, right-continuous at arrivals (an update landing exactly at t
// is already counted). t outside [0, horizon] is a domain error.
double age_at(double t, const Trajectory& trajectory, const PenaltyParams& params);

// useful[i] holds iff arrivals[i] <= horizon and no later-departed update
// arrives at or before it; simultaneous arrivals go to the later departure.
// departures must be sorted ascending and match arrivals in length.
std::vector<bool> classify_useful(const std::vector<double>& departures,
                                  const std::vector<double>& arrivals,
                                  double horizon);

// Realizes one run of a policy with the given sampled delays. A full update
// resets the age to ck*(t - departure)^k; a partial update resets it to the
// age right after the previous useful arrival (the start of the horizon for
// the first one), even when that is higher than the current age. Wasted
// updates leave the curve untouched. partial_flags empty means all full.
Trajectory build_trajectory(const Policy& policy,
                            const std::vector<double>& sampled_delays,
                            const PenaltyParams& params,
                            const std::vector<bool>& partial_flags = {});

// Exact integral of one segment's age curve.
double segment_penalty(const Segment& segment, const PenaltyParams& params);

}  // namespace aoi
