#pragma once

#include <cstddef>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

struct SolverInput {
  int n = 0;
  double horizon = 0.0;
  std::vector<double> expected_delays;  // one per update, strictly positive
  PenaltyParams params;

  void validate() const;
};

// Critical-age schedule for a known horizon. Departures are spaced so every
// expected age peak (just before each expected arrival and at the horizon)
// equals the same ceiling A*:
//
//   gap g = (d0 + T + sum E[d_i]) / (N + 1),  delta_i = delta_{i-1} + g - E[d_i]
//
// starting from delta_0 = -d0, with A* = ck * g^k. When the first departure
// would be negative it is pinned to 0 and the tail is re-solved on the
// subproblem returned by recast_after_clamp; this repeats while the next
// recovered departure is still negative in absolute time. Throws
// OrderingViolation if a heterogeneous delay makes a departure go backwards.
Policy solve_critical_policy(const SolverInput& input);

// True when solving `input` would pin the first departure to zero.
bool clamp_triggered(const SolverInput& input);

// Subproblem left after pinning the first departure at 0: one update fewer,
// horizon shortened by E[d_1], and initial age ck*E[d_1]^k (the expected age
// right after that first arrival). Absolute departures are recovered by
// adding E[d_1] to subproblem times. Errors when no clamp is needed or when
// nothing remains to re-solve (n == 1, or E[d_1] swallows the horizon).
SolverInput recast_after_clamp(const SolverInput& input);

// Permutation of source indices that avoids wasting the clamped first slot on
// a slow source: identity unless solving triggers a clamp, in which case the
// minimum-expected-delay source moves to the front (remaining order kept).
// Entry i of the result is the original index of the source now in slot i.
std::vector<std::size_t> reorder_sources(const std::vector<double>& expected_delays,
                                         const SolverInput& input);

// Steady-state schedule cut to a finite window: departures i/rho - d0 for
// i = 1.., clamped at 0 and truncated to the window. critical_age is the
// long-run ceiling ck * (1/rho + mean delay)^k.
Policy infinite_horizon_policy(double rho, double window, double expected_delay_mean,
                               const PenaltyParams& params);

// Wraps hand-supplied departures as a Policy; critical_age is the largest
// expected peak age implied by the expected delays.
Policy policy_from_departures(std::vector<double> departures, double horizon,
                              const std::vector<double>& expected_delays,
                              const PenaltyParams& params);

}  // namespace aoi
