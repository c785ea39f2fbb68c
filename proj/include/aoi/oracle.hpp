#pragma once

#include "aoi/core.hpp"
#include "aoi/solver.hpp"

namespace aoi {

// Brute-force checks used by the test suite. Both deliberately avoid the
// closed-form integration and solver recursions they are meant to verify.

// Composite trapezoid integration of the age curve over [0, horizon], with
// breakpoints forced at every arrival so discontinuities are never straddled.
double quadrature_penalty(const Trajectory& trajectory, const PenaltyParams& params, double step);

struct GridSearchResult {
  Policy policy;
  double penalty = 0.0;
};

// Exhaustive minimization of expected_penalty over all sorted departure
// tuples on the grid {0, step, ..., horizon}. Only for n <= 3; throws
// ResourceError when the tuple count would be unreasonable.
GridSearchResult grid_search_policy(const SolverInput& input, double step);

}  // namespace aoi
