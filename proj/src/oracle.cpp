#include "aoi/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "aoi/analytics.hpp"

namespace aoi {

double quadrature_penalty(const Trajectory& trajectory, const PenaltyParams& params, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("quadrature_penalty: step must be positive");

  double total = 0.0;
  for (const Segment& seg : trajectory.segments) {
    const double width = seg.end - seg.start;
    if (!(width > 0.0)) continue;
    const auto pieces = std::max<long long>(1, static_cast<long long>(std::ceil(width / step)));
    const double h = width / static_cast<double>(pieces);
    // Stay on this segment's branch of the curve: the right edge uses the
    // left limit, not the post-reset value.
    double sum = 0.5 * (params.age_of(seg.start - seg.offset) + params.age_of(seg.end - seg.offset));
    for (long long j = 1; j < pieces; ++j)
      sum += params.age_of(seg.start + static_cast<double>(j) * h - seg.offset);
    total += sum * h;
  }
  return total;
}

GridSearchResult grid_search_policy(const SolverInput& input, double step) {
  input.validate();
  if (input.n > 3) throw std::invalid_argument("grid_search_policy: only n <= 3 is supported");
  if (!(step > 0.0)) throw std::invalid_argument("grid_search_policy: step must be positive");

  const auto m = static_cast<long long>(std::llround(input.horizon / step));
  if (m < 1) throw std::invalid_argument("grid_search_policy: step larger than horizon");
  double tuples = 1.0;
  for (int i = 1; i <= input.n; ++i) tuples *= static_cast<double>(m + i) / i;
  if (tuples > 5e7) throw ResourceError("grid_search_policy: grid too large");

  const double h = input.horizon / static_cast<double>(m);
  const auto n = static_cast<std::size_t>(input.n);

  Policy cand;
  cand.horizon = input.horizon;
  cand.departures.resize(n);

  std::vector<double> best_departures;
  double best_penalty = std::numeric_limits<double>::infinity();

  std::function<void(std::size_t, long long)> visit = [&](std::size_t pos, long long from) {
    if (pos == n) {
      const double pen = expected_penalty(cand, input.expected_delays, input.params);
      if (pen < best_penalty) {
        best_penalty = pen;
        best_departures = cand.departures;
      }
      return;
    }
    for (long long i = from; i <= m; ++i) {
      cand.departures[pos] = static_cast<double>(i) * h;
      visit(pos + 1, i);
    }
  };
  visit(0, 0);

  GridSearchResult result;
  result.policy = policy_from_departures(std::move(best_departures), input.horizon,
                                         input.expected_delays, input.params);
  result.penalty = best_penalty;
  return result;
}

}  // namespace aoi
