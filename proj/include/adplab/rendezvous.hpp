#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adplab/lp_core.hpp"

namespace adp {

/// Estimated range of x -> avg_distance(points, x) over the unit sphere.
/// Always 0 <= lo <= hi <= 2.
struct AvgDistInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t starts = 0;
  bool converged = false;
};

/// Mean of |x - x_k| over the points. All inputs must lie on the unit sphere
/// (|.| = 1 +/- 1e-8) and share dimension and exponent.
double avg_distance(std::span<const LpVector> points, const LpVector& x);

/// Multi-start projected gradient descent and ascent on the unit sphere.
/// Starts are the points, their antipodes, and `starts` random directions.
AvgDistInterval interval(std::span<const LpVector> points, std::size_t starts, std::uint64_t seed);

/// Map (cos t, sin t) onto the unit sphere of l_p^2.
LpVector circle_point(double theta, Exponent p);

}  // namespace adp
