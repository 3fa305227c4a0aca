#include "adplab/rendezvous.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace adp {

namespace {

constexpr double kSphereTol = 1e-8;
constexpr double kImprovementTol = 1e-10;
constexpr int kMaxIter = 20000;
constexpr int kStallLimit = 3;

void require_on_sphere(const LpVector& v) {
  if (std::fabs(norm(v) - 1.0) > kSphereTol) throw std::invalid_argument("point is not on the unit sphere");
}

double mean_distance(std::span<const LpVector> points, const LpVector& x) {
  double s = 0.0;
  for (const auto& y : points) s += distance(x, y);
  return s / static_cast<double>(points.size());
}

// Gradient of the mean distance in the ambient space. The norm is smooth
// away from z = 0 for p >= 2; the zero subgradient is used at z = 0.
std::vector<double> mean_distance_gradient(std::span<const LpVector> points, const LpVector& x) {
  const double p = x.exponent().value();
  std::vector<double> g(x.dim(), 0.0);
  for (const auto& y : points) {
    const LpVector z = x - y;
    const double r = norm(z);
    if (r == 0.0) continue;
    for (std::size_t k = 0; k < z.dim(); ++k) {
      const double zk = z[k] / r;
      if (zk != 0.0) g[k] += std::copysign(std::pow(std::fabs(zk), p - 1.0), zk);
    }
  }
  for (double& v : g) v /= static_cast<double>(points.size());
  return g;
}

// Gradient of the norm at a point of the unit sphere.
std::vector<double> norm_gradient(const LpVector& x) {
  const double p = x.exponent().value();
  std::vector<double> n(x.dim(), 0.0);
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (x[k] != 0.0) n[k] = std::copysign(std::pow(std::fabs(x[k]), p - 1.0), x[k]);
  }
  return n;
}

LpVector normalized(const LpVector& v) { return v.scaled(1.0 / norm(v)); }

struct LocalResult {
  double value;
  bool converged;
};

// direction = +1 minimizes, -1 maximizes.
LocalResult local_search(std::span<const LpVector> points, LpVector x, double direction) {
  double fx = mean_distance(points, x);
  double eta = 0.5;
  int stall = 0;
  for (int it = 0; it < kMaxIter; ++it) {
    std::vector<double> g = mean_distance_gradient(points, x);
    // Remove the component along the sphere normal so that first-order moves
    // stay tangent and normalization does not undo them.
    const std::vector<double> normal = norm_gradient(x);
    double gn = 0.0;
    double nn = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      gn += g[k] * normal[k];
      nn += normal[k] * normal[k];
    }
    double tangent_sq = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] -= gn / nn * normal[k];
      tangent_sq += g[k] * g[k];
    }
    if (tangent_sq == 0.0) return {fx, true};
    bool moved = false;
    double gain = 0.0;
    while (eta > 1e-16) {
      std::vector<double> c(x.dim());
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = x[k] - direction * eta * g[k];
      LpVector raw(std::move(c), x.exponent());
      if (norm(raw) == 0.0) {
        eta *= 0.5;
        continue;
      }
      LpVector cand = normalized(raw);
      const double fc = mean_distance(points, cand);
      if (direction * fc < direction * fx) {
        gain = direction * (fx - fc);
        x = std::move(cand);
        fx = fc;
        moved = true;
        eta = std::min(2.0 * eta, 1.0);
        break;
      }
      eta *= 0.5;
    }
    if (!moved) return {fx, true};
    stall = gain < kImprovementTol ? stall + 1 : 0;
    if (stall >= kStallLimit) return {fx, true};
  }
  return {fx, false};
}

}  // namespace

double avg_distance(std::span<const LpVector> points, const LpVector& x) {
  if (points.empty()) throw std::invalid_argument("avg_distance needs at least one point");
  require_on_sphere(x);
  for (const auto& y : points) require_on_sphere(y);
  return mean_distance(points, x);
}

AvgDistInterval interval(std::span<const LpVector> points, std::size_t starts, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("interval needs at least one point");
  if (starts < 1) throw std::invalid_argument("interval needs starts >= 1");
  for (const auto& y : points) require_on_sphere(y);

  const std::size_t d = points.front().dim();
  const Exponent p = points.front().exponent();
  std::mt19937_64 rng(seed);

  std::vector<LpVector> inits;
  for (const auto& y : points) {
    inits.push_back(y);
    inits.push_back(-y);
  }
  for (std::size_t s = 0; s < starts; ++s) inits.push_back(random_unit_vector(d, p, rng));

  AvgDistInterval out;
  out.lo = 2.0;
  out.hi = 0.0;
  out.converged = true;
  for (const auto& x0 : inits) {
    const LocalResult lo = local_search(points, x0, 1.0);
    const LocalResult hi = local_search(points, x0, -1.0);
    out.lo = std::min(out.lo, lo.value);
    out.hi = std::max(out.hi, hi.value);
    out.converged = out.converged && lo.converged && hi.converged;
  }
  out.lo = std::clamp(out.lo, 0.0, 2.0);
  out.hi = std::clamp(out.hi, out.lo, 2.0);
  out.starts = inits.size();
  return out;
}

LpVector circle_point(double theta, Exponent p) {
  return normalized(LpVector({std::cos(theta), std::sin(theta)}, p));
}

}  // namespace adp
