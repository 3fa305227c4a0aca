#pragma once

// Independent reference implementations used only by the tests. None of them
// share code paths with the library beyond the input types.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "adplab/lp_core.hpp"
#include "adplab/phi.hpp"
#include "adplab/reduction.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

/// Sign average by a fresh 2^n loop, each inner sum rebuilt from scratch in
/// long double.
inline double phi_naive(const adp::ReducedConfig& rc, double p) {
  const std::size_t n = rc.n();
  long double total = 0.0L;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double u = rc.us()[i];
      const long double e = ((code >> i) & 1U) ? -1.0L : 1.0L;
      s += rc.alphas()[i] * std::pow(std::fabs(1.0L + e * u), (long double)p) /
           (1.0L + std::pow(std::fabs(u), (long double)p));
    }
    total += std::pow(s, 1.0L / p);
  }
  return static_cast<double>(total / std::ldexp(1.0L, static_cast<int>(n)));
}

/// Central difference of phi_exact in u_j with step h.
inline double phi_central_difference(const adp::ReducedConfig& rc, adp::Exponent p, std::size_t j, double h) {
  const double u = rc.us()[j];
  const double up = adp::phi_exact(rc.with_u(j, u + h), p).value;
  const double down = adp::phi_exact(rc.with_u(j, u - h), p).value;
  return (up - down) / (2.0 * h);
}

/// Central difference of the sign average in 100-digit arithmetic with a
/// step small enough that truncation error is negligible. For small n only.
inline double phi_partial_extended(const adp::ReducedConfig& rc, double p_in, std::size_t j) {
  const std::size_t n = rc.n();
  const big p = p_in;
  const big h = big("1e-30");
  auto phi_at = [&](const big& uj) {
    big total = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      big s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const big u = i == j ? uj : big(rc.us()[i]);
        const big e = ((code >> i) & 1U) ? -1 : 1;
        s += big(rc.alphas()[i]) * pow(abs(1 + e * u), p) / (1 + pow(abs(u), p));
      }
      total += pow(s, 1 / p);
    }
    return total;
  };
  const big u = rc.us()[j];
  return static_cast<double>((phi_at(u + h) - phi_at(u - h)) / (2 * h * pow(big(2), static_cast<int>(n))));
}

/// The derivative-sign threshold in 100-digit arithmetic, straight from the
/// closed form.
inline double threshold_extended(double u_in, double p_in) {
  const big u = u_in;
  const big p = p_in;
  const big r = p / (p - 1);
  const big t = pow(u, p - 1);
  const big pref = pow(1 - u * u, p) / (1 + pow(u, p));
  const big hi = pow(1 + t, r);
  const big lo = pow(1 - t, r);
  const big den = pow(1 + u, p) * lo - pow(1 - u, p) * hi;
  return static_cast<double>(pref * (hi - lo) / den);
}

/// For alpha_i = 1/n and every u_i = 1 the inner sum is 2^{p-1} k / n where
/// k counts the +1 signs, so the average is a binomial sum.
inline double phi_all_ones_uniform(std::size_t n, double p) {
  big total = 0;
  const big pp = p;
  for (std::size_t k = 0; k <= n; ++k) {
    const big c = boost::math::binomial_coefficient<big>(static_cast<unsigned>(n), static_cast<unsigned>(k));
    total += c * pow(big(k) / n, 1 / pp);
  }
  total *= pow(big(2), (pp - 1) / pp) / pow(big(2), static_cast<int>(n));
  return static_cast<double>(total);
}

struct Range {
  double lo;
  double hi;
};

/// Range of the mean distance over the l_p unit circle, from a dense angular
/// grid plus the angles of the data points and their antipodes.
inline Range circle_grid_range(std::span<const adp::LpVector> points, adp::Exponent p, std::size_t grid) {
  const double pv = p.value();
  auto on_circle = [pv](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double r = std::pow(std::pow(std::fabs(c), pv) + std::pow(std::fabs(s), pv), 1.0 / pv);
    return std::pair{c / r, s / r};
  };
  auto mean_distance = [&](double x0, double x1) {
    double total = 0.0;
    for (const auto& y : points) {
      total += std::pow(std::pow(std::fabs(x0 - y[0]), pv) + std::pow(std::fabs(x1 - y[1]), pv), 1.0 / pv);
    }
    return total / static_cast<double>(points.size());
  };
  std::vector<double> angles;
  for (std::size_t k = 0; k < grid; ++k) angles.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / grid);
  for (const auto& y : points) {
    angles.push_back(std::atan2(y[1], y[0]));
    angles.push_back(std::atan2(-y[1], -y[0]));
  }
  Range out{INFINITY, -INFINITY};
  for (double a : angles) {
    const auto [x0, x1] = on_circle(a);
    const double m = mean_distance(x0, x1);
    out.lo = std::min(out.lo, m);
    out.hi = std::max(out.hi, m);
  }
  return out;
}

}  // namespace oracle
