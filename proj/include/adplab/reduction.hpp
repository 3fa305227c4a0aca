#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adplab/lp_core.hpp"

namespace adp {

/// Scalar data (n, alpha_1..alpha_n, u_1..u_n) extracted from a
/// configuration. Construction validates
///   1/(2n) <= alpha_i <= (n+1)/(2n)   (1e-12 slack)
///   |sum alpha_i - 1| <= 1e-10
///   -1 <= u_i <= 1
class ReducedConfig {
 public:
  static constexpr double kAlphaSlack = 1e-12;
  static constexpr double kSumTol = 1e-10;

  ReducedConfig(std::vector<double> alphas, std::vector<double> us);

  /// alpha_i = 1/n for all i.
  static ReducedConfig uniform(std::vector<double> us);

  std::size_t n() const noexcept { return alphas_.size(); }
  std::span<const double> alphas() const noexcept { return alphas_; }
  std::span<const double> us() const noexcept { return us_; }

  ReducedConfig with_u(std::size_t j, double u) const;

 private:
  std::vector<double> alphas_;
  std::vector<double> us_;
};

struct SigmaAlpha {
  std::vector<double> sigmas;
  std::vector<double> alphas;
};

/// sigma_i = |x - y_i|^p / (|x|^p + |y_i|^p),  alpha_i = (|x|^p + |y_i|^p) / 2.
SigmaAlpha sigma_alpha(const Configuration& cfg);

/// (1 - u)^p / (1 + |u|^p); strictly decreasing from 2^{p-1} at u = -1 to 0 at u = 1.
double sigma_of_u(double u, Exponent p) noexcept;

/// Inverse of sigma_of_u on [-1, 1] by bisection. sigma values up to 1e-9
/// above 2^{p-1} are clamped; anything else outside [0, 2^{p-1}] throws
/// std::domain_error.
double u_from_sigma(double sigma, Exponent p);

ReducedConfig reduce(const Configuration& cfg);

struct BoundConstants {
  double c1;  // max(2^{1-1/p}, 1/(2 - 2^{1/p}))
  double c2;  // 2^{p-2} - 1
  double c3;  // p 2^{p-1}
  double c4;  // c2 2^{-p-2}
  double c5;  // 1/(8 + 2^{p+3})
};

/// Throws std::domain_error for p <= 2.
BoundConstants bound_constants(Exponent p);

/// Cap on |u_i| implied by the configuration normalization:
/// c1 n^{-1/p} alpha^{-1/p}.
double u_cap(double c1, std::size_t n, double alpha, Exponent p);

/// (1 + u) / (1 + u^p)^{1/p}, concave on [0, 1].
double concave_ratio(double u, Exponent p);

/// Chord of concave_ratio between u = 0 and u = 1: 1 + (2^{1-1/p} - 1) u.
double concave_chord(double u, Exponent p);

}  // namespace adp
