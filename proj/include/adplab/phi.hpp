#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "adplab/lp_core.hpp"
#include "adplab/reduction.hpp"

namespace adp {

enum class PhiMethod { exact, monte_carlo };

std::string_view to_string(PhiMethod m) noexcept;

struct PhiResult {
  double value = 0.0;
  PhiMethod method = PhiMethod::exact;
  std::uint64_t samples = 0;  // 0 for exact
  double std_error = 0.0;     // 0 for exact
};

/// Vector of Rademacher signs; every entry is exactly +1 or -1.
class SignVector {
 public:
  explicit SignVector(std::vector<int> eps);

  std::size_t size() const noexcept { return eps_.size(); }
  int operator[](std::size_t i) const { return eps_[i]; }
  std::span<const int> values() const noexcept { return eps_; }

 private:
  std::vector<int> eps_;
};

struct PhiOptions {
  /// Largest n evaluated by full enumeration.
  unsigned enum_cap = 24;
  /// Worker threads for the enumeration sweep. The result does not depend
  /// on this value: chunk sums are merged in a fixed order.
  unsigned threads = 1;
};

/// S(eps) = sum_i alpha_i (1 + eps_i u_i)^p / (1 + |u_i|^p).
double inner_sum(const ReducedConfig& rc, const SignVector& eps, Exponent p);

/// S(eps) with the j-th term removed.
double leave_one_out_sum(const ReducedConfig& rc, const SignVector& eps, Exponent p, std::size_t j);

/// Average of S(eps)^{1/p} over all 2^n sign vectors, walked in Gray-code
/// order. Throws std::length_error if n exceeds opts.enum_cap.
PhiResult phi_exact(const ReducedConfig& rc, Exponent p, const PhiOptions& opts = {});

/// Monte Carlo estimate of the same average from uniform sign vectors.
/// Throws std::invalid_argument for samples < 100.
PhiResult phi_mc(const ReducedConfig& rc, Exponent p, std::uint64_t samples, std::uint64_t seed);

/// Exact when n <= opts.enum_cap, otherwise Monte Carlo.
PhiResult phi_auto(const ReducedConfig& rc, Exponent p, const PhiOptions& opts, std::uint64_t samples,
                   std::uint64_t seed);

/// Exact partial derivative of phi with respect to u_j, for 0 <= u_j <= 1.
double phi_partial(const ReducedConfig& rc, Exponent p, std::size_t j, const PhiOptions& opts = {});

/// All n partial derivatives from one enumeration sweep. Requires u_i >= 0.
std::vector<double> phi_gradient(const ReducedConfig& rc, Exponent p, const PhiOptions& opts = {});

struct GradientEstimate {
  std::vector<double> partials;
  std::vector<double> std_errors;
  /// Smallest paired contribution seen for any coordinate; when positive,
  /// every sampled pair pushes the estimate up.
  double min_pair = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo gradient for large n. For each sampled sign vector and each j
/// the two values eps_j = +1 and eps_j = -1 are evaluated together, so the
/// estimate of d phi / d u_j is an average of paired contributions.
GradientEstimate phi_gradient_mc(const ReducedConfig& rc, Exponent p, std::uint64_t samples, std::uint64_t seed);

/// ((1+u)^p + (1-u)^p) / (2 (1 + u^p)) on [0, 1].
double even_part(double u, Exponent p);

/// ((1+u)^p - (1-u)^p) / (2 (1 + u^p)) on [0, 1].
double odd_part(double u, Exponent p);

/// The threshold function of the derivative-sign criterion: d phi / d u_j > 0
/// exactly when the leave-one-out sum a_j exceeds alpha_j * sign_threshold(u_j).
/// Defined on the open interval (0, 1); both end limits are 0. Evaluated in a
/// cancellation-free expm1/log1p form.
double sign_threshold(double u, Exponent p);

/// Plain double-precision evaluation of sign_threshold. Loses accuracy where
/// u^{p-1} or 1 - u is small.
double sign_threshold_direct(double u, Exponent p);

/// Empirical sup of sign_threshold: grid scan of (0, 1) plus golden-section
/// refinement around the best point. Throws for grid < 1000.
double sign_threshold_sup(Exponent p, std::size_t grid);

/// (1 + (1+u)^p/(1+u^p))^{1/p} + (1 + (1-u)^p/(1+u^p))^{1/p}.
double two_point_root_sum(double u, Exponent p);

}  // namespace adp
