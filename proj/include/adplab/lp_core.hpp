#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace adp {

/// Exponent of an l_p norm. Values below 2 are rejected; p = 2 is kept for
/// boundary checks.
class Exponent {
 public:
  explicit Exponent(double p);

  double value() const noexcept { return p_; }
  double inverse() const noexcept { return 1.0 / p_; }

  friend bool operator==(Exponent, Exponent) = default;

 private:
  double p_;
};

/// |x|^p computed as exp(p log|x|); returns exactly 0 for x == 0.
double pow_abs(double x, double p) noexcept;

class LpVector {
 public:
  LpVector(std::vector<double> coords, Exponent p);

  /// Unit vector e_k in dimension d.
  static LpVector basis(std::size_t d, std::size_t k, Exponent p);

  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  Exponent exponent() const noexcept { return p_; }
  double operator[](std::size_t k) const { return coords_[k]; }

  LpVector scaled(double c) const;

  friend LpVector operator-(const LpVector& a, const LpVector& b);
  friend LpVector operator+(const LpVector& a, const LpVector& b);
  friend LpVector operator-(const LpVector& a);

 private:
  std::vector<double> coords_;
  Exponent p_;
};

/// Sum of |xi_k|^p, i.e. norm(v)^p without the final root.
double norm_pow(const LpVector& v);
double norm(const LpVector& v);

/// norm(a - b). Throws std::invalid_argument on dimension or exponent mismatch.
double distance(const LpVector& a, const LpVector& b);

/// A point x together with n points y_1..y_n, normalized so that
/// |x|^p = 1/n and sum_i |y_i|^p = 1.
class Configuration {
 public:
  static constexpr double kRelTol = 1e-10;

  /// Throws std::invalid_argument if the normalization or the shared
  /// exponent/dimension requirement fails.
  Configuration(LpVector x, std::vector<LpVector> ys);

  const LpVector& x() const noexcept { return x_; }
  std::span<const LpVector> ys() const noexcept { return ys_; }
  std::size_t n() const noexcept { return ys_.size(); }
  Exponent exponent() const noexcept { return x_.exponent(); }

 private:
  LpVector x_;
  std::vector<LpVector> ys_;
};

/// Random configuration in l_p^d: x has a Gaussian direction, the masses
/// |y_i|^p are a uniform point of the simplex, and the y directions are
/// independent. Deterministic in the seed.
Configuration sample_configuration(std::size_t n, std::size_t d, std::uint64_t seed, Exponent p);

/// Gaussian direction rescaled to unit l_p norm.
LpVector random_unit_vector(std::size_t d, Exponent p, std::mt19937_64& rng);

}  // namespace adp
