#include "adplab/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adp {

Exponent::Exponent(double p) : p_(p) {
  if (!std::isfinite(p) || !(p >= 2.0)) {
    throw std::invalid_argument("exponent must be finite and >= 2, got " + std::to_string(p));
  }
}

double pow_abs(double x, double p) noexcept {
  if (x == 0.0) return 0.0;
  return std::exp(p * std::log(std::fabs(x)));
}

LpVector::LpVector(std::vector<double> coords, Exponent p) : coords_(std::move(coords)), p_(p) {
  if (coords_.empty()) throw std::invalid_argument("LpVector needs dimension >= 1");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("LpVector coordinates must be finite");
  }
}

LpVector LpVector::basis(std::size_t d, std::size_t k, Exponent p) {
  if (k >= d) throw std::out_of_range("basis index out of range");
  std::vector<double> c(d, 0.0);
  c[k] = 1.0;
  return {std::move(c), p};
}

LpVector LpVector::scaled(double c) const {
  std::vector<double> out(coords_);
  for (double& v : out) v *= c;
  return {std::move(out), p_};
}

namespace {

void require_compatible(const LpVector& a, const LpVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  if (a.exponent() != b.exponent()) throw std::invalid_argument("exponent mismatch");
}

}  // namespace

LpVector operator-(const LpVector& a, const LpVector& b) {
  require_compatible(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return {std::move(out), a.exponent()};
}

LpVector operator+(const LpVector& a, const LpVector& b) {
  require_compatible(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
  return {std::move(out), a.exponent()};
}

LpVector operator-(const LpVector& a) { return a.scaled(-1.0); }

double norm_pow(const LpVector& v) {
  const double p = v.exponent().value();
  double s = 0.0;
  for (double c : v.coords()) s += pow_abs(c, p);
  return s;
}

double norm(const LpVector& v) {
  // Scale by the largest magnitude so the p-th powers stay in range.
  double m = 0.0;
  for (double c : v.coords()) m = std::max(m, std::fabs(c));
  if (m == 0.0) return 0.0;
  const double p = v.exponent().value();
  double s = 0.0;
  for (double c : v.coords()) s += pow_abs(c / m, p);
  return m * std::pow(s, 1.0 / p);
}

double distance(const LpVector& a, const LpVector& b) { return norm(a - b); }

Configuration::Configuration(LpVector x, std::vector<LpVector> ys) : x_(std::move(x)), ys_(std::move(ys)) {
  if (ys_.empty()) throw std::invalid_argument("configuration needs n >= 1 points");
  for (const auto& y : ys_) require_compatible(x_, y);

  const double n = static_cast<double>(ys_.size());
  const double xp = norm_pow(x_);
  if (std::fabs(xp * n - 1.0) > kRelTol) {
    throw std::invalid_argument("configuration violates |x|^p = 1/n");
  }
  double mass = 0.0;
  for (const auto& y : ys_) mass += norm_pow(y);
  if (std::fabs(mass - 1.0) > kRelTol) {
    throw std::invalid_argument("configuration violates sum |y_i|^p = 1");
  }
}

LpVector random_unit_vector(std::size_t d, Exponent p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> c(d);
  double m = 0.0;
  while (m == 0.0) {
    for (double& v : c) v = gauss(rng);
    for (double v : c) m = std::max(m, std::fabs(v));
  }
  LpVector v(std::move(c), p);
  return v.scaled(1.0 / norm(v));
}

Configuration sample_configuration(std::size_t n, std::size_t d, std::uint64_t seed, Exponent p) {
  if (n == 0 || d == 0) throw std::invalid_argument("sample_configuration needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  const double inv_p = p.inverse();

  LpVector x = random_unit_vector(d, p, rng).scaled(std::pow(1.0 / static_cast<double>(n), inv_p));

  // Uniform point of the simplex from normalized exponential spacings.
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> mass(n);
  double total = 0.0;
  for (double& t : mass) {
    t = expo(rng);
    total += t;
  }
  for (double& t : mass) t /= total;

  std::vector<LpVector> ys;
  ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys.push_back(random_unit_vector(d, p, rng).scaled(std::pow(mass[i], inv_p)));
  }
  return {std::move(x), std::move(ys)};
}

}  // namespace adp
