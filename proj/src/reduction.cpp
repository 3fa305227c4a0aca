#include "adplab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adp {

ReducedConfig::ReducedConfig(std::vector<double> alphas, std::vector<double> us)
    : alphas_(std::move(alphas)), us_(std::move(us)) {
  if (alphas_.empty()) throw std::invalid_argument("reduced config needs n >= 1");
  if (alphas_.size() != us_.size()) throw std::invalid_argument("alphas and us differ in length");

  const double n = static_cast<double>(alphas_.size());
  const double lo = 1.0 / (2.0 * n) - kAlphaSlack;
  const double hi = (n + 1.0) / (2.0 * n) + kAlphaSlack;
  double sum = 0.0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double a = alphas_[i];
    if (!(a >= lo && a <= hi)) {
      throw std::invalid_argument("alpha[" + std::to_string(i) + "] outside [1/(2n), (n+1)/(2n)]");
    }
    sum += a;
    const double u = us_[i];
    if (!(u >= -1.0 && u <= 1.0)) throw std::invalid_argument("u[" + std::to_string(i) + "] outside [-1, 1]");
  }
  if (std::fabs(sum - 1.0) > kSumTol) throw std::invalid_argument("alphas do not sum to 1");
}

ReducedConfig ReducedConfig::uniform(std::vector<double> us) {
  std::vector<double> alphas(us.size(), 1.0 / static_cast<double>(us.size()));
  return {std::move(alphas), std::move(us)};
}

ReducedConfig ReducedConfig::with_u(std::size_t j, double u) const {
  std::vector<double> us(us_);
  us.at(j) = u;
  return {alphas_, std::move(us)};
}

SigmaAlpha sigma_alpha(const Configuration& cfg) {
  SigmaAlpha out;
  out.sigmas.reserve(cfg.n());
  out.alphas.reserve(cfg.n());
  const double xp = norm_pow(cfg.x());
  for (const auto& y : cfg.ys()) {
    const double mass = xp + norm_pow(y);
    out.sigmas.push_back(norm_pow(cfg.x() - y) / mass);
    out.alphas.push_back(0.5 * mass);
  }
  return out;
}

double sigma_of_u(double u, Exponent p) noexcept {
  const double pv = p.value();
  return pow_abs(1.0 - u, pv) / (1.0 + pow_abs(u, pv));
}

double u_from_sigma(double sigma, Exponent p) {
  const double top = std::exp2(p.value() - 1.0);
  if (!(sigma >= 0.0) || sigma > top + 1e-9) {
    throw std::domain_error("sigma outside [0, 2^{p-1}]: " + std::to_string(sigma));
  }
  if (sigma >= top) return -1.0;
  if (sigma == 0.0) return 1.0;

  // sigma_of_u is decreasing: keep sigma_of_u(lo) >= sigma >= sigma_of_u(hi).
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = sigma_of_u(mid, p);
    if (s == sigma) return mid;
    if (s > sigma) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ReducedConfig reduce(const Configuration& cfg) {
  auto sa = sigma_alpha(cfg);
  std::vector<double> us;
  us.reserve(sa.sigmas.size());
  for (double s : sa.sigmas) us.push_back(u_from_sigma(s, cfg.exponent()));

  // Absorb rounding at the alpha box edges; the validating constructor
  // still rejects anything farther out.
  const double n = static_cast<double>(cfg.n());
  for (double& a : sa.alphas) a = std::clamp(a, 1.0 / (2.0 * n), (n + 1.0) / (2.0 * n));
  return {std::move(sa.alphas), std::move(us)};
}

BoundConstants bound_constants(Exponent p) {
  const double pv = p.value();
  if (!(pv > 2.0)) throw std::domain_error("bound constants need p > 2");
  BoundConstants c{};
  c.c1 = std::max(std::exp2(1.0 - 1.0 / pv), 1.0 / (2.0 - std::exp2(1.0 / pv)));
  c.c2 = std::exp2(pv - 2.0) - 1.0;
  c.c3 = pv * std::exp2(pv - 1.0);
  c.c4 = c.c2 * std::exp2(-pv - 2.0);
  c.c5 = 1.0 / (8.0 + std::exp2(pv + 3.0));
  return c;
}

double u_cap(double c1, std::size_t n, double alpha, Exponent p) {
  return c1 * std::pow(static_cast<double>(n) * alpha, -p.inverse());
}

double concave_ratio(double u, Exponent p) {
  return (1.0 + u) / std::pow(1.0 + pow_abs(u, p.value()), p.inverse());
}

double concave_chord(double u, Exponent p) { return 1.0 + (std::exp2(1.0 - p.inverse()) - 1.0) * u; }

}  // namespace adp
