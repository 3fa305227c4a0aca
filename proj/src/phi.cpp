#include "adplab/phi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "adplab/compensated.hpp"
#include "adplab/search.hpp"

namespace adp {

std::string_view to_string(PhiMethod m) noexcept {
  return m == PhiMethod::exact ? "exact" : "monte_carlo";
}

SignVector::SignVector(std::vector<int> eps) : eps_(std::move(eps)) {
  for (int e : eps_) {
    if (e != 1 && e != -1) throw std::invalid_argument("sign vector entries must be +1 or -1");
  }
}

namespace {

// Chunks of 2^12 sign vectors start from a freshly computed S, which bounds
// the drift of the incremental Gray-code updates.
constexpr unsigned kChunkBits = 12;

// Per-coordinate terms alpha_i (1 +/- u_i)^p / (1 + |u_i|^p).
struct SignTerms {
  std::vector<double> plus;
  std::vector<double> minus;
};

SignTerms sign_terms(const ReducedConfig& rc, Exponent p) {
  const double pv = p.value();
  SignTerms t;
  t.plus.resize(rc.n());
  t.minus.resize(rc.n());
  for (std::size_t i = 0; i < rc.n(); ++i) {
    const double u = rc.us()[i];
    const double scale = rc.alphas()[i] / (1.0 + pow_abs(u, pv));
    t.plus[i] = scale * pow_abs(1.0 + u, pv);
    t.minus[i] = scale * pow_abs(1.0 - u, pv);
  }
  return t;
}

// Bit i of `code` set means eps_i = -1.
double sum_for_code(const SignTerms& t, std::uint64_t code) {
  CompensatedSum s;
  for (std::size_t i = 0; i < t.plus.size(); ++i) s += ((code >> i) & 1U) ? t.minus[i] : t.plus[i];
  return s.value();
}

// Incremental sums below this fraction of the largest possible sum are
// recomputed from scratch: their absolute drift would dominate S^{1/p}.
constexpr double kRefreshFraction = 1e-2;

// Walks sign vectors first..first+count-1 in Gray-code order and calls
// visit(code, S) for each.
template <class Visit>
void gray_walk(const SignTerms& t, std::uint64_t first, std::uint64_t count, Visit&& visit) {
  double scale = 0.0;
  for (std::size_t i = 0; i < t.plus.size(); ++i) scale += std::max(t.plus[i], t.minus[i]);
  const double refresh_below = kRefreshFraction * scale;

  std::uint64_t code = first ^ (first >> 1);
  double s = sum_for_code(t, code);
  const std::uint64_t last = first + count;
  for (std::uint64_t k = first; k < last; ++k) {
    visit(code, std::max(s, 0.0));
    if (k + 1 == last) break;
    const int b = std::countr_zero(k + 1);
    code ^= std::uint64_t{1} << b;
    s += ((code >> b) & 1U) ? (t.minus[b] - t.plus[b]) : (t.plus[b] - t.minus[b]);
    if (s < refresh_below) s = sum_for_code(t, code);
  }
}

struct ChunkPlan {
  std::uint64_t chunk_len;
  std::size_t chunks;
};

ChunkPlan plan_chunks(std::size_t n) {
  const unsigned bits = std::min<unsigned>(static_cast<unsigned>(n), kChunkBits);
  return {std::uint64_t{1} << bits, std::size_t{1} << (n - bits)};
}

void check_cap(const ReducedConfig& rc, const PhiOptions& opts) {
  if (rc.n() > opts.enum_cap || rc.n() > 62) {
    throw std::length_error("n = " + std::to_string(rc.n()) + " exceeds the enumeration cap " +
                            std::to_string(opts.enum_cap));
  }
}

// (1 + eps u)^{p-1} (1 - eps u^{p-1}) signed by eps, for eps = +1 and -1.
struct PartialWeights {
  double plus;
  double minus;
};

PartialWeights partial_weights(double u, double p) {
  const double up1 = pow_abs(u, p - 1.0);
  return {pow_abs(1.0 + u, p - 1.0) * (1.0 - up1), -pow_abs(1.0 - u, p - 1.0) * (1.0 + up1)};
}

double partial_prefactor(double alpha, double u, double p) {
  const double d = 1.0 + pow_abs(u, p);
  return alpha / (d * d);
}

}  // namespace

double inner_sum(const ReducedConfig& rc, const SignVector& eps, Exponent p) {
  if (eps.size() != rc.n()) throw std::invalid_argument("sign vector length differs from n");
  const double pv = p.value();
  CompensatedSum s;
  for (std::size_t i = 0; i < rc.n(); ++i) {
    const double u = rc.us()[i];
    s += rc.alphas()[i] * pow_abs(1.0 + eps[i] * u, pv) / (1.0 + pow_abs(u, pv));
  }
  return s.value();
}

double leave_one_out_sum(const ReducedConfig& rc, const SignVector& eps, Exponent p, std::size_t j) {
  if (j >= rc.n()) throw std::out_of_range("index j out of range");
  if (eps.size() != rc.n()) throw std::invalid_argument("sign vector length differs from n");
  const double pv = p.value();
  CompensatedSum s;
  for (std::size_t i = 0; i < rc.n(); ++i) {
    if (i == j) continue;
    const double u = rc.us()[i];
    s += rc.alphas()[i] * pow_abs(1.0 + eps[i] * u, pv) / (1.0 + pow_abs(u, pv));
  }
  return s.value();
}

PhiResult phi_exact(const ReducedConfig& rc, Exponent p, const PhiOptions& opts) {
  check_cap(rc, opts);
  const SignTerms terms = sign_terms(rc, p);
  const double inv_p = p.inverse();
  const ChunkPlan plan = plan_chunks(rc.n());

  std::vector<double> partial(plan.chunks, 0.0);
  parallel_for(plan.chunks, opts.threads, [&](std::size_t c) {
    CompensatedSum acc;
    gray_walk(terms, c * plan.chunk_len, plan.chunk_len,
              [&](std::uint64_t, double s) { acc += std::pow(s, inv_p); });
    partial[c] = acc.value();
  });

  CompensatedSum total;
  for (double v : partial) total += v;
  return {std::ldexp(total.value(), -static_cast<int>(rc.n())), PhiMethod::exact, 0, 0.0};
}

PhiResult phi_mc(const ReducedConfig& rc, Exponent p, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("phi_mc needs at least 100 samples");
  const SignTerms terms = sign_terms(rc, p);
  const double inv_p = p.inverse();
  const std::size_t n = rc.n();
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words((n + 63) / 64);

  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t k = 1; k <= samples; ++k) {
    for (auto& w : words) w = rng();
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      s += ((words[i / 64] >> (i % 64)) & 1U) ? terms.minus[i] : terms.plus[i];
    }
    const double x = std::pow(std::max(s.value(), 0.0), inv_p);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, PhiMethod::monte_carlo, samples, std::sqrt(var / static_cast<double>(samples))};
}

PhiResult phi_auto(const ReducedConfig& rc, Exponent p, const PhiOptions& opts, std::uint64_t samples,
                   std::uint64_t seed) {
  if (rc.n() <= opts.enum_cap) return phi_exact(rc, p, opts);
  return phi_mc(rc, p, samples, seed);
}

double phi_partial(const ReducedConfig& rc, Exponent p, std::size_t j, const PhiOptions& opts) {
  if (j >= rc.n()) throw std::out_of_range("index j out of range");
  const double uj = rc.us()[j];
  if (!(uj >= 0.0 && uj <= 1.0)) throw std::invalid_argument("phi_partial needs 0 <= u_j <= 1");
  check_cap(rc, opts);

  const double pv = p.value();
  const double expo = p.inverse() - 1.0;
  const SignTerms terms = sign_terms(rc, p);
  const PartialWeights k = partial_weights(uj, pv);
  const ChunkPlan plan = plan_chunks(rc.n());

  std::vector<double> partial(plan.chunks, 0.0);
  parallel_for(plan.chunks, opts.threads, [&](std::size_t c) {
    CompensatedSum acc;
    gray_walk(terms, c * plan.chunk_len, plan.chunk_len, [&](std::uint64_t code, double s) {
      if (s == 0.0) return;
      acc += (((code >> j) & 1U) ? k.minus : k.plus) * std::pow(s, expo);
    });
    partial[c] = acc.value();
  });

  CompensatedSum total;
  for (double v : partial) total += v;
  return partial_prefactor(rc.alphas()[j], uj, pv) * std::ldexp(total.value(), -static_cast<int>(rc.n()));
}

std::vector<double> phi_gradient(const ReducedConfig& rc, Exponent p, const PhiOptions& opts) {
  check_cap(rc, opts);
  const std::size_t n = rc.n();
  const double pv = p.value();
  for (double u : rc.us()) {
    if (u < 0.0) throw std::invalid_argument("phi_gradient needs u_i >= 0");
  }
  const double expo = p.inverse() - 1.0;
  const SignTerms terms = sign_terms(rc, p);
  std::vector<PartialWeights> k(n);
  for (std::size_t j = 0; j < n; ++j) k[j] = partial_weights(rc.us()[j], pv);
  const ChunkPlan plan = plan_chunks(n);

  std::vector<std::vector<double>> partial(plan.chunks);
  parallel_for(plan.chunks, opts.threads, [&](std::size_t c) {
    // Plain sums inside a chunk; chunks are combined with compensation.
    std::vector<double>& acc = partial[c];
    acc.assign(n, 0.0);
    gray_walk(terms, c * plan.chunk_len, plan.chunk_len, [&](std::uint64_t code, double s) {
      if (s == 0.0) return;
      const double w = std::pow(s, expo);
      for (std::size_t j = 0; j < n; ++j) acc[j] += (((code >> j) & 1U) ? k[j].minus : k[j].plus) * w;
    });
  });

  std::vector<double> grad(n);
  for (std::size_t j = 0; j < n; ++j) {
    CompensatedSum total;
    for (const auto& chunk : partial) total += chunk[j];
    grad[j] = partial_prefactor(rc.alphas()[j], rc.us()[j], pv) * std::ldexp(total.value(), -static_cast<int>(n));
  }
  return grad;
}

GradientEstimate phi_gradient_mc(const ReducedConfig& rc, Exponent p, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("phi_gradient_mc needs at least one sample");
  const std::size_t n = rc.n();
  const double pv = p.value();
  for (double u : rc.us()) {
    if (u < 0.0) throw std::invalid_argument("phi_gradient_mc needs u_i >= 0");
  }
  const double neg_q = p.inverse() - 1.0;
  const SignTerms terms = sign_terms(rc, p);
  std::vector<PartialWeights> k(n);
  for (std::size_t j = 0; j < n; ++j) k[j] = partial_weights(rc.us()[j], pv);

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words((n + 63) / 64);
  std::vector<double> mean(n, 0.0);
  std::vector<double> m2(n, 0.0);
  double min_pair = std::numeric_limits<double>::infinity();

  for (std::uint64_t s = 1; s <= samples; ++s) {
    for (auto& w : words) w = rng();
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
      total += ((words[i / 64] >> (i % 64)) & 1U) ? terms.minus[i] : terms.plus[i];
    }
    const double sum = total.value();
    for (std::size_t j = 0; j < n; ++j) {
      const bool minus = (words[j / 64] >> (j % 64)) & 1U;
      const double rest = std::max(sum - (minus ? terms.minus[j] : terms.plus[j]), 0.0);
      const double up = rest + terms.plus[j];
      const double down = rest + terms.minus[j];
      double pair = k[j].plus * std::pow(up, neg_q);
      if (down > 0.0) pair += k[j].minus * std::pow(down, neg_q);
      min_pair = std::min(min_pair, pair);
      const double delta = pair - mean[j];
      mean[j] += delta / static_cast<double>(s);
      m2[j] += delta * (pair - mean[j]);
    }
  }

  GradientEstimate out;
  out.samples = samples;
  out.min_pair = min_pair;
  out.partials.resize(n);
  out.std_errors.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Averaging over eps_j contributes the factor 1/2.
    const double scale = 0.5 * partial_prefactor(rc.alphas()[j], rc.us()[j], pv);
    out.partials[j] = scale * mean[j];
    const double var = samples > 1 ? m2[j] / static_cast<double>(samples - 1) : 0.0;
    out.std_errors[j] = scale * std::sqrt(var / static_cast<double>(samples));
  }
  return out;
}

double even_part(double u, Exponent p) {
  const double pv = p.value();
  return (pow_abs(1.0 + u, pv) + pow_abs(1.0 - u, pv)) / (2.0 * (1.0 + pow_abs(u, pv)));
}

double odd_part(double u, Exponent p) {
  const double pv = p.value();
  return (pow_abs(1.0 + u, pv) - pow_abs(1.0 - u, pv)) / (2.0 * (1.0 + pow_abs(u, pv)));
}

double sign_threshold_direct(double u, Exponent p) {
  const double pv = p.value();
  const double r = pv / (pv - 1.0);
  const double t = std::pow(u, pv - 1.0);
  const double pref = std::pow(1.0 - u * u, pv) / (1.0 + std::pow(u, pv));
  const double hi = std::pow(1.0 + t, r);
  const double lo = std::pow(1.0 - t, r);
  const double den = std::pow(1.0 + u, pv) * lo - std::pow(1.0 - u, pv) * hi;
  return pref * (hi - lo) / den;
}

namespace {

// Same quantity with every difference rewritten through expm1/log1p so that
// nothing cancels as u -> 0 or u -> 1.
double sign_threshold_stable(double u, double p) {
  const double r = p / (p - 1.0);
  const bool upper = u > 0.5;
  const double s = 1.0 - u;  // exact for u >= 0.5

  const double t = std::exp((p - 1.0) * std::log(u));
  const double log1p_t = std::log1p(t);
  // log(1 - t); near u = 1 take 1 - t = -expm1((p-1) log1p(-s)).
  const double log1m_t = upper ? std::log(-std::expm1((p - 1.0) * std::log1p(-s))) : std::log1p(-t);
  // log(1 - u^2)
  const double log1m_u2 = upper ? std::log(s) + std::log1p(u) : std::log1p(-u * u);
  const double log1p_up = std::log1p(std::exp(p * std::log(u)));

  const double pref = std::exp(p * log1m_u2 - log1p_up);
  const double num = std::expm1(r * log1p_t) - std::expm1(r * log1m_t);
  const double lx = p * std::log1p(u) + r * log1m_t;
  const double ly = p * (upper ? std::log(s) : std::log1p(-u)) + r * log1p_t;
  const double den = std::exp(ly) * std::expm1(lx - ly);
  return pref * num / den;
}

}  // namespace

double sign_threshold(double u, Exponent p) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sign_threshold is defined on (0, 1)");
  return sign_threshold_stable(u, p.value());
}

double sign_threshold_sup(Exponent p, std::size_t grid) {
  if (grid < 1000) throw std::invalid_argument("sign_threshold_sup needs grid >= 1000");
  const double h = 1.0 / static_cast<double>(grid + 1);
  const ScalarMin m = scan_and_refine_min([&](double u) { return -sign_threshold(u, p); }, h, 1.0 - h, grid);
  return -m.value;
}

double two_point_root_sum(double u, Exponent p) {
  const double pv = p.value();
  const double inv_p = p.inverse();
  const double denom = 1.0 + pow_abs(u, pv);
  return std::pow(1.0 + pow_abs(1.0 + u, pv) / denom, inv_p) + std::pow(1.0 + pow_abs(1.0 - u, pv) / denom, inv_p);
}

}  // namespace adp
