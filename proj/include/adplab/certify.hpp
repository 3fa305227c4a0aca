#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "adplab/lp_core.hpp"
#include "adplab/phi.hpp"
#include "adplab/reduction.hpp"

namespace adp {

enum class Statement {
  lemma5,
  prop4,
  cor1,
  lemma2_v,
  lemma2_w,
  lemma3,
  prop1_phi,
  lemma1_limits,
  prop2_grad,
  intro_chain,
};

std::string_view to_string(Statement s) noexcept;
std::optional<Statement> parse_statement(std::string_view name) noexcept;

/// Outcome of one verification sweep. worst_margin is the smallest value of
/// (must-be-nonnegative side) over the sweep; passed is worst_margin >= -slack
/// unless a suite documents a stricter rule.
struct CertReport {
  Statement statement_id = Statement::lemma5;
  double p = 0.0;
  nlohmann::ordered_json grid_or_samples = nlohmann::ordered_json::object();
  double worst_margin = 0.0;
  bool passed = false;
  bool expected_fail = false;
  std::int64_t runtime_ms = 0;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct SuiteConfig {
  std::size_t grid = 10000;
  double slack = 1e-9;
  double reduction_slack = 1e-10;
  std::uint64_t seed = 42;
  PhiOptions phi{};

  // Sampled configurations for the reduction suites.
  std::vector<std::size_t> n_values{2, 4, 8, 16};
  std::vector<std::size_t> dims{2, 8};
  std::size_t samples_per_n = 32;

  // Sign-average suites.
  std::uint64_t mc_samples = 100000;
  std::size_t prop1_n = 16;
  std::size_t prop1_configs = 50;
  std::vector<std::size_t> prop2_n_values{16, 64, 256, 1024, 10000};
  std::size_t prop2_configs = 500;
  std::uint64_t gradient_samples = 8;
  std::size_t sign_samples = 8;

  std::size_t lemma3_max_n = 15;
  std::vector<double> lemma3_t{0.5, 1.0, 2.0};
};

/// Largest n accepted by certify_lemma3.
inline constexpr std::size_t kLemma3Cap = 20;

/// Below this exponent the gradient and endpoint-limit suites are flagged
/// expected_fail: the threshold function decays like u^{p-2}, too slowly for
/// the tested sizes and the 1e-8 endpoint window.
inline constexpr double kGradientNearTwo = 2.2;

/// min_i of c1 n^{-1/p} alpha_i^{-1/p} - |u_i|.
double prop4_margin(const ReducedConfig& rc, Exponent p);

/// c1 n^{-1/p} - (sum (alpha_i u_i)^2)^{1/2}.
double cor1_margin(const ReducedConfig& rc, Exponent p);

CertReport certify_lemma5(Exponent p, std::size_t grid, double slack = 1e-9);

CertReport certify_prop4(Exponent p, std::span<const std::size_t> n_values, std::size_t d, std::size_t samples_per_n,
                         std::uint64_t seed, double slack = 1e-10);

CertReport certify_cor1(Exponent p, std::span<const std::size_t> n_values, std::size_t d, std::size_t samples_per_n,
                        std::uint64_t seed, double slack = 1e-10);

/// First report covers the even-part bound, second the odd-part bound.
std::pair<CertReport, CertReport> certify_lemma2(Exponent p, std::size_t grid, double slack = 1e-9);

/// Exact count over all 2^n sign vectors, n = x.size(). Throws
/// std::length_error when n exceeds kLemma3Cap.
CertReport certify_lemma3(std::span<const double> t_values, std::span<const double> x);

/// Reduced configurations with alpha_i = 1/n and more than n/2 coordinates
/// above 1/2. The first configuration is u = (1, ..., 1).
CertReport certify_prop1(Exponent p, std::size_t n, std::size_t configs, std::uint64_t seed,
                         const SuiteConfig& cfg = {});

/// Gradient positivity at one n, with the leave-one-out lower bound and the
/// derivative-sign equivalence checked on sampled sign vectors. passed needs
/// every partial strictly positive.
CertReport certify_prop2(Exponent p, std::size_t n, std::size_t configs, std::uint64_t seed,
                         const SuiteConfig& cfg = {});

/// Runs certify_prop2 over cfg.prop2_n_values and reports the empirical
/// threshold: the smallest tested n from which every larger tested n passes.
CertReport prop2_threshold(Exponent p, const SuiteConfig& cfg = {});

CertReport certify_lemma1(Exponent p);

/// The all-ones configuration with n = 4, p = 2.05 and one heavy weight.
/// Its value is below 1; the entry is flagged expected_fail.
CertReport certify_intro_chain(double slack = 1e-9);

std::vector<CertReport> run_all(std::span<const double> p_list, const SuiteConfig& cfg = {});

/// True when every report passed or is flagged expected_fail.
bool all_passed(std::span<const CertReport> reports) noexcept;

/// Reduced configuration sampler used by the gradient suite: alphas drawn
/// from the admissible box, at most n/2 coordinates above 1/2, and every
/// |u_i| inside its cap. All u_i are strictly positive.
ReducedConfig sample_few_large(Exponent p, std::size_t n, std::uint64_t seed, int mode);

nlohmann::ordered_json to_json(const CertReport& r, bool with_timing = true);
std::string reports_to_json(std::span<const CertReport> reports, bool with_timing = true);
std::string reports_to_csv(std::span<const CertReport> reports, bool with_timing = true);

/// Value rounded to the given number of significant digits.
double round_sig(double x, int digits = 12);

}  // namespace adp
