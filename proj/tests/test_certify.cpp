#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "adplab/certify.hpp"

using namespace adp;

TEST_CASE("statement names round trip") {
  for (auto s : {Statement::lemma5, Statement::prop4, Statement::cor1, Statement::lemma2_v, Statement::lemma2_w,
                 Statement::lemma3, Statement::prop1_phi, Statement::lemma1_limits, Statement::prop2_grad,
                 Statement::intro_chain}) {
    CHECK(parse_statement(to_string(s)) == s);
  }
  CHECK_FALSE(parse_statement("nope").has_value());
}

TEST_CASE("concavity suite") {
  for (double p : {2.01, 3.0, 8.0}) {
    const CertReport r = certify_lemma5(Exponent(p), 10000);
    CHECK(r.passed);
    CHECK(r.worst_margin >= -1e-12);
    CHECK(std::fabs(r.details["margin_at_0"].get<double>()) <= 1e-12);
    CHECK(std::fabs(r.details["margin_at_1"].get<double>()) <= 1e-12);
  }
}

TEST_CASE("worst margin does not increase with grid density") {
  for (double p : {2.1, 3.0}) {
    const double coarse = certify_lemma5(Exponent(p), 101).worst_margin;
    const double fine = certify_lemma5(Exponent(p), 1001).worst_margin;
    CHECK(fine <= coarse + 1e-12);
    const auto [v1, w1] = certify_lemma2(Exponent(p), 101);
    const auto [v2, w2] = certify_lemma2(Exponent(p), 1001);
    CHECK(v2.worst_margin <= v1.worst_margin + 1e-12);
    CHECK(w2.worst_margin <= w1.worst_margin + 1e-12);
  }
}

TEST_CASE("even and odd part bounds") {
  for (double p : {2.1, 2.5, 3.0, 5.0, 8.0}) {
    const auto [v, w] = certify_lemma2(Exponent(p), 10000);
    CHECK(v.statement_id == Statement::lemma2_v);
    CHECK(w.statement_id == Statement::lemma2_w);
    CHECK(v.passed);
    CHECK(w.passed);
    CHECK(v.worst_margin >= -1e-12);
    CHECK(w.worst_margin >= -1e-12);
  }
}

TEST_CASE("reduction suites") {
  const std::vector<std::size_t> ns{2, 4, 8};
  const CertReport a = certify_prop4(Exponent(2.5), ns, 3, 10, 9);
  const CertReport b = certify_prop4(Exponent(2.5), ns, 3, 10, 9);
  CHECK(a.passed);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(to_json(a, false) == to_json(b, false));
  CHECK(certify_cor1(Exponent(2.5), std::vector<std::size_t>{8}, 4, 20, 3).passed);
}

TEST_CASE("corollary margin at the extremes") {
  const Exponent p(3.0);
  const BoundConstants c = bound_constants(p);
  const std::size_t n = 8;
  const ReducedConfig zero = ReducedConfig::uniform(std::vector<double>(n, 0.0));
  CHECK(cor1_margin(zero, p) == doctest::Approx(c.c1 * std::pow(n, -1.0 / 3.0)));
  // Every u at its cap with alpha = 1/n.
  const double cap = std::min(1.0, u_cap(c.c1, n, 1.0 / n, p));
  const ReducedConfig capped = ReducedConfig::uniform(std::vector<double>(n, cap));
  CHECK(cor1_margin(capped, p) >= 0.0);
  CHECK(cor1_margin(capped, p) < cor1_margin(zero, p));
  CHECK(prop4_margin(capped, p) >= 0.0);
}

TEST_CASE("tail bound examples") {
  const std::vector<double> half{0.5};
  const CertReport one = certify_lemma3(half, std::vector<double>{1.0});
  CHECK(one.worst_margin == doctest::Approx(std::exp(-0.125) - 0.5));
  CHECK(one.passed);

  const std::vector<double> t1{1.0};
  const CertReport two = certify_lemma3(t1, std::vector<double>{1.0, 1.0});
  CHECK(two.details["per_t"][0]["count"].get<int>() == 1);
  CHECK(two.worst_margin == doctest::Approx(std::exp(-0.5) - 0.25));

  const std::vector<double> big{50.0};
  const CertReport none = certify_lemma3(big, std::vector<double>{1.0, 2.0, 3.0});
  CHECK(none.details["per_t"][0]["count"].get<int>() == 0);
  CHECK(none.worst_margin == doctest::Approx(std::exp(-1250.0)));

  CHECK_THROWS_AS(certify_lemma3(big, std::vector<double>(25, 1.0)), std::length_error);
}

TEST_CASE("sign average suite") {
  SuiteConfig cfg;
  const CertReport r = certify_prop1(Exponent(3.0), 12, 10, 5, cfg);
  CHECK(r.passed);
  CHECK(r.worst_margin > 0.0);
  CHECK(r.grid_or_samples["method"] == "exact");
}

TEST_CASE("heavy split case is an expected failure") {
  const CertReport r = certify_intro_chain();
  CHECK_FALSE(r.passed);
  CHECK(r.expected_fail);
  CHECK(r.details["phi"].get<double>() < 1.0);
  CHECK(r.details["phi"].get<double>() <= r.details["chain_bound"].get<double>() + 1e-12);
}

TEST_CASE("few-large sampler respects its constraints") {
  for (double p : {2.5, 3.0, 8.0}) {
    const Exponent e(p);
    const BoundConstants c = bound_constants(e);
    for (std::size_t n : {4, 16, 64}) {
      for (int mode = 0; mode < 8; ++mode) {
        const ReducedConfig rc = sample_few_large(e, n, 1000 + mode, mode);
        std::size_t large = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double u = rc.us()[i];
          CHECK(u > 0.0);
          CHECK(u <= u_cap(c.c1, n, rc.alphas()[i], e) + 1e-12);
          if (u > 0.5) ++large;
        }
        CHECK(large <= n / 2);
      }
    }
  }
}

TEST_CASE("gradient suite at n = 16") {
  SuiteConfig cfg;
  const CertReport r = certify_prop2(Exponent(3.0), 16, 40, 7, cfg);
  CHECK(r.passed);
  CHECK(r.worst_margin > 0.0);
  CHECK(r.details["aj_minus_c5_min"].get<double>() >= -1e-10);
  CHECK(r.details["sign_mismatches"].get<int>() == 0);
  CHECK(r.details["sign_comparisons"].get<int>() > 0);
}

TEST_CASE("gradient suite near two fails and is flagged") {
  SuiteConfig cfg;
  cfg.prop2_n_values = {16, 64};
  cfg.prop2_configs = 20;
  const CertReport r = prop2_threshold(Exponent(2.1), cfg);
  CHECK_FALSE(r.passed);
  CHECK(r.expected_fail);
  CHECK(r.details["n_hat"].is_null());
}

TEST_CASE("endpoint limits suite") {
  const CertReport r3 = certify_lemma1(Exponent(3.0));
  CHECK(r3.passed);
  CHECK(r3.details["first_k_below_near_zero"].get<int>() <= 4);
  CHECK(r3.details["first_k_below_near_one"].get<int>() <= 4);
  CHECK(r3.details["sup_empirical"].get<double>() > 0.0);
  const CertReport r21 = certify_lemma1(Exponent(2.1));
  CHECK_FALSE(r21.passed);
  CHECK(r21.expected_fail);
}

TEST_CASE("run_all") {
  CHECK(run_all(std::vector<double>{}).empty());

  SuiteConfig cfg;
  cfg.grid = 500;
  cfg.samples_per_n = 4;
  cfg.prop1_n = 10;
  cfg.prop1_configs = 5;
  cfg.prop2_n_values = {16, 64};
  cfg.prop2_configs = 10;
  cfg.lemma3_max_n = 6;
  const std::vector<double> ps{2.5, 3.0};
  const auto a = run_all(ps, cfg);
  const auto b = run_all(ps, cfg);
  CHECK(all_passed(a));
  CHECK(reports_to_json(a, false) == reports_to_json(b, false));
  CHECK(reports_to_csv(a, false) == reports_to_csv(b, false));

  const std::vector<double> bad{2.0};
  const auto c = run_all(bad, cfg);
  CHECK_FALSE(all_passed(c));
}

TEST_CASE("serialization order and rounding") {
  CertReport r;
  r.statement_id = Statement::lemma5;
  r.p = 3.0;
  r.worst_margin = 0.1234567890123456;
  r.passed = true;
  r.runtime_ms = 17;
  const auto j = to_json(r, true);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"statement_id", "p", "grid_or_samples", "worst_margin", "passed",
                                         "expected_fail", "runtime_ms", "details"});
  CHECK(j["worst_margin"].get<double>() == 0.123456789012);
  CHECK(j["runtime_ms"].get<int>() == 17);
  CHECK(to_json(r, false)["runtime_ms"].get<int>() == 0);

  const std::string csv = reports_to_csv(std::vector<CertReport>{r}, false);
  CHECK(csv.rfind("statement_id,p,grid_or_samples,worst_margin,passed,expected_fail,runtime_ms,details\n", 0) == 0);
  CHECK(csv.find("lemma5,3.0,") != std::string::npos);
  CHECK(round_sig(1.23456789012345e-7) == 1.23456789012e-7);
}
