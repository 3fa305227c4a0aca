#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"

#include "adplab/reduction.hpp"

using namespace adp;

TEST_CASE("reduced config validation") {
  CHECK_NOTHROW(ReducedConfig({0.5, 0.5}, {0.0, 1.0}));
  CHECK_NOTHROW(ReducedConfig({0.25, 0.75}, {-1.0, 1.0}));
  CHECK_THROWS_AS(ReducedConfig({0.2, 0.8}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedConfig({0.5, 0.6}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedConfig({0.5, 0.5}, {0.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedConfig({0.5}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedConfig({}, {}), std::invalid_argument);
  const ReducedConfig u = ReducedConfig::uniform({0.1, 0.2, 0.3});
  CHECK(u.alphas()[2] == doctest::Approx(1.0 / 3.0));
  CHECK(u.with_u(1, 0.9).us()[1] == 0.9);
  CHECK(u.us()[1] == 0.2);
}

TEST_CASE("sigma_alpha agrees with a straight evaluation") {
  const Exponent p(2.5);
  const Configuration cfg = sample_configuration(4, 3, 7, p);
  const SigmaAlpha sa = sigma_alpha(cfg);
  auto mass = [&](const LpVector& v) {
    double s = 0.0;
    for (double c : v.coords()) s += std::pow(std::fabs(c), 2.5);
    return s;
  };
  for (std::size_t i = 0; i < 4; ++i) {
    const LpVector& y = cfg.ys()[i];
    double diff = 0.0;
    for (std::size_t k = 0; k < 3; ++k) diff += std::pow(std::fabs(cfg.x()[k] - y[k]), 2.5);
    const double m = mass(cfg.x()) + mass(y);
    CHECK(std::fabs(sa.sigmas[i] - diff / m) <= 1e-12);
    CHECK(std::fabs(sa.alphas[i] - m / 2.0) <= 1e-12);
  }
}

TEST_CASE("u_from_sigma endpoints and errors") {
  for (double p : {2.0, 2.5, 3.0, 8.0}) {
    const Exponent e(p);
    CHECK(u_from_sigma(1.0, e) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(std::fabs(u_from_sigma(1.0, e)) <= 1e-13);
    CHECK(u_from_sigma(0.0, e) == 1.0);
    CHECK(u_from_sigma(std::exp2(p - 1.0), e) == -1.0);
    CHECK(u_from_sigma(std::exp2(p - 1.0) + 5e-10, e) == -1.0);
    CHECK_THROWS_AS(u_from_sigma(std::exp2(p - 1.0) + 1e-6, e), std::domain_error);
    CHECK_THROWS_AS(u_from_sigma(-1e-3, e), std::domain_error);
    CHECK_THROWS_AS(u_from_sigma(NAN, e), std::domain_error);
  }
}

TEST_CASE("u_from_sigma inverts sigma_of_u") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double p : {2.0, 2.1, 3.0, 5.0}) {
    for (int k = 0; k < 500; ++k) {
      const double u = unit(rng);
      CHECK(std::fabs(u_from_sigma(sigma_of_u(u, Exponent(p)), Exponent(p)) - u) <= 1e-10);
    }
  }
}

TEST_CASE("u_from_sigma is strictly decreasing") {
  std::mt19937_64 rng(4);
  for (double p : {2.1, 3.0, 8.0}) {
    std::uniform_real_distribution<double> s(0.0, std::exp2(p - 1.0));
    for (int k = 0; k < 500; ++k) {
      double a = s(rng), b = s(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-9) continue;
      CHECK(u_from_sigma(a, Exponent(p)) > u_from_sigma(b, Exponent(p)));
    }
  }
}

TEST_CASE("reduce: aligned points give u = 0") {
  const Exponent p(3.0);
  const std::size_t n = 5;
  const double r = std::pow(1.0 / n, 1.0 / 3.0);
  const LpVector x = LpVector::basis(2, 0, p).scaled(r);
  // Disjoint supports: |x - y|^p = |x|^p + |y|^p, so sigma = 1.
  const LpVector y = LpVector::basis(2, 1, p).scaled(r);
  const ReducedConfig rc = reduce(Configuration(x, std::vector<LpVector>(n, y)));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::fabs(rc.us()[i]) <= 1e-12);
    CHECK(rc.alphas()[i] == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
  // y = x: sigma = 0, u = 1.
  const ReducedConfig same = reduce(Configuration(x, std::vector<LpVector>(n, x)));
  for (double u : same.us()) CHECK(u == 1.0);
}

TEST_CASE("bound constants") {
  const BoundConstants c3 = bound_constants(Exponent(3.0));
  CHECK(c3.c1 == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(c3.c1 == doctest::Approx(1.5874010520).epsilon(1e-10));
  CHECK(1.0 / (2.0 - std::cbrt(2.0)) == doctest::Approx(1.3512).epsilon(1e-4));
  CHECK(c3.c2 == doctest::Approx(1.0));
  CHECK(c3.c3 == doctest::Approx(12.0));
  CHECK(c3.c4 == doctest::Approx(1.0 / 32.0));
  CHECK(c3.c5 == doctest::Approx(1.0 / 72.0));

  // Near p = 2 the second branch dominates.
  const BoundConstants c21 = bound_constants(Exponent(2.1));
  CHECK(c21.c1 == doctest::Approx(1.0 / (2.0 - std::pow(2.0, 1.0 / 2.1))).epsilon(1e-14));
  CHECK(c21.c1 == doctest::Approx(1.6422130719).epsilon(1e-9));
  CHECK(c21.c1 > std::pow(2.0, 1.0 - 1.0 / 2.1));

  CHECK_THROWS_AS(bound_constants(Exponent(2.0)), std::domain_error);
}

TEST_CASE("sampled configurations respect the u cap") {
  const Exponent p(3.0);
  const BoundConstants c = bound_constants(p);
  for (std::uint64_t seed = 11; seed < 40; ++seed) {
    const ReducedConfig rc = reduce(sample_configuration(6, 4, seed, p));
    for (std::size_t i = 0; i < rc.n(); ++i) {
      CHECK(std::fabs(rc.us()[i]) <= u_cap(c.c1, rc.n(), rc.alphas()[i], p) + 1e-10);
    }
  }
}

TEST_CASE("concave ratio against its chord") {
  for (double p : {2.01, 2.5, 8.0}) {
    const Exponent e(p);
    CHECK(concave_ratio(0.0, e) == doctest::Approx(concave_chord(0.0, e)).epsilon(1e-15));
    CHECK(std::fabs(concave_ratio(1.0, e) - concave_chord(1.0, e)) <= 1e-12);
    for (int k = 1; k < 100; ++k) CHECK(concave_ratio(k / 100.0, e) >= concave_chord(k / 100.0, e));
  }
}
