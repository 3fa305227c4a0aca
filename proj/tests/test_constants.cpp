#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "adplab/constants.hpp"
#include "adplab/phi.hpp"

using namespace adp;

TEST_CASE("heavy split bound") {
  CHECK(heavy_split_bound(2.0) == doctest::Approx((std::sqrt(3.0) + 1.0) / std::sqrt(8.0)).epsilon(1e-15));
  CHECK(heavy_split_bound(2.0) == doctest::Approx(0.9659258263).epsilon(1e-9));
  CHECK(heavy_split_bound(2.0) < 1.0);
  CHECK(heavy_split_bound(3.0) > 1.0);
}

TEST_CASE("critical exponent of the heavy split") {
  const RootResult r = threshold_intro();
  CHECK(r.value == doctest::Approx(2.1052847296).epsilon(1e-8));
  CHECK(r.hi - r.lo <= 2e-8);
  CHECK(heavy_split_bound(r.lo) <= 1.0);
  CHECK(heavy_split_bound(r.hi) >= 1.0);
  const RootResult tight = threshold_intro(1e-12);
  CHECK(tight.hi - tight.lo <= 2e-12);
  CHECK(tight.hi - tight.lo < r.hi - r.lo);
}

TEST_CASE("root sum margin") {
  // Below the critical exponent the margin dips below zero inside (0, 1).
  CHECK(root_sum_margin_min(Exponent(2.1), 10000).value < -1e-6);
  CHECK(root_sum_margin_min(Exponent(2.5), 10000).value >= -1e-10);
  for (double p : {2.1, 2.3, 2.5}) {
    const double a = root_sum_margin_min(Exponent(p), 10000).value;
    const double b = root_sum_margin_min(Exponent(p), 20000).value;
    CHECK(std::fabs(a - b) < 1e-8);
  }
  CHECK_THROWS_AS(root_sum_margin_min(Exponent(2.5), 10), std::invalid_argument);
}

TEST_CASE("p_zero") {
  const RootResult r = p_zero();
  CHECK(r.value == doctest::Approx(2.2751).epsilon(2e-4));
  CHECK(std::fabs(r.value - 2.2751) < 5e-4);
  CHECK(root_sum_margin_min(Exponent(r.lo), 10000).value < -1e-10);
  CHECK(root_sum_margin_min(Exponent(r.hi), 10000).value >= -1e-10);
  const RootResult again = p_zero();
  CHECK(again.value == r.value);
  CHECK(again.lo == r.lo);
}
