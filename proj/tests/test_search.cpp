#include <stdexcept>
#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"

#include "adplab/compensated.hpp"
#include "adplab/search.hpp"

using namespace adp;

TEST_CASE("bisection brackets the root") {
  const RootResult r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12);
  CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.hi - r.lo <= 2e-12);
  CHECK(r.lo * r.lo - 2.0 <= 0.0);
  CHECK(r.hi * r.hi - 2.0 >= 0.0);
}

TEST_CASE("bisection handles decreasing functions and refuses bad brackets") {
  const RootResult r = bisect([](double x) { return 1.0 - x; }, 0.0, 3.0, 1e-10);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-8), std::domain_error);
}

TEST_CASE("predicate bisection finds the flip") {
  const RootResult r = bisect_predicate([](double x) { return x >= 0.3; }, 0.0, 1.0, 1e-9);
  CHECK(r.hi - r.lo <= 2e-9);
  CHECK(r.lo < 0.3);
  CHECK(r.hi >= 0.3);
}

TEST_CASE("golden section and scan refinement") {
  const ScalarMin g = golden_section_min([](double x) { return (x - 0.7) * (x - 0.7) + 3.0; }, 0.0, 1.0);
  CHECK(g.arg == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(g.value == doctest::Approx(3.0).epsilon(1e-12));
  // Two wells; the deeper one is at x = 0.8.
  auto fn = [](double x) { return std::min((x - 0.2) * (x - 0.2), (x - 0.8) * (x - 0.8) - 0.01); };
  const ScalarMin s = scan_and_refine_min(fn, 0.0, 1.0, 1000);
  CHECK(s.arg == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(s.value == doctest::Approx(-0.01).epsilon(1e-10));
}

TEST_CASE("compensated sum recovers cancelled terms") {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1.0);

  CompensatedSum many;
  for (int k = 0; k < 1000000; ++k) many += 0.1;
  CHECK(std::fabs(many.value() - 100000.0) < 1e-9);
}

TEST_CASE("parallel_for visits every index once") {
  for (unsigned threads : {1u, 2u, 5u}) {
    std::vector<int> hits(97, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}
