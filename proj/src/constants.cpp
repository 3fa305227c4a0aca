#include "adplab/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "adplab/phi.hpp"

namespace adp {

namespace {
constexpr double kMarginTol = -1e-10;
constexpr double kScanStart = 1e-6;
}  // namespace

double heavy_split_bound(double p) { return (std::pow(3.0, 1.0 / p) + 1.0) / std::pow(8.0, 1.0 / p); }

RootResult threshold_intro(double tol) {
  return bisect([](double p) { return heavy_split_bound(p) - 1.0; }, 2.0, 3.0, tol);
}

ScalarMin root_sum_margin_min(Exponent p, std::size_t grid) {
  if (grid < 1000) throw std::invalid_argument("root_sum_margin_min needs grid >= 1000");
  const double target = std::exp2(1.0 + p.inverse());
  return scan_and_refine_min([&](double u) { return two_point_root_sum(u, p) - target; }, kScanStart, 1.0, grid);
}

RootResult p_zero(std::size_t grid, double tol) {
  return bisect_predicate(
      [grid](double p) { return root_sum_margin_min(Exponent(p), grid).value >= kMarginTol; }, 2.05, 2.5, tol);
}

}  // namespace adp
