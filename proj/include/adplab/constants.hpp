#pragma once

#include <cstddef>

#include "adplab/lp_core.hpp"
#include "adplab/search.hpp"

namespace adp {

/// (3^{1/p} + 1) / 8^{1/p}: upper bound on the sign average for the
/// all-ones configuration with one heavy weight, as n grows.
double heavy_split_bound(double p);

/// Root of heavy_split_bound(p) = 1 on [2, 3].
RootResult threshold_intro(double tol = 1e-8);

/// Minimum over u in [1e-6, 1] of two_point_root_sum(u, p) - 2^{1 + 1/p}.
/// The grid skips u = 0, where the difference vanishes for every p.
ScalarMin root_sum_margin_min(Exponent p, std::size_t grid);

/// Smallest p for which root_sum_margin_min(p) >= -1e-10, by bisection of
/// that predicate on [2.05, 2.5].
RootResult p_zero(std::size_t grid = 10000, double tol = 1e-6);

}  // namespace adp
