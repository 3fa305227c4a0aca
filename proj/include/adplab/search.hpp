#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace adp {

/// Bracketed root: lo <= value <= hi and hi - lo <= 2 * tolerance.
struct RootResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
};

/// Bisection for a sign change of `fn` on [lo, hi]. Throws std::domain_error
/// if the end values do not differ in sign.
template <class Fn>
RootResult bisect(Fn&& fn, double lo, double hi, double tol, int max_iter = 200) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return {lo, lo, lo, tol, 0};
  if (fhi == 0.0) return {hi, hi, hi, tol, 0};
  if ((flo < 0.0) == (fhi < 0.0)) throw std::domain_error("bisect: no sign change on bracket");

  int it = 0;
  while (hi - lo > 2.0 * tol && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    ++it;
    if (fm == 0.0) return {mid, mid, mid, tol, it};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, tol, it};
}

/// Bisection for the point where a predicate flips. The predicate must take
/// different values at lo and hi; the returned bracket keeps that property.
template <class Pred>
RootResult bisect_predicate(Pred&& pred, double lo, double hi, double tol, int max_iter = 200) {
  const bool at_lo = pred(lo);
  if (at_lo == pred(hi)) throw std::domain_error("bisect_predicate: predicate equal at both bracket ends");
  int it = 0;
  while (hi - lo > 2.0 * tol && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    ++it;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, tol, it};
}

struct ScalarMin {
  double arg = 0.0;
  double value = 0.0;
};

/// Golden-section minimization of a unimodal function on [a, b].
template <class Fn>
ScalarMin golden_section_min(Fn&& fn, double a, double b, double tol = 1e-12, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  return fc < fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

/// Dense scan of `fn` at the given number of equispaced points on [a, b],
/// followed by golden-section refinement between the neighbours of the best
/// grid point.
template <class Fn>
ScalarMin scan_and_refine_min(Fn&& fn, double a, double b, std::size_t grid) {
  if (grid < 2) throw std::invalid_argument("scan_and_refine_min: grid must be >= 2");
  const double h = (b - a) / static_cast<double>(grid - 1);
  std::size_t best = 0;
  double best_val = fn(a);
  for (std::size_t k = 1; k < grid; ++k) {
    const double v = fn(a + h * static_cast<double>(k));
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  const double left = best == 0 ? a : a + h * static_cast<double>(best - 1);
  const double right = best + 1 >= grid ? b : a + h * static_cast<double>(best + 1);
  ScalarMin refined = golden_section_min(fn, left, right);
  const double at_grid = a + h * static_cast<double>(best);
  if (refined.value < best_val) return refined;
  return {at_grid, best_val};
}

}  // namespace adp
