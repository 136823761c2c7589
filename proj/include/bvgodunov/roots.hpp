#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace bvgodunov {

struct RootOptions {
  double tolerance = 1e-12;  // absolute, on the residual f(x) - target
  int max_iterations = 200;
  int max_expansions = 64;  // bracket doublings before giving up
};

/// Solves f(x) = target for nondecreasing f on [lo, hi] by bisection.
///
/// Requires f(lo) <= target <= f(hi). Stops once the residual is within
/// tolerance, the bracket collapses to adjacent doubles, or the iteration
/// budget is spent; the best midpoint found is returned.
template <typename Fn>
double bisect_increasing(Fn&& f, double target, double lo, double hi, const RootOptions& opt = {}) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (std::abs(flo) <= opt.tolerance) return lo;
  if (std::abs(fhi) <= opt.tolerance) return hi;
  if (flo > 0.0 || fhi < 0.0) {
    throw RangeError("bisect_increasing: target not bracketed by [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < opt.max_iterations; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid) - target;
    if (std::abs(fm) <= opt.tolerance) return mid;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

/// Bisection with an outward bracket search around `guess` for nondecreasing f.
template <typename Fn>
double bisect_increasing_expanding(Fn&& f, double target, double guess, double width,
                                   const RootOptions& opt = {}) {
  if (!(width > 0.0)) width = 1.0;
  double lo = guess - width;
  double hi = guess + width;
  int expansions = 0;
  while (f(lo) > target) {
    if (++expansions > opt.max_expansions) {
      throw RangeError("bisect_increasing_expanding: no lower bracket within expansion limit");
    }
    width *= 2.0;
    lo = guess - width;
  }
  expansions = 0;
  while (f(hi) < target) {
    if (++expansions > opt.max_expansions) {
      throw RangeError("bisect_increasing_expanding: no upper bracket within expansion limit");
    }
    width *= 2.0;
    hi = guess + width;
  }
  return bisect_increasing(f, target, lo, hi, opt);
}

}  // namespace bvgodunov
