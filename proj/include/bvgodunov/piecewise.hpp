#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bvgodunov {

/// Step function with finitely many breakpoints.
///
/// `values[k]` is the value on the k-th open interval, so there is always one
/// more value than breakpoints. At a breakpoint the function takes the value of
/// the interval to its right (right-continuous representative).
class PiecewiseCoefficient {
 public:
  PiecewiseCoefficient() : values_{0.0} {}

  explicit PiecewiseCoefficient(double constant) : values_{constant} { validate(); }

  PiecewiseCoefficient(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    validate();
  }

  static PiecewiseCoefficient constant(double value) { return PiecewiseCoefficient(value); }

  /// Two-valued step: `left` for x < at, `right` for x >= at.
  static PiecewiseCoefficient step(double at, double left, double right) {
    return PiecewiseCoefficient({at}, {left, right});
  }

  double operator()(double x) const {
    // number of breakpoints <= x
    const auto k = static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
    return values_[k];
  }

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }

  bool is_constant() const {
    return std::all_of(values_.begin(), values_.end(),
                       [&](double v) { return v == values_.front(); });
  }

  double total_variation() const {
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) tv += std::abs(values_[i + 1] - values_[i]);
    return tv;
  }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  double max_abs() const { return std::max(std::abs(min_value()), std::abs(max_value())); }

  double leftmost_value() const { return values_.front(); }
  double rightmost_value() const { return values_.back(); }

  /// Exact integral over [lo, hi).
  double integrate(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    double sum = 0.0;
    double cursor = lo;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
    auto k = static_cast<std::size_t>(it - breakpoints_.begin());
    for (; it != breakpoints_.end() && *it < hi; ++it, ++k) {
      sum += values_[k] * (*it - cursor);
      cursor = *it;
    }
    sum += values_[k] * (hi - cursor);
    return sum;
  }

  /// Pointwise transform of the values; breakpoints are kept.
  template <typename Fn>
  PiecewiseCoefficient transformed(Fn&& fn) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return PiecewiseCoefficient(breakpoints_, std::move(v));
  }

  friend bool operator==(const PiecewiseCoefficient&, const PiecewiseCoefficient&) = default;

 private:
  void validate() const {
    if (values_.size() != breakpoints_.size() + 1) {
      throw ConfigError("piecewise coefficient needs exactly one more value than breakpoints (got " +
                        std::to_string(breakpoints_.size()) + " breakpoints, " +
                        std::to_string(values_.size()) + " values)");
    }
    for (double b : breakpoints_) {
      if (!std::isfinite(b)) throw ConfigError("piecewise coefficient breakpoint is not finite");
    }
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i] < breakpoints_[i + 1])) {
        throw ConfigError("piecewise coefficient breakpoints must be strictly increasing");
      }
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ConfigError("piecewise coefficient value is not finite");
    }
  }

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Staircase whose breakpoints accumulate at the origin from the left.
///
/// Breakpoints are x_k = -2^{-k} for k = 1..K (already ascending), and crossing
/// x_k raises the value by delta * 2^{-k}. The total variation is
/// |delta| * (1 - 2^{-K}) regardless of K.
inline PiecewiseCoefficient accumulating_jumps(int jumps, double delta, double base = 0.0) {
  if (jumps < 0) throw DomainError("accumulating_jumps: jump count must be nonnegative");
  std::vector<double> breakpoints;
  std::vector<double> values{base};
  breakpoints.reserve(static_cast<std::size_t>(jumps));
  double level = base;
  for (int k = 1; k <= jumps; ++k) {
    const double scale = std::ldexp(1.0, -k);
    breakpoints.push_back(-scale);
    level += delta * scale;
    values.push_back(level);
  }
  return PiecewiseCoefficient(std::move(breakpoints), std::move(values));
}

}  // namespace bvgodunov
