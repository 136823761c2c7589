#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace bvgodunov {

/// Uniform grid on [x_left, x_right] with fixed ratio lambda = dt / dx.
struct GridSpec {
  double x_left = 0.0;
  double x_right = 1.0;
  std::size_t n_cells = 1;
  double lambda = 0.0;
  double t_final = 0.0;

  double dx() const { return (x_right - x_left) / static_cast<double>(n_cells); }
  double dt() const { return lambda * dx(); }

  /// x_j = x_left + (j + 1/2) dx; j may be -1 or n_cells for ghost cells.
  double center(std::ptrdiff_t j) const {
    return x_left + (static_cast<double>(j) + 0.5) * dx();
  }

  std::vector<double> centers() const {
    std::vector<double> xs(n_cells);
    for (std::size_t j = 0; j < n_cells; ++j) xs[j] = center(static_cast<std::ptrdiff_t>(j));
    return xs;
  }

  /// N with t_final in [t^N, t^{N+1}); the tiny slack absorbs t_final / dt
  /// landing a rounding error below an integer.
  std::size_t level_count() const {
    if (!(dt() > 0.0)) return 0;
    return static_cast<std::size_t>(std::floor(t_final / dt() + 1e-9));
  }

  void validate() const {
    if (n_cells == 0) throw ConfigError("grid: n_cells must be positive");
    if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(x_right > x_left)) {
      throw ConfigError("grid: need finite x_left < x_right");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("grid: lambda must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
      throw ConfigError("grid: t_final must be nonnegative");
    }
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Cell averages at one time level.
struct StateSnapshot {
  double time = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }
};

inline void require_same_size(const StateSnapshot& a, const StateSnapshot& b, const char* where) {
  if (a.size() != b.size()) {
    throw GridMismatchError(std::string(where) + ": snapshots have " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()) + " cells");
  }
}

inline void require_grid(const StateSnapshot& s, const GridSpec& grid, const char* where) {
  if (s.size() != grid.n_cells) {
    throw GridMismatchError(std::string(where) + ": snapshot has " + std::to_string(s.size()) +
                            " cells, grid has " + std::to_string(grid.n_cells));
  }
}

}  // namespace bvgodunov
