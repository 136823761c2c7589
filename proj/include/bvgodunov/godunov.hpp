#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "datum.hpp"
#include "errors.hpp"
#include "flux_model.hpp"
#include "grid.hpp"

namespace bvgodunov {

/// Interface flux between a cell with local flux `left` and one with `right`:
///   max{ left(max(u, left.critical())), right(min(v, right.critical())) }.
/// Nondecreasing in u, nonincreasing in v; reduces to the classical Godunov
/// flux when left and right coincide.
template <UnimodalBranch F>
double godunov_interface_flux(const F& left, const F& right, double u, double v) {
  return std::max(left(std::max(u, left.critical())), right(std::min(v, right.critical())));
}

inline double interface_flux(const FluxModel& model, double u, double v, double xl, double xr) {
  return godunov_interface_flux(model.local(xl), model.local(xr), u, v);
}

/// Largest cell-center flux of the initial cells.
inline double alpha_bar(const FluxModel& model, const StateSnapshot& initial, const GridSpec& grid) {
  require_grid(initial, grid, "alpha_bar");
  if (initial.size() == 0) throw DomainError("alpha_bar: empty snapshot");
  double best = 0.0;
  for (std::size_t j = 0; j < initial.size(); ++j) {
    best = std::max(best, model.flux(initial[j], grid.center(static_cast<std::ptrdiff_t>(j))));
  }
  return best;
}

/// Band [k^-_alpha_bar(x_j), k^+_alpha_bar(x_j)] holding the initial cells, and
/// M = max_j max(|k^-|, |k^+|).
struct InvariantRegion {
  double alpha_bar = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  double bound = 0.0;

  bool contains(const StateSnapshot& s, double slack = 0.0) const {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] < lower[j] - slack || s[j] > upper[j] + slack) return false;
    }
    return true;
  }
};

inline std::vector<double> stationary_profile(const FluxModel& model, const GridSpec& grid,
                                              double alpha, Branch branch) {
  std::vector<double> k(grid.n_cells);
  for (std::size_t j = 0; j < grid.n_cells; ++j) {
    k[j] = model.solve_k_alpha(alpha, branch, grid.center(static_cast<std::ptrdiff_t>(j)));
  }
  return k;
}

inline InvariantRegion invariant_region(const FluxModel& model, const StateSnapshot& initial,
                                        const GridSpec& grid) {
  InvariantRegion r;
  r.alpha_bar = alpha_bar(model, initial, grid);
  r.lower = stationary_profile(model, grid, r.alpha_bar, Branch::minus);
  r.upper = stationary_profile(model, grid, r.alpha_bar, Branch::plus);
  for (std::size_t j = 0; j < grid.n_cells; ++j) {
    r.bound = std::max({r.bound, std::abs(r.lower[j]), std::abs(r.upper[j])});
  }
  return r;
}

struct CflOptions {
  double safety = 0.9;
  double lambda_max = 1.0;  // used when the flux is flat (L = 0)
};

inline double cfl_lambda(const FluxModel& model, double M, const CflOptions& opt = {}) {
  const double L = model.lipschitz_bound(M);
  if (!(L > 0.0)) return opt.lambda_max;
  return opt.safety / L;
}

/// One explicit step of the scheme on a fixed grid.
///
/// Local fluxes are sampled once at every cell center, including one ghost cell
/// on each side. Ghost states are constant extrapolations of the end cells.
class GodunovScheme {
 public:
  GodunovScheme(const FluxModel& model, const GridSpec& grid) : grid_(grid) {
    local_.reserve(grid.n_cells + 2);
    for (std::ptrdiff_t j = -1; j <= static_cast<std::ptrdiff_t>(grid.n_cells); ++j) {
      local_.push_back(model.local(grid.center(j)));
    }
  }

  const GridSpec& grid() const { return grid_; }

  /// Local flux of cell j, for j in [-1, n_cells].
  const Parabola& cell(std::ptrdiff_t j) const { return local_[static_cast<std::size_t>(j + 1)]; }

  /// F_{j+1/2} for left state u in cell j and right state v in cell j + 1.
  double interface(std::ptrdiff_t j, double u, double v) const {
    return godunov_interface_flux(cell(j), cell(j + 1), u, v);
  }

  /// F[i] = F_{i-1/2}, i = 0..n_cells.
  void fluxes(std::span<const double> u, std::span<double> F) const {
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    for (std::ptrdiff_t i = 0; i <= n; ++i) {
      const double left = u[static_cast<std::size_t>(std::max<std::ptrdiff_t>(i - 1, 0))];
      const double right = u[static_cast<std::size_t>(std::min(i, n - 1))];
      F[static_cast<std::size_t>(i)] = interface(i - 1, left, right);
    }
  }

  void step_into(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = u.size();
    const double lambda = grid_.lambda;
    double west = interface(-1, u[0], u[0]);
    for (std::size_t j = 0; j < n; ++j) {
      const double east = interface(static_cast<std::ptrdiff_t>(j), u[j], u[std::min(j + 1, n - 1)]);
      out[j] = u[j] - lambda * (east - west);
      west = east;
    }
  }

  StateSnapshot step(const StateSnapshot& state) const {
    require_grid(state, grid_, "step");
    StateSnapshot next;
    next.time = state.time + grid_.dt();
    next.values.resize(state.size());
    step_into(state.values, next.values);
    return next;
  }

 private:
  GridSpec grid_;
  std::vector<Parabola> local_;
};

inline StateSnapshot step(const FluxModel& model, const StateSnapshot& state, const GridSpec& grid) {
  return GodunovScheme(model, grid).step(state);
}

using StepHook =
    std::function<void(const StateSnapshot& pre, const StateSnapshot& post, std::size_t level)>;

struct RunOptions {
  std::vector<double> output_times;  // snapshot levels floor(t / dt); 0 and the last level always kept
  std::size_t output_every = 0;      // additionally keep every k-th level when > 0
  bool paired_levels = false;        // also keep level n - 1 for every kept level n > 0
  std::vector<StepHook> hooks;       // called after each step with (u^n, u^{n+1}, n + 1)
};

struct RunResult {
  GridSpec grid;
  InvariantRegion region;
  double lipschitz = 0.0;  // L at the invariant bound M
  std::size_t steps = 0;
  StateSnapshot initial;
  std::vector<StateSnapshot> snapshots;
};

/// Projects the datum and returns the CFL ratio for its invariant bound.
inline double auto_lambda(const FluxModel& model, const InitialDatum& datum, GridSpec grid,
                          const CflOptions& opt = {}) {
  grid.lambda = 1.0;  // projection does not depend on lambda
  const StateSnapshot u0 = project_initial_data(datum, grid, model);
  return cfl_lambda(model, invariant_region(model, u0, grid).bound, opt);
}

inline void check_cfl(const FluxModel& model, const GridSpec& grid, double M) {
  const double L = model.lipschitz_bound(M);
  if (grid.lambda * L > 1.0) {
    throw CflError("lambda * L = " + std::to_string(grid.lambda * L) + " exceeds 1 (lambda = " +
                   std::to_string(grid.lambda) + ", L = " + std::to_string(L) + ")");
  }
}

/// Marches the scheme from t = 0 to the last level t^N <= t_final.
inline RunResult run(const FluxModel& model, const InitialDatum& datum, const GridSpec& grid,
                     const RunOptions& options = {}) {
  grid.validate();
  RunResult result;
  result.grid = grid;
  result.initial = project_initial_data(datum, grid, model);
  result.region = invariant_region(model, result.initial, grid);
  result.lipschitz = model.lipschitz_bound(result.region.bound);
  check_cfl(model, grid, result.region.bound);
  check_support(datum, model, grid, result.lipschitz);

  const std::size_t last = grid.level_count();
  std::set<std::size_t> keep{0, last};
  for (double t : options.output_times) {
    if (t < 0.0 || t > grid.t_final) {
      throw ConfigError("run: output time " + std::to_string(t) + " outside [0, t_final]");
    }
    keep.insert(std::min(last, static_cast<std::size_t>(std::floor(t / grid.dt() + 1e-9))));
  }
  if (options.output_every > 0) {
    for (std::size_t n = 0; n <= last; n += options.output_every) keep.insert(n);
  }
  if (options.paired_levels) {
    for (std::size_t n : std::set<std::size_t>(keep)) {
      if (n > 0) keep.insert(n - 1);
    }
  }

  const GodunovScheme scheme(model, grid);
  StateSnapshot current = result.initial;
  result.snapshots.push_back(current);
  StateSnapshot next;
  next.values.resize(current.size());
  for (std::size_t n = 0; n < last; ++n) {
    scheme.step_into(current.values, next.values);
    next.time = static_cast<double>(n + 1) * grid.dt();
    for (const auto& hook : options.hooks) hook(current, next, n + 1);
    std::swap(current, next);
    if (keep.contains(n + 1)) result.snapshots.push_back(current);
  }
  result.steps = last;
  return result;
}

}  // namespace bvgodunov
