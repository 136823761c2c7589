#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "datum.hpp"
#include "errors.hpp"
#include "flux_model.hpp"
#include "godunov.hpp"
#include "grid.hpp"

namespace bvgodunov {

/// z_j = Psi(u_j, x_j).
inline std::vector<double> transform_to_z(const FluxModel& model, const StateSnapshot& state,
                                          const GridSpec& grid) {
  require_grid(state, grid, "transform_to_z");
  std::vector<double> z(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    z[j] = model.singular_map(state[j], grid.center(static_cast<std::ptrdiff_t>(j)));
  }
  return z;
}

inline double total_variation(std::span<const double> values) {
  if (values.empty()) throw DomainError("total_variation: empty sequence");
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < values.size(); ++j) tv += std::abs(values[j + 1] - values[j]);
  return tv;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return s;
}

/// M, L(M) and R_bar(M) for a band |u| <= M.
struct BoundConstants {
  double M = 0.0;
  double L = 0.0;
  double R_bar = 0.0;
};

inline BoundConstants bound_constants(const FluxModel& model, double M) {
  return {M, model.lipschitz_bound(M), model.modulus_bound(M)};
}

/// k_alpha^branch at x_{-1} .. x_{n_cells}, ghosts included; k[j + 1] belongs to cell j.
inline std::vector<double> extended_k_profile(const FluxModel& model, const GridSpec& grid,
                                              double alpha, Branch branch) {
  std::vector<double> k(grid.n_cells + 2);
  for (std::ptrdiff_t j = -1; j <= static_cast<std::ptrdiff_t>(grid.n_cells); ++j) {
    k[static_cast<std::size_t>(j + 1)] = model.solve_k_alpha(alpha, branch, grid.center(j));
  }
  return k;
}

/// Residuals r_j = |u^{n+1}_j - k_j| - |u^n_j - k_j| + lambda (F_{j+1/2} - F_{j-1/2}),
/// with F the scheme's flux applied to u v k minus the flux applied to u ^ k.
/// A scheme step satisfies r_j <= 0 in exact arithmetic.
inline std::vector<double> entropy_residual(const GodunovScheme& scheme, const StateSnapshot& pre,
                                            const StateSnapshot& post, std::span<const double> k_ext) {
  const std::size_t n = pre.size();
  require_same_size(pre, post, "entropy_residual");
  const auto cell_u = [&](std::ptrdiff_t j) {
    return pre[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 1))];
  };
  const auto cell_k = [&](std::ptrdiff_t j) { return k_ext[static_cast<std::size_t>(j + 1)]; };
  const auto entropy_flux = [&](std::ptrdiff_t j) {
    const double ul = cell_u(j), ur = cell_u(j + 1);
    const double kl = cell_k(j), kr = cell_k(j + 1);
    return scheme.interface(j, std::max(ul, kl), std::max(ur, kr)) -
           scheme.interface(j, std::min(ul, kl), std::min(ur, kr));
  };
  const double lambda = scheme.grid().lambda;
  std::vector<double> r(n);
  double west = entropy_flux(-1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    const double east = entropy_flux(jj);
    const double k = cell_k(jj);
    r[j] = std::abs(post[j] - k) - std::abs(pre[j] - k) + lambda * (east - west);
    west = east;
  }
  return r;
}

inline std::vector<double> entropy_residual(const FluxModel& model, const StateSnapshot& pre,
                                            const StateSnapshot& post, const GridSpec& grid,
                                            double alpha, Branch branch) {
  if (!(alpha >= 0.0)) throw DomainError("entropy_residual: alpha must be nonnegative");
  require_grid(pre, grid, "entropy_residual");
  const GodunovScheme scheme(model, grid);
  const auto k = extended_k_profile(model, grid, alpha, branch);
  return entropy_residual(scheme, pre, post, k);
}

/// Steps the stationary profile and reports the largest absolute change of any cell.
inline double stationarity_defect(const FluxModel& model, double alpha, Branch branch,
                                  const GridSpec& grid, std::size_t steps = 1) {
  if (!(alpha >= 0.0)) throw DomainError("stationarity_defect: alpha must be nonnegative");
  const GodunovScheme scheme(model, grid);
  StateSnapshot k{0.0, stationary_profile(model, grid, alpha, branch)};
  StateSnapshot u = k;
  StateSnapshot next = u;
  for (std::size_t s = 0; s < steps; ++s) {
    scheme.step_into(u.values, next.values);
    std::swap(u, next);
  }
  double defect = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) defect = std::max(defect, std::abs(u[j] - k[j]));
  return defect;
}

struct TimeContinuityLevel {
  double lhs = 0.0;  // sum_j |u^{n+1}_j - u^n_j|
  double rhs = 0.0;  // 2 lambda (R_bar TV(a) + L TV(u0) + L TV(u_M))
  bool holds() const { return lhs <= rhs; }
};

inline double time_continuity_bound(const FluxModel& model, const BoundConstants& c, double lambda,
                                    double tv_initial) {
  return 2.0 * lambda *
         (c.R_bar * model.spatial_coefficient().total_variation() + c.L * tv_initial +
          c.L * model.critical_coefficient().total_variation());
}

/// One entry per consecutive pair of `levels` (which must be consecutive time levels of one run).
inline std::vector<TimeContinuityLevel> time_continuity_check(std::span<const StateSnapshot> levels,
                                                              const FluxModel& model,
                                                              const BoundConstants& c, double lambda,
                                                              double tv_initial) {
  const double rhs = time_continuity_bound(model, c, lambda, tv_initial);
  std::vector<TimeContinuityLevel> out;
  for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
    require_same_size(levels[n], levels[n + 1], "time_continuity_check");
    out.push_back({l1_distance(levels[n + 1].values, levels[n].values), rhs});
  }
  return out;
}

/// dx * sum_j |u_j - v_j| per level of two runs on one grid.
inline std::vector<double> contraction_history(std::span<const StateSnapshot> run_u,
                                               std::span<const StateSnapshot> run_v,
                                               const GridSpec& grid) {
  if (run_u.size() != run_v.size()) {
    throw GridMismatchError("contraction_history: runs have different level counts");
  }
  std::vector<double> out;
  out.reserve(run_u.size());
  for (std::size_t n = 0; n < run_u.size(); ++n) {
    require_grid(run_u[n], grid, "contraction_history");
    require_grid(run_v[n], grid, "contraction_history");
    out.push_back(grid.dx() * l1_distance(run_u[n].values, run_v[n].values));
  }
  return out;
}

inline bool is_nonincreasing(std::span<const double> seq, double slack) {
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    if (seq[n + 1] > seq[n] + slack) return false;
  }
  return true;
}

/// Runs two data side by side on one grid and records dx * sum |u - v| at every level.
inline std::vector<double> paired_contraction(const FluxModel& model, const InitialDatum& datum_u,
                                              const InitialDatum& datum_v, const GridSpec& grid) {
  grid.validate();
  const GodunovScheme scheme(model, grid);
  StateSnapshot u = project_initial_data(datum_u, grid, model);
  StateSnapshot v = project_initial_data(datum_v, grid, model);
  StateSnapshot nu = u, nv = v;
  std::vector<double> hist{grid.dx() * l1_distance(u.values, v.values)};
  for (std::size_t n = 0; n < grid.level_count(); ++n) {
    scheme.step_into(u.values, nu.values);
    scheme.step_into(v.values, nv.values);
    std::swap(u, nu);
    std::swap(v, nv);
    hist.push_back(grid.dx() * l1_distance(u.values, v.values));
  }
  return hist;
}

struct ZIncrementCheck {
  bool holds = true;
  std::ptrdiff_t worst_cell = -1;  // j of the worst interface j + 1/2
  double worst_margin = -std::numeric_limits<double>::infinity();  // max of lhs - rhs
};

/// Checks, at every interior interface j + 1/2,
///   (Psi(u_{j+1}, x_{j+1}) - Psi(u_j, x_j))_+
///     <= sigma_-(u_j, x_j) |F_{j+1/2} - F_{j-1/2}| + sigma_+(u_{j+1}, x_j) |F_{j+3/2} - F_{j+1/2}|
///        + Omega_{j+1/2},
/// where Omega collects the coefficient jumps of a and u_M in the stencil
/// weighted by R_bar and L, and sigma_-/sigma_+ flag a strictly decreasing /
/// increasing local flux (both vanish at u = u_M).
inline ZIncrementCheck z_increment_bound_check(const GodunovScheme& scheme,
                                               std::span<const double> a_ext,
                                               const StateSnapshot& pre, const BoundConstants& c,
                                               double tolerance = 1e-12) {
  const auto n = static_cast<std::ptrdiff_t>(pre.size());
  const auto u = [&](std::ptrdiff_t j) {
    return pre[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, n - 1))];
  };
  const auto a = [&](std::ptrdiff_t j) { return a_ext[static_cast<std::size_t>(j + 1)]; };
  const auto m = [&](std::ptrdiff_t j) { return scheme.cell(j).center; };
  const auto F = [&](std::ptrdiff_t j) { return scheme.interface(j, u(j), u(j + 1)); };
  ZIncrementCheck out;
  for (std::ptrdiff_t j = 0; j + 1 < n; ++j) {
    const double lhs =
        std::max(0.0, signed_flux(scheme.cell(j + 1), u(j + 1)) - signed_flux(scheme.cell(j), u(j)));
    const double sigma_minus = scheme.cell(j).derivative(u(j)) < 0.0 ? 1.0 : 0.0;
    const double sigma_plus = scheme.cell(j).derivative(u(j + 1)) > 0.0 ? 1.0 : 0.0;
    const double omega =
        c.R_bar * (std::abs(a(j) - a(j - 1)) + 4.0 * std::abs(a(j + 1) - a(j)) + std::abs(a(j + 2) - a(j))) +
        c.L * (std::abs(m(j) - m(j - 1)) + 4.0 * std::abs(m(j + 1) - m(j)) + std::abs(m(j + 2) - m(j)));
    const double rhs =
        sigma_minus * std::abs(F(j) - F(j - 1)) + sigma_plus * std::abs(F(j + 1) - F(j)) + omega;
    const double margin = lhs - rhs;
    if (margin > out.worst_margin) {
      out.worst_margin = margin;
      out.worst_cell = j;
    }
  }
  out.holds = !(out.worst_margin > tolerance);
  return out;
}

/// a(x_j) for j = -1 .. n_cells.
inline std::vector<double> extended_spatial_coefficient(const FluxModel& model, const GridSpec& grid) {
  std::vector<double> a(grid.n_cells + 2);
  for (std::ptrdiff_t j = -1; j <= static_cast<std::ptrdiff_t>(grid.n_cells); ++j) {
    a[static_cast<std::size_t>(j + 1)] = model.spatial_coefficient()(grid.center(j));
  }
  return a;
}

inline ZIncrementCheck z_increment_bound_check(const FluxModel& model, const StateSnapshot& pre,
                                               const GridSpec& grid, const BoundConstants& c,
                                               double tolerance = 1e-12) {
  require_grid(pre, grid, "z_increment_bound_check");
  const GodunovScheme scheme(model, grid);
  const auto a = extended_spatial_coefficient(model, grid);
  return z_increment_bound_check(scheme, a, pre, c, tolerance);
}

}  // namespace bvgodunov
