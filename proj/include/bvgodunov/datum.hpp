#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "flux_model.hpp"
#include "grid.hpp"
#include "piecewise.hpp"

namespace bvgodunov {

/// Piecewise-constant initial datum; cell averages are integrated exactly.
struct PiecewiseDatum {
  PiecewiseCoefficient profile;
};

/// Bounded closed-form datum, constant outside [support_lo, support_hi].
struct FunctionDatum {
  std::function<double(double)> fn;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::string name = "function";
};

/// The discrete stationary profile {k_alpha^branch(x_j)}, sampled at cell centers.
struct StationaryDatum {
  double alpha = 0.0;
  Branch branch = Branch::plus;
};

using InitialDatum = std::variant<PiecewiseDatum, FunctionDatum, StationaryDatum>;

/// Smooth bump offset + amplitude * cos^2(pi (x - center) / (2 width)) on |x - center| < width.
inline FunctionDatum cosine_bump(double center, double width, double amplitude, double offset = 0.0) {
  if (!(width > 0.0)) throw ConfigError("cosine_bump: width must be positive");
  constexpr double pi = 3.14159265358979323846;
  return FunctionDatum{
      [=](double x) {
        const double s = (x - center) / width;
        if (std::abs(s) >= 1.0) return offset;
        const double c = std::cos(0.5 * pi * s);
        return offset + amplitude * c * c;
      },
      center - width, center + width, "cosine_bump"};
}

/// u_j^0 = (1/dx) * integral of u0 over cell j.
///
/// Piecewise data integrate exactly; closed forms use the midpoint rule on four
/// equal sub-cells; stationary profiles are sampled at x_j so they are exact
/// discrete steady states.
inline StateSnapshot project_initial_data(const InitialDatum& datum, const GridSpec& grid,
                                          const FluxModel& model) {
  StateSnapshot s;
  s.time = 0.0;
  s.values.resize(grid.n_cells);
  const double dx = grid.dx();
  for (std::size_t j = 0; j < grid.n_cells; ++j) {
    const double lo = grid.x_left + static_cast<double>(j) * dx;
    const double hi = lo + dx;
    s.values[j] = std::visit(
        [&](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, PiecewiseDatum>) {
            return d.profile.integrate(lo, hi) / dx;
          } else if constexpr (std::is_same_v<T, FunctionDatum>) {
            const double h = dx / 4.0;
            double sum = 0.0;
            for (int q = 0; q < 4; ++q) sum += d.fn(lo + (q + 0.5) * h);
            return sum / 4.0;
          } else {
            return model.solve_k_alpha(d.alpha, d.branch, grid.center(static_cast<std::ptrdiff_t>(j)));
          }
        },
        datum);
  }
  return s;
}

/// Interval outside of which neither the datum nor the flux varies, so the
/// state there is uniform and cannot move. Empty for stationary profiles.
inline std::optional<std::pair<double, double>> active_interval(const InitialDatum& datum,
                                                                const FluxModel& model) {
  if (std::holds_alternative<StationaryDatum>(datum)) return std::nullopt;
  std::vector<double> pts = model.breakpoints();
  if (const auto* p = std::get_if<PiecewiseDatum>(&datum)) {
    pts.insert(pts.end(), p->profile.breakpoints().begin(), p->profile.breakpoints().end());
  } else if (const auto* f = std::get_if<FunctionDatum>(&datum)) {
    pts.push_back(f->support_lo);
    pts.push_back(f->support_hi);
  }
  if (pts.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  return std::make_pair(*lo, *hi);
}

/// Throws SupportError when the active interval widened by speed * t_final leaves the domain.
inline void check_support(const InitialDatum& datum, const FluxModel& model, const GridSpec& grid,
                          double speed) {
  const auto active = active_interval(datum, model);
  if (!active) return;
  const double reach = speed * grid.t_final;
  if (active->first - reach < grid.x_left || active->second + reach > grid.x_right) {
    throw SupportError("datum support [" + std::to_string(active->first) + ", " +
                       std::to_string(active->second) + "] plus influence cone " +
                       std::to_string(reach) + " leaves the domain [" + std::to_string(grid.x_left) +
                       ", " + std::to_string(grid.x_right) + "]");
  }
}

}  // namespace bvgodunov
