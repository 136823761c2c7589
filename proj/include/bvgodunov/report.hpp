#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "datum.hpp"
#include "diagnostics.hpp"
#include "flux_model.hpp"
#include "godunov.hpp"
#include "grid.hpp"

namespace bvgodunov {

/// Check names used in reports and violation records.
namespace checks {
inline constexpr const char* conservation = "conservation";
inline constexpr const char* invariant_region = "invariant_region";
inline constexpr const char* z_bound = "singular_map_bound";
inline constexpr const char* time_continuity = "time_continuity";
inline constexpr const char* z_time_continuity = "singular_map_time_continuity";
inline constexpr const char* entropy = "discrete_entropy_inequality";
inline constexpr const char* z_increment = "singular_map_increment_bound";
inline constexpr const char* monotonicity = "monotonicity";
inline constexpr const char* contraction = "l1_contraction";
inline constexpr const char* stationarity = "stationarity";
}  // namespace checks

struct Violation {
  std::string check;
  std::size_t level = 0;
  std::ptrdiff_t cell = -1;
  double value = 0.0;
  double limit = 0.0;
};

struct DiagnosticsOptions {
  bool entropy = true;
  std::size_t entropy_alpha_count = 5;  // evenly spaced in [0, alpha_bar]
  bool track_tv = true;
  bool z_increment = true;
  std::size_t monotonicity_samples = 0;  // random order-preservation probes per run
  std::uint64_t seed = 0;
  double residual_tolerance = 1e-12;
  double region_slack = 1e-12;
  double conservation_factor = 1e-12;  // defect limit is factor * n_cells * M
  double stationarity_tolerance = 1e-10;
  double contraction_slack = 1e-13;
  std::size_t max_recorded_violations = 32;
};

/// Everything measured over one run. Histories carry one entry per completed step.
struct DiagnosticsReport {
  // run constants
  std::size_t n_cells = 0;
  std::size_t steps = 0;
  double dx = 0.0;
  double dt = 0.0;
  double lambda = 0.0;
  double alpha_bar = 0.0;
  double M = 0.0;
  double L = 0.0;
  double R_bar = 0.0;
  double tv_a = 0.0;
  double tv_u_M = 0.0;
  double tv_u0 = 0.0;

  double conservation_defect_max = 0.0;
  double conservation_limit = 0.0;
  std::size_t linf_violations = 0;
  double z_abs_max = 0.0;
  double z_bound = 0.0;
  double tv_z_initial = 0.0;
  std::vector<double> tv_z_history;
  std::vector<double> time_continuity_lhs;
  std::vector<double> time_continuity_rhs;
  std::size_t z_time_continuity_violations = 0;
  std::vector<double> entropy_alphas;
  double entropy_residual_max = 0.0;
  double z_increment_margin_max = 0.0;
  double stationarity_defect = 0.0;
  std::vector<double> contraction_history;
  std::size_t monotonicity_samples = 0;
  std::size_t monotonicity_violations = 0;

  std::vector<Violation> violations;
  std::size_t violation_count = 0;

  bool passed() const { return violation_count == 0; }

  double tv_z_max() const {
    double m = tv_z_initial;
    for (double v : tv_z_history) m = std::max(m, v);
    return m;
  }
};

/// Step hook that fills a DiagnosticsReport while a run progresses.
class DiagnosticsCollector {
 public:
  DiagnosticsCollector(const FluxModel& model, const InitialDatum& datum, const GridSpec& grid,
                       DiagnosticsOptions options = {})
      : model_(model), grid_(grid), scheme_(model, grid), options_(options), rng_(options.seed) {
    const StateSnapshot u0 = project_initial_data(datum, grid, model);
    begin(u0);
  }

  /// Starts from an explicit initial level instead of a datum.
  DiagnosticsCollector(const FluxModel& model, const StateSnapshot& initial, const GridSpec& grid,
                       DiagnosticsOptions options = {})
      : model_(model), grid_(grid), scheme_(model, grid), options_(options), rng_(options.seed) {
    begin(initial);
  }

  StepHook hook() {
    return [this](const StateSnapshot& pre, const StateSnapshot& post, std::size_t level) {
      observe(pre, post, level);
    };
  }

  /// `level` is the step count of `post` since the initial level. Levels may skip
  /// between calls; each (pre, post) pair must be one step apart.
  void observe(const StateSnapshot& pre, const StateSnapshot& post, std::size_t level) {
    report_.steps = level;
    const std::size_t n = pre.size();

    // mass balance against the constant far-field boundary fluxes
    const double mass = sum(post.values);
    const double expected = mass0_ - static_cast<double>(level) * grid_.lambda * boundary_flux_gap_;
    const double defect = std::abs(mass - expected);
    report_.conservation_defect_max = std::max(report_.conservation_defect_max, defect);
    if (defect > report_.conservation_limit) {
      flag(checks::conservation, level, -1, defect, report_.conservation_limit);
    }

    for (std::size_t j = 0; j < n; ++j) {
      if (post[j] < region_.lower[j] - options_.region_slack ||
          post[j] > region_.upper[j] + options_.region_slack) {
        ++report_.linf_violations;
        flag(checks::invariant_region, level, static_cast<std::ptrdiff_t>(j), post[j],
             post[j] < region_.lower[j] ? region_.lower[j] : region_.upper[j]);
      }
    }

    const auto z_post = transform_to_z(model_, post, grid_);
    for (std::size_t j = 0; j < n; ++j) {
      const double az = std::abs(z_post[j]);
      report_.z_abs_max = std::max(report_.z_abs_max, az);
      if (az > report_.z_bound * (1.0 + 1e-12)) {
        flag(checks::z_bound, level, static_cast<std::ptrdiff_t>(j), az, report_.z_bound);
      }
    }
    if (options_.track_tv) report_.tv_z_history.push_back(total_variation(z_post));

    const double du = l1_distance(post.values, pre.values);
    report_.time_continuity_lhs.push_back(du);
    report_.time_continuity_rhs.push_back(time_continuity_rhs_);
    if (!(du <= time_continuity_rhs_)) flag(checks::time_continuity, level, -1, du, time_continuity_rhs_);

    if (level != last_level_ + 1) z_prev_ = transform_to_z(model_, pre, grid_);
    last_level_ = level;
    const double dz = l1_distance(z_post, z_prev_);
    const double dz_limit = report_.L * du * (1.0 + 1e-12) + 1e-14;
    if (dz > dz_limit) {
      ++report_.z_time_continuity_violations;
      flag(checks::z_time_continuity, level, -1, dz, dz_limit);
    }
    z_prev_ = z_post;

    if (options_.entropy) {
      for (const auto& k : k_profiles_) {
        const auto r = entropy_residual(scheme_, pre, post, k);
        const auto it = std::max_element(r.begin(), r.end());
        report_.entropy_residual_max = std::max(report_.entropy_residual_max, *it);
        if (*it > options_.residual_tolerance) {
          flag(checks::entropy, level, it - r.begin(), *it, options_.residual_tolerance);
        }
      }
    }

    if (options_.z_increment) {
      const auto zc = z_increment_bound_check(scheme_, a_ext_, pre, constants_, options_.residual_tolerance);
      report_.z_increment_margin_max = std::max(report_.z_increment_margin_max, zc.worst_margin);
      if (!zc.holds) flag(checks::z_increment, level - 1, zc.worst_cell, zc.worst_margin, options_.residual_tolerance);
    }

    if (probes_left_ > 0 && n > 4) probe_monotonicity(pre, level);
  }

  /// Records dx * sum|u - v| of a partner run and checks that it never grows.
  void set_contraction_history(std::vector<double> history) {
    report_.contraction_history = std::move(history);
    for (std::size_t i = 0; i + 1 < report_.contraction_history.size(); ++i) {
      const double next = report_.contraction_history[i + 1];
      if (next > report_.contraction_history[i] + options_.contraction_slack) {
        flag(checks::contraction, i + 1, -1, next, report_.contraction_history[i]);
      }
    }
  }

  const DiagnosticsReport& report() const { return report_; }
  const InvariantRegion& region() const { return region_; }
  const BoundConstants& constants() const { return constants_; }

 private:
  void begin(const StateSnapshot& u0) {
    require_grid(u0, grid_, "DiagnosticsCollector");
    region_ = invariant_region(model_, u0, grid_);
    constants_ = bound_constants(model_, region_.bound);

    auto& r = report_;
    r.n_cells = grid_.n_cells;
    r.dx = grid_.dx();
    r.dt = grid_.dt();
    r.lambda = grid_.lambda;
    r.alpha_bar = region_.alpha_bar;
    r.M = constants_.M;
    r.L = constants_.L;
    r.R_bar = constants_.R_bar;
    r.tv_a = model_.spatial_coefficient().total_variation();
    r.tv_u_M = model_.critical_coefficient().total_variation();
    r.tv_u0 = total_variation(u0.values);
    r.conservation_limit = options_.conservation_factor * static_cast<double>(grid_.n_cells) * r.M;
    r.z_bound = 2.0 * r.M * r.L;
    time_continuity_rhs_ = time_continuity_bound(model_, constants_, grid_.lambda, r.tv_u0);

    mass0_ = sum(u0.values);
    const std::size_t n = u0.size();
    boundary_flux_gap_ = scheme_.interface(static_cast<std::ptrdiff_t>(n) - 1, u0[n - 1], u0[n - 1]) -
                         scheme_.interface(-1, u0[0], u0[0]);

    z_prev_ = transform_to_z(model_, u0, grid_);
    for (double z : z_prev_) r.z_abs_max = std::max(r.z_abs_max, std::abs(z));
    r.tv_z_initial = total_variation(z_prev_);

    if (options_.entropy && options_.entropy_alpha_count > 0) {
      const std::size_t count = options_.entropy_alpha_count;
      for (std::size_t i = 0; i < count; ++i) {
        const double alpha =
            count == 1 ? r.alpha_bar : r.alpha_bar * static_cast<double>(i) / static_cast<double>(count - 1);
        r.entropy_alphas.push_back(alpha);
        for (Branch b : {Branch::plus, Branch::minus}) {
          k_profiles_.push_back(extended_k_profile(model_, grid_, alpha, b));
        }
      }
    }
    a_ext_ = extended_spatial_coefficient(model_, grid_);

    r.stationarity_defect = std::max(stationarity_defect(model_, r.alpha_bar, Branch::plus, grid_),
                                     stationarity_defect(model_, r.alpha_bar, Branch::minus, grid_));
    if (r.stationarity_defect > options_.stationarity_tolerance) {
      flag(checks::stationarity, 0, -1, r.stationarity_defect, options_.stationarity_tolerance);
    }
    probes_left_ = options_.monotonicity_samples;
  }

  // Raises a copy of `pre` on a random interior window and checks the step keeps the order.
  // End cells stay shared so the extrapolated ghost states coincide.
  void probe_monotonicity(const StateSnapshot& pre, std::size_t level) {
    --probes_left_;
    ++report_.monotonicity_samples;
    const std::size_t n = pre.size();
    std::uniform_int_distribution<std::size_t> pick(1, n - 2);
    std::size_t lo = pick(rng_), hi = pick(rng_);
    if (lo > hi) std::swap(lo, hi);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    StateSnapshot raised = pre;
    for (std::size_t j = lo; j <= hi; ++j) {
      raised.values[j] += frac(rng_) * (region_.upper[j] - pre[j]);
    }
    StateSnapshot a = pre, b = raised;
    scheme_.step_into(pre.values, a.values);
    scheme_.step_into(raised.values, b.values);
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] > b[j] + 1e-14) {
        ++report_.monotonicity_violations;
        flag(checks::monotonicity, level - 1, static_cast<std::ptrdiff_t>(j), a[j] - b[j], 1e-14);
        break;
      }
    }
  }

  void flag(const char* check, std::size_t level, std::ptrdiff_t cell, double value, double limit) {
    ++report_.violation_count;
    if (report_.violations.size() < options_.max_recorded_violations) {
      report_.violations.push_back({check, level, cell, value, limit});
    }
  }

  static double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }

  FluxModel model_;
  GridSpec grid_;
  GodunovScheme scheme_;
  DiagnosticsOptions options_;
  std::mt19937_64 rng_;
  InvariantRegion region_;
  BoundConstants constants_;
  DiagnosticsReport report_;
  double mass0_ = 0.0;
  double boundary_flux_gap_ = 0.0;
  double time_continuity_rhs_ = 0.0;
  std::vector<double> z_prev_;
  std::vector<std::vector<double>> k_profiles_;
  std::vector<double> a_ext_;
  std::size_t probes_left_ = 0;
  std::size_t last_level_ = 0;
};

inline nlohmann::json to_json(const DiagnosticsReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"check", v.check}, {"level", v.level}, {"cell", v.cell}, {"value", v.value},
                          {"limit", v.limit}});
  }
  return nlohmann::json{
      {"passed", r.passed()},
      {"constants",
       {{"n_cells", r.n_cells},
        {"steps", r.steps},
        {"dx", r.dx},
        {"dt", r.dt},
        {"lambda", r.lambda},
        {"alpha_bar", r.alpha_bar},
        {"M", r.M},
        {"L", r.L},
        {"R_bar", r.R_bar},
        {"tv_a", r.tv_a},
        {"tv_u_M", r.tv_u_M},
        {"tv_u0", r.tv_u0}}},
      {"conservation_defect_max", r.conservation_defect_max},
      {"conservation_limit", r.conservation_limit},
      {"linf_violations", r.linf_violations},
      {"z_abs_max", r.z_abs_max},
      {"z_bound", r.z_bound},
      {"tv_z_initial", r.tv_z_initial},
      {"tv_z_max", r.tv_z_max()},
      {"tv_z_history", r.tv_z_history},
      {"time_continuity_lhs", r.time_continuity_lhs},
      {"time_continuity_rhs", r.time_continuity_rhs},
      {"z_time_continuity_violations", r.z_time_continuity_violations},
      {"entropy_alphas", r.entropy_alphas},
      {"entropy_residual_max", r.entropy_residual_max},
      {"z_increment_margin_max", r.z_increment_margin_max},
      {"stationarity_defect", r.stationarity_defect},
      {"contraction_history", r.contraction_history},
      {"monotonicity_samples", r.monotonicity_samples},
      {"monotonicity_violations", r.monotonicity_violations},
      {"violation_count", r.violation_count},
      {"violations", violations}};
}

}  // namespace bvgodunov
