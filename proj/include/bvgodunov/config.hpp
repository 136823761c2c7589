#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "convergence.hpp"
#include "datum.hpp"
#include "errors.hpp"
#include "flux_model.hpp"
#include "godunov.hpp"
#include "grid.hpp"
#include "keyvalue.hpp"
#include "piecewise.hpp"
#include "report.hpp"

namespace bvgodunov {

// Flux description file
// ---------------------
//   family = quadratic_scaled | shifted_parabola | two_flux
//
//   quadratic_scaled:  epsilon = <floor>, plus the coefficient S
//   shifted_parabola:  the coefficient u_M
//   two_flux:          x0, g.scale, g.center, f.scale, f.center
//                      (g applies for x < x0, f for x >= x0)
//
// A coefficient NAME is given either as
//   NAME.breakpoints = b1 b2 ...      (optional; strictly increasing)
//   NAME.values      = v0 v1 ...      (one more than breakpoints)
// or as an accumulating staircase
//   NAME.accumulating = K delta base  (breakpoints -2^-k, k = 1..K)

inline PiecewiseCoefficient parse_coefficient(const KeyValueFile& kv, const std::string& name) {
  const std::string acc = name + ".accumulating";
  if (kv.has(acc)) {
    const auto p = kv.get_list(acc);
    if (p.size() != 3 || p[0] < 0.0 || p[0] != static_cast<double>(static_cast<int>(p[0]))) {
      throw ConfigError(kv.source() + ": `" + acc + "` expects `K delta base` with integer K >= 0");
    }
    return accumulating_jumps(static_cast<int>(p[0]), p[1], p[2]);
  }
  const auto values = kv.get_list(name + ".values");
  const auto breakpoints = kv.get_list(name + ".breakpoints", {});
  try {
    return PiecewiseCoefficient(breakpoints, values);
  } catch (const ConfigError& e) {
    throw ConfigError(kv.source() + ": coefficient `" + name + "`: " + e.what());
  }
}

inline FluxFamily parse_family(const std::string& s, const std::string& source) {
  if (s == "quadratic_scaled") return FluxFamily::quadratic_scaled;
  if (s == "shifted_parabola") return FluxFamily::shifted_parabola;
  if (s == "two_flux") return FluxFamily::two_flux;
  throw ConfigError(source + ": unknown flux family `" + s + "`");
}

inline FluxModel parse_flux(const KeyValueFile& kv) {
  const FluxFamily family = parse_family(kv.get_string("family"), kv.source());
  FluxModel model = [&] {
    try {
      switch (family) {
        case FluxFamily::quadratic_scaled:
          return FluxModel::quadratic_scaled(parse_coefficient(kv, "S"), kv.get_double("epsilon"));
        case FluxFamily::shifted_parabola:
          return FluxModel::shifted_parabola(parse_coefficient(kv, "u_M"));
        case FluxFamily::two_flux:
          return FluxModel::two_flux({kv.get_double("g.scale"), kv.get_double("g.center")},
                                     {kv.get_double("f.scale"), kv.get_double("f.center")},
                                     kv.get_double("x0"));
      }
    } catch (const DomainError& e) {
      throw ConfigError(kv.source() + ": " + e.what());
    }
    throw ConfigError(kv.source() + ": unreachable flux family");
  }();
  kv.reject_unused();
  return model;
}

inline FluxModel load_flux(const std::string& path) { return parse_flux(KeyValueFile::load(path)); }

// Datum keys (PREFIX is `datum` or `partner`)
//   PREFIX = piecewise    with PREFIX.breakpoints, PREFIX.values
//   PREFIX = cosine_bump  with PREFIX.center, PREFIX.width, PREFIX.amplitude, PREFIX.offset (0)
//   PREFIX = stationary   with PREFIX.alpha, PREFIX.branch (plus | minus)
inline InitialDatum parse_datum(const KeyValueFile& kv, const std::string& prefix) {
  const std::string kind = kv.get_string(prefix);
  if (kind == "piecewise") {
    return PiecewiseDatum{parse_coefficient(kv, prefix)};
  }
  if (kind == "cosine_bump") {
    return cosine_bump(kv.get_double(prefix + ".center"), kv.get_double(prefix + ".width"),
                       kv.get_double(prefix + ".amplitude"), kv.get_double(prefix + ".offset", 0.0));
  }
  if (kind == "stationary") {
    const double alpha = kv.get_double(prefix + ".alpha");
    if (alpha < 0.0) throw ConfigError(kv.source() + ": `" + prefix + ".alpha` must be nonnegative");
    const std::string b = kv.get_string(prefix + ".branch", "plus");
    if (b != "plus" && b != "minus") {
      throw ConfigError(kv.source() + ": `" + prefix + ".branch` must be plus or minus");
    }
    return StationaryDatum{alpha, b == "plus" ? Branch::plus : Branch::minus};
  }
  throw ConfigError(kv.source() + ": unknown datum kind `" + kind + "`");
}

inline std::string resolve_relative(const KeyValueFile& kv, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return p.string();
  const std::filesystem::path base = std::filesystem::path(kv.source()).parent_path();
  return (base / p).lexically_normal().string();
}

// Run config
// ----------
//   flux = <flux file, relative to this file>
//   x_left, x_right, n_cells, t_final
//   lambda = auto | <ratio>             (auto: 0.9 / L)
//   output_times = t1 t2 ...           (sorted, within [0, t_final])
//   output_every = k                   (also write every k-th level; 0 = off)
//   datum = ...                         (see parse_datum)
//   partner = ...                       (optional second datum for the L1 contraction history)
//   entropy_alpha_count = 5, track_tv = true, z_increment = true, monotonicity_samples = 0
//   output_dir = <directory, relative to this file>   (optional)
struct RunConfig {
  std::string flux_path;
  FluxModel model = FluxModel::shifted_parabola(PiecewiseCoefficient::constant(0.0));
  InitialDatum datum;
  std::optional<InitialDatum> partner;
  GridSpec grid;
  std::vector<double> output_times;
  std::size_t output_every = 0;
  DiagnosticsOptions diagnostics;
  std::string output_dir;
};

inline RunConfig parse_run_config(const KeyValueFile& kv) {
  RunConfig cfg;
  cfg.flux_path = resolve_relative(kv, kv.get_string("flux"));
  cfg.model = load_flux(cfg.flux_path);
  cfg.datum = parse_datum(kv, "datum");
  if (kv.has("partner")) cfg.partner = parse_datum(kv, "partner");
  cfg.grid.x_left = kv.get_double("x_left");
  cfg.grid.x_right = kv.get_double("x_right");
  cfg.grid.n_cells = kv.get_size("n_cells");
  cfg.grid.t_final = kv.get_double("t_final");
  cfg.grid.lambda = 1.0;
  cfg.grid.validate();

  const std::string lambda = kv.get_string("lambda", "auto");
  const double lambda_auto = auto_lambda(cfg.model, cfg.datum, cfg.grid);
  cfg.grid.lambda = lambda == "auto" ? lambda_auto : kv.get_double("lambda");
  cfg.grid.validate();
  {
    const StateSnapshot u0 = project_initial_data(cfg.datum, cfg.grid, cfg.model);
    check_cfl(cfg.model, cfg.grid, invariant_region(cfg.model, u0, cfg.grid).bound);
  }

  cfg.output_times = kv.get_list("output_times", {});
  if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end())) {
    throw ConfigError(kv.source() + ": output_times must be sorted");
  }
  for (double t : cfg.output_times) {
    if (t < 0.0 || t > cfg.grid.t_final) {
      throw ConfigError(kv.source() + ": output time " + std::to_string(t) + " outside [0, t_final]");
    }
  }
  cfg.output_every = kv.get_size("output_every", 0);

  auto& d = cfg.diagnostics;
  d.entropy_alpha_count = kv.get_size("entropy_alpha_count", 5);
  d.entropy = d.entropy_alpha_count > 0;
  d.track_tv = kv.get_bool("track_tv", true);
  d.z_increment = kv.get_bool("z_increment", true);
  d.monotonicity_samples = kv.get_size("monotonicity_samples", 0);
  if (kv.has("output_dir")) cfg.output_dir = resolve_relative(kv, kv.get_string("output_dir"));
  kv.reject_unused();
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  return parse_run_config(KeyValueFile::load(path));
}

// Study config
// ------------
//   flux, x_left, x_right, t_final, datum...   (as for run)
//   base_cells = 200, n_refinements = 3, reference_factor = 16
//   error_region = lo hi                       (default: middle 80% of the domain)
//   lambda = auto | <ratio>
//   output_dir = <directory, relative to this file>   (optional)
struct StudyFile {
  std::string flux_path;
  StudyConfig study;
  std::string output_dir;
};

inline StudyFile parse_study_config(const KeyValueFile& kv) {
  const std::string flux_path = resolve_relative(kv, kv.get_string("flux"));
  StudyFile f{flux_path, StudyConfig{.model = load_flux(flux_path), .datum = parse_datum(kv, "datum")}, {}};
  auto& s = f.study;
  s.x_left = kv.get_double("x_left");
  s.x_right = kv.get_double("x_right");
  s.t_final = kv.get_double("t_final");
  s.base_cells = kv.get_size("base_cells", 200);
  s.n_refinements = kv.get_size("n_refinements", 3);
  s.reference_factor = kv.get_size("reference_factor", 16);
  const double width = s.x_right - s.x_left;
  const auto region = kv.get_list("error_region", {s.x_left + 0.1 * width, s.x_right - 0.1 * width});
  if (region.size() != 2) throw ConfigError(kv.source() + ": error_region expects `lo hi`");
  s.error_region = {region[0], region[1]};
  const std::string lambda = kv.get_string("lambda", "auto");
  if (lambda != "auto") s.lambda = kv.get_double("lambda");
  if (kv.has("output_dir")) f.output_dir = resolve_relative(kv, kv.get_string("output_dir"));
  kv.reject_unused();
  s.validate();
  return f;
}

inline StudyFile load_study_config(const std::string& path) {
  return parse_study_config(KeyValueFile::load(path));
}

}  // namespace bvgodunov
