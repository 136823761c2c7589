#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "datum.hpp"
#include "errors.hpp"
#include "flux_model.hpp"
#include "godunov.hpp"
#include "grid.hpp"

namespace bvgodunov {

/// Conservative restriction: each coarse cell is the mean of its `factor` children.
inline StateSnapshot restrict(const StateSnapshot& fine, std::size_t factor) {
  if (factor == 0 || fine.size() % factor != 0) {
    throw AlignmentError("restrict: " + std::to_string(fine.size()) + " cells not divisible by " +
                         std::to_string(factor));
  }
  StateSnapshot coarse;
  coarse.time = fine.time;
  coarse.values.resize(fine.size() / factor);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < factor; ++k) s += fine[i * factor + k];
    coarse.values[i] = s / static_cast<double>(factor);
  }
  return coarse;
}

/// Closed sub-interval of the domain; cells whose centers lie inside it count.
struct Region {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// sum over cells in `region` of |a_j - b_j| dx.
inline double l1_error(const StateSnapshot& a, const StateSnapshot& b, const GridSpec& grid,
                       const Region& region = {}) {
  require_same_size(a, b, "l1_error");
  require_grid(a, grid, "l1_error");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double x = grid.center(static_cast<std::ptrdiff_t>(j));
    if (x >= region.lo && x <= region.hi) s += std::abs(a[j] - b[j]);
  }
  return s * grid.dx();
}

struct StudyConfig {
  FluxModel model;
  InitialDatum datum;
  double x_left = -1.0;
  double x_right = 1.0;
  double t_final = 0.0;
  std::size_t base_cells = 200;
  std::size_t n_refinements = 3;
  std::size_t reference_factor = 16;
  Region error_region{};
  std::optional<double> lambda{};  // fixed ratio; CFL for the worst grid when unset
  double decay_ratio = 0.8;      // required e(dx/2) / e(dx)
  double error_floor = 1e-10;    // errors at or below count as converged
  std::size_t jobs = 1;

  void validate() const {
    if (base_cells < 16) throw ConfigError("study: base_cells must be at least 16");
    if (n_refinements < 2) throw ConfigError("study: n_refinements must be at least 2");
    if (reference_factor < 4 || (reference_factor & (reference_factor - 1)) != 0) {
      throw ConfigError("study: reference_factor must be a power of two >= 4");
    }
    if (!(x_right > x_left)) throw ConfigError("study: need x_left < x_right");
    if (!(error_region.lo > x_left && error_region.hi < x_right && error_region.lo < error_region.hi)) {
      throw ConfigError("study: error_region must lie strictly inside the domain");
    }
    if (!(t_final >= 0.0)) throw ConfigError("study: t_final must be nonnegative");
  }
};

struct StudyRow {
  std::size_t n_cells = 0;
  double dx = 0.0;
  double dt = 0.0;
  double l1_error = 0.0;
  std::optional<double> observed_order;  // log2(e_k / e_{k+1}); empty for the last row or at the floor
};

struct StudyResult {
  double lambda = 0.0;
  double final_time = 0.0;  // common final level time
  std::vector<StudyRow> rows;
  std::vector<RunResult> runs;  // study grids, coarse to fine, then the reference
  double reference_self_error = 0.0;
  bool errors_decay = false;  // every consecutive pair satisfies the decay ratio

  const RunResult& reference() const { return runs.back(); }
};

namespace detail {

/// Runs `tasks` on at most `jobs` threads; results keep their index order.
inline void run_parallel(std::vector<std::function<void()>>& tasks, std::size_t jobs) {
  jobs = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
  if (jobs == 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        try {
          tasks[i]();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Nested-grid study against a same-scheme reference at reference_factor times the finest grid.
///
/// lambda is held fixed across all grids and the final time is snapped to a
/// whole number of coarse steps so every grid lands on the same level time.
/// `extra_hooks`, when given, is called once per grid (index order) to attach step hooks.
inline StudyResult refinement_study(
    const StudyConfig& cfg,
    const std::function<std::vector<StepHook>(std::size_t index, const GridSpec&)>& extra_hooks = {}) {
  cfg.validate();
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k <= cfg.n_refinements; ++k) cells.push_back(cfg.base_cells << k);
  cells.push_back(cells.back() * cfg.reference_factor);

  const auto grid_for = [&](std::size_t n, double lambda, double t) {
    GridSpec g{cfg.x_left, cfg.x_right, n, lambda, t};
    return g;
  };

  double lambda = 0.0;
  if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else {
    lambda = std::numeric_limits<double>::infinity();
    for (std::size_t n : cells) {
      lambda = std::min(lambda, auto_lambda(cfg.model, cfg.datum, grid_for(n, 1.0, cfg.t_final)));
    }
  }

  StudyResult out;
  out.lambda = lambda;
  const GridSpec coarse = grid_for(cells.front(), lambda, cfg.t_final);
  const auto coarse_steps = static_cast<double>(coarse.level_count());
  out.final_time = coarse_steps * coarse.dt();

  out.runs.resize(cells.size());
  std::vector<std::function<void()>> tasks;
  std::vector<std::vector<StepHook>> hooks(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const GridSpec g = grid_for(cells[i], lambda, out.final_time);
    if (extra_hooks) hooks[i] = extra_hooks(i, g);
    tasks.emplace_back([&, i, g] {
      RunOptions opt;
      opt.hooks = hooks[i];
      out.runs[i] = run(cfg.model, cfg.datum, g, opt);
    });
  }
  detail::run_parallel(tasks, cfg.jobs);

  for (std::size_t i = 0; i + 1 < out.runs.size(); ++i) {
    if (out.runs[i].steps != static_cast<std::size_t>(coarse_steps) << i) {
      throw AlignmentError("refinement_study: grids do not share the final level time");
    }
  }

  const RunResult& ref = out.runs.back();
  const std::size_t study_grids = cells.size() - 1;
  for (std::size_t i = 0; i < study_grids; ++i) {
    const RunResult& r = out.runs[i];
    const StateSnapshot restricted = restrict(ref.snapshots.back(), cells.back() / cells[i]);
    StudyRow row;
    row.n_cells = cells[i];
    row.dx = r.grid.dx();
    row.dt = r.grid.dt();
    row.l1_error = l1_error(r.snapshots.back(), restricted, r.grid, cfg.error_region);
    out.rows.push_back(row);
  }
  out.errors_decay = true;
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const double e0 = out.rows[i].l1_error, e1 = out.rows[i + 1].l1_error;
    if (e0 > cfg.error_floor && e1 > 0.0) out.rows[i].observed_order = std::log2(e0 / e1);
    const bool floor_reached = e0 <= cfg.error_floor && e1 <= cfg.error_floor;
    if (!floor_reached && !(e1 <= cfg.decay_ratio * e0)) out.errors_decay = false;
  }
  out.reference_self_error = out.rows.back().l1_error;
  return out;
}

}  // namespace bvgodunov
