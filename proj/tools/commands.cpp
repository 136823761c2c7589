#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include <bvgodunov/bvgodunov.hpp>
#include <json.hpp>

namespace bvgodunov::cli {
namespace {

namespace fs = std::filesystem;

fs::path output_dir(const Options& opt, const std::string& configured) {
  fs::path dir = !opt.out.empty() ? fs::path(opt.out) : !configured.empty() ? fs::path(configured) : fs::path(".");
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write `" + path.string() + "`");
  f << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

void print_report(std::ostream& out, const std::string& label, const DiagnosticsReport& r) {
  if (r.passed()) {
    out << label << ": all diagnostics passed (" << r.steps << " steps)\n";
    return;
  }
  out << label << ": " << r.violation_count << " diagnostic violation(s)\n";
  for (const auto& v : r.violations) {
    out << "  " << v.check << " at level " << v.level;
    if (v.cell >= 0) out << ", cell " << v.cell;
    out << ": value " << format_double(v.value) << ", limit " << format_double(v.limit) << "\n";
  }
}

}  // namespace

int cmd_run(const Options& opt, std::ostream& out, std::ostream&) {
  RunConfig cfg = load_run_config(opt.config);
  cfg.diagnostics.seed = opt.seed;
  const fs::path dir = output_dir(opt, cfg.output_dir);

  DiagnosticsCollector collector(cfg.model, cfg.datum, cfg.grid, cfg.diagnostics);
  RunOptions ro;
  ro.output_times = cfg.output_times;
  ro.output_every = cfg.output_every;
  ro.paired_levels = true;
  ro.hooks.push_back(collector.hook());
  const RunResult result = run(cfg.model, cfg.datum, cfg.grid, ro);

  if (cfg.partner) {
    const StateSnapshot v0 = project_initial_data(*cfg.partner, cfg.grid, cfg.model);
    const double M = invariant_region(cfg.model, v0, cfg.grid).bound;
    check_cfl(cfg.model, cfg.grid, M);
    check_support(*cfg.partner, cfg.model, cfg.grid, cfg.model.lipschitz_bound(M));
    collector.set_contraction_history(paired_contraction(cfg.model, cfg.datum, *cfg.partner, cfg.grid));
  }

  write_snapshots_csv((dir / "snapshots.csv").string(), result.snapshots, cfg.grid);
  write_json(dir / "diagnostics.json", to_json(collector.report()));

  const auto& d = cfg.diagnostics;
  std::string meta;
  meta += "# trace written by `run`; check it with `verify --config verify.cfg`\n";
  meta += "trace = snapshots.csv\n";
  meta += "flux = " + fs::absolute(cfg.flux_path).lexically_normal().string() + "\n";
  meta += "x_left = " + format_double(cfg.grid.x_left) + "\n";
  meta += "x_right = " + format_double(cfg.grid.x_right) + "\n";
  meta += "n_cells = " + std::to_string(cfg.grid.n_cells) + "\n";
  meta += "lambda = " + format_double(cfg.grid.lambda) + "\n";
  meta += "entropy_alpha_count = " + std::to_string(d.entropy ? d.entropy_alpha_count : 0) + "\n";
  meta += std::string("z_increment = ") + (d.z_increment ? "true" : "false") + "\n";
  write_file(dir / "verify.cfg", meta);

  print_report(out, "run", collector.report());
  return collector.report().passed() ? exit_ok : exit_violation;
}

int cmd_study(const Options& opt, std::ostream& out, std::ostream&) {
  StudyFile file = load_study_config(opt.config);
  file.study.jobs = opt.jobs;
  const fs::path dir = output_dir(opt, file.output_dir);

  DiagnosticsOptions dopt;
  dopt.seed = opt.seed;
  std::vector<std::unique_ptr<DiagnosticsCollector>> collectors;
  const StudyResult result = refinement_study(file.study, [&](std::size_t, const GridSpec& g) {
    collectors.push_back(std::make_unique<DiagnosticsCollector>(file.study.model, file.study.datum, g, dopt));
    return std::vector<StepHook>{collectors.back()->hook()};
  });

  std::string table = "dx,dt,l1_error,observed_order\n";
  for (const auto& row : result.rows) {
    table += format_double(row.dx) + "," + format_double(row.dt) + "," + format_double(row.l1_error) + ",";
    if (row.observed_order) table += format_double(*row.observed_order);
    table += "\n";
  }
  write_file(dir / "study.csv", table);

  bool diagnostics_pass = true;
  for (std::size_t i = 0; i < collectors.size(); ++i) {
    const auto& r = collectors[i]->report();
    const std::string label = (i + 1 == collectors.size() ? "reference_" : "grid_") + std::to_string(r.n_cells);
    write_json(dir / ("diagnostics_" + label + ".json"), to_json(r));
    print_report(out, label, r);
    diagnostics_pass = diagnostics_pass && r.passed();
  }

  out << "study: lambda " << format_double(result.lambda) << ", final time "
      << format_double(result.final_time) << "\n";
  for (const auto& row : result.rows) {
    out << "  n_cells " << row.n_cells << "  l1_error " << format_double(row.l1_error);
    if (row.observed_order) out << "  order " << format_double(*row.observed_order);
    out << "\n";
  }
  out << "study: errors " << (result.errors_decay ? "decay" : "do NOT decay") << " by the required ratio "
      << format_double(file.study.decay_ratio) << "\n";
  return result.errors_decay && diagnostics_pass ? exit_ok : exit_violation;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  const KeyValueFile kv = KeyValueFile::load(opt.config);
  const std::string trace_path = resolve_relative(kv, kv.get_string("trace"));
  const FluxModel model = load_flux(resolve_relative(kv, kv.get_string("flux")));
  GridSpec grid{kv.get_double("x_left"), kv.get_double("x_right"), kv.get_size("n_cells"),
                kv.get_double("lambda"), 0.0};
  DiagnosticsOptions dopt;
  dopt.seed = opt.seed;
  dopt.entropy_alpha_count = kv.get_size("entropy_alpha_count", 5);
  dopt.entropy = dopt.entropy_alpha_count > 0;
  dopt.z_increment = kv.get_bool("z_increment", true);
  const std::string configured_out = kv.has("output_dir") ? resolve_relative(kv, kv.get_string("output_dir")) : "";
  kv.reject_unused();

  const SnapshotTrace trace = read_snapshots_csv(trace_path);
  const auto& snaps = trace.snapshots;
  grid.t_final = snaps.back().time;
  grid.validate();
  if (snaps.front().size() != grid.n_cells) {
    throw ConfigError(trace_path + ": trace has " + std::to_string(snaps.front().size()) +
                      " cells, metadata says " + std::to_string(grid.n_cells));
  }
  for (std::size_t j = 0; j < grid.n_cells; ++j) {
    if (std::abs(trace.x_centers[j] - grid.center(static_cast<std::ptrdiff_t>(j))) > 1e-9 * grid.dx()) {
      throw ConfigError(trace_path + ": cell " + std::to_string(j) + " is not on the stated uniform grid");
    }
  }

  std::vector<std::size_t> levels;
  for (const auto& s : snaps) {
    const double q = s.time / grid.dt();
    const double level = std::round(q);
    if (std::abs(q - level) > 1e-6) {
      throw ConfigError(trace_path + ": time " + format_double(s.time) + " is not a whole number of steps");
    }
    levels.push_back(static_cast<std::size_t>(level));
  }

  DiagnosticsCollector collector(model, snaps.front(), grid, dopt);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    if (levels[i + 1] != levels[i] + 1) continue;
    collector.observe(snaps[i], snaps[i + 1], levels[i + 1] - levels.front());
    ++pairs;
  }
  if (pairs == 0) {
    err << "verify: " << trace_path << " holds no two consecutive levels\n";
    return exit_config;
  }

  if (!opt.out.empty() || !configured_out.empty()) {
    write_json(output_dir(opt, configured_out) / "verify.json", to_json(collector.report()));
  }
  out << "verify: checked " << pairs << " consecutive level pair(s)\n";
  print_report(out, "verify", collector.report());
  return collector.report().passed() ? exit_ok : exit_violation;
}

int dispatch(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err) {
  try {
    if (command == "run") return cmd_run(opt, out, err);
    if (command == "study") return cmd_study(opt, out, err);
    if (command == "verify") return cmd_verify(opt, out, err);
    err << "unknown command `" << command << "`\n";
    return exit_config;
  } catch (const SupportError& e) {
    err << "support error: " << e.what() << "\n";
    return exit_physics;
  } catch (const CflError& e) {
    err << "CFL error: " << e.what() << "\n";
    return exit_physics;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace bvgodunov::cli
