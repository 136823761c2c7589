#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Godunov solver for conservation laws with discontinuous unimodal flux"};
  app.require_subcommand(1);
  bvgodunov::cli::Options opt;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "seed for randomized diagnostics");
    return sub;
  };
  add("run", "march one problem and write snapshots.csv, diagnostics.json and verify.cfg");
  add("study", "grid refinement study; writes study.csv and per-grid diagnostics")
      ->add_option("--jobs", opt.jobs, "parallel grid runs")
      ->check(CLI::PositiveNumber);
  add("verify", "recheck a snapshot trace described by a verify.cfg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bvgodunov::cli::exit_config;
  }
  return bvgodunov::cli::dispatch(app.get_subcommands().front()->get_name(), opt, std::cout, std::cerr);
}
