#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

namespace bvgodunov::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_violation = 1,
  exit_config = 2,
  exit_physics = 3,  // SupportError or CflError
};

struct Options {
  std::string config;
  std::string out;  // empty: the config's output_dir, else the current directory
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

// Each command reports progress on `out` and problems on `err`, and returns an ExitCode.
int cmd_run(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_study(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err);

/// Runs `command` ("run", "study" or "verify") and maps library errors onto exit codes.
int dispatch(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace bvgodunov::cli
