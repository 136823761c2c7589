#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace bvgodunov {

inline constexpr const char* snapshot_csv_header = "time,cell_index,x_center,u";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per (snapshot, cell), time-major.
inline void write_snapshots_csv(std::ostream& out, const std::vector<StateSnapshot>& snapshots,
                                const GridSpec& grid) {
  out << snapshot_csv_header << '\n';
  for (const auto& s : snapshots) {
    require_grid(s, grid, "write_snapshots_csv");
    const std::string t = format_double(s.time);
    for (std::size_t j = 0; j < s.size(); ++j) {
      out << t << ',' << j << ',' << format_double(grid.center(static_cast<std::ptrdiff_t>(j))) << ','
          << format_double(s[j]) << '\n';
    }
  }
}

inline void write_snapshots_csv(const std::string& path, const std::vector<StateSnapshot>& snapshots,
                                const GridSpec& grid) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write `" + path + "`");
  write_snapshots_csv(out, snapshots, grid);
}

struct SnapshotTrace {
  std::vector<StateSnapshot> snapshots;
  std::vector<double> x_centers;  // as listed for the first snapshot
};

/// Reads a snapshot trace. Snapshots must list every cell index 0..n-1 in order,
/// all have the same cell count, and repeat the same cell centers.
inline SnapshotTrace read_snapshots_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != snapshot_csv_header) {
    throw ConfigError(source + ": missing header `" + snapshot_csv_header + "`");
  }
  SnapshotTrace trace;
  auto& out = trace.snapshots;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw ConfigError(where + "expected 4 fields");
    double t = 0.0, x = 0.0, u = 0.0;
    std::size_t j = 0;
    try {
      std::size_t pos = 0;
      t = std::stod(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("time");
      j = std::stoul(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("cell_index");
      x = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("x_center");
      u = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument("u");
    } catch (const std::exception&) {
      throw ConfigError(where + "malformed number");
    }
    if (!std::isfinite(t) || !std::isfinite(u)) throw ConfigError(where + "non-finite value");
    if (j == 0) {
      if (!out.empty() && !(t > out.back().time)) throw ConfigError(where + "snapshot times must increase");
      out.push_back(StateSnapshot{t, {}});
    }
    if (out.empty() || out.back().time != t || j != out.back().size()) {
      throw ConfigError(where + "cells out of order");
    }
    if (out.size() == 1) {
      trace.x_centers.push_back(x);
    } else if (j >= trace.x_centers.size() || trace.x_centers[j] != x) {
      throw ConfigError(where + "cell center differs from the first snapshot");
    }
    out.back().values.push_back(u);
  }
  if (out.empty()) throw ConfigError(source + ": no snapshots");
  for (const auto& s : out) {
    if (s.size() != out.front().size()) throw ConfigError(source + ": snapshots differ in cell count");
  }
  return trace;
}

inline SnapshotTrace read_snapshots_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open `" + path + "`");
  return read_snapshots_csv(in, path);
}

}  // namespace bvgodunov
