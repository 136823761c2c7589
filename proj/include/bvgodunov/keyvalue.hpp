#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace bvgodunov {

/// Flat `key = value` document. `#` starts a comment; blank lines are ignored;
/// list values are separated by whitespace or commas. Keys may appear once.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string source = "<string>") {
    KeyValueFile kv;
    kv.source_ = std::move(source);
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError(kv.where(line_no) + "expected `key = value`");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw ConfigError(kv.where(line_no) + "empty key");
      if (!kv.entries_.emplace(key, value).second) {
        throw ConfigError(kv.where(line_no) + "duplicate key `" + key + "`");
      }
    }
    return kv;
  }

  static KeyValueFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open `" + path + "`");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  const std::string& source() const { return source_; }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": missing key `" + key + "`");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  std::size_t get_size(const std::string& key) const {
    const std::string s = get_string(key);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(source_ + ": `" + key + "` must be a nonnegative integer, got `" + s + "`");
    }
    return v;
  }
  std::size_t get_size(const std::string& key, std::size_t fallback) const {
    return has(key) ? get_size(key) : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key);
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw ConfigError(source_ + ": `" + key + "` must be a boolean, got `" + s + "`");
  }

  std::vector<double> get_list(const std::string& key) const {
    std::string s = get_string(key);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(to_double(key, tok));
    return out;
  }
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? get_list(key) : fallback;
  }

  /// Throws for any key that no getter has asked for.
  void reject_unused() const {
    for (const auto& [k, v] : entries_) {
      if (!used_.count(k)) throw ConfigError(source_ + ": unknown key `" + k + "`");
    }
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  double to_double(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const char* first = s.data() + (s.starts_with('+') ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError(source_ + ": `" + key + "` must be a finite number, got `" + s + "`");
    }
    return v;
  }

  std::string where(std::size_t line) const { return source_ + ":" + std::to_string(line) + ": "; }

  std::string source_;
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace bvgodunov
