// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyfrac::cli {

/// Bad or missing configuration; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat view of a TOML config: keys are dotted paths ("operator.beta").
/// Every lookup records the resolved value so the run can be written back as a manifest.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = {value}; }

  std::string str(const std::string& key);
  std::string str(const std::string& key, const std::string& fallback);
  double num(const std::string& key);
  double num(const std::string& key, double fallback);
  std::uint64_t u64(const std::string& key);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> list(const std::string& key);
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback);

  /// Keys directly below `section` (one level).
  std::vector<std::string> keys_in(const std::string& section) const;
  /// Marks a whole section as accepted without reading it.
  void accept(const std::string& prefix);
  /// Throws on keys that were never read.
  void check_unused() const;

  /// TOML text of every resolved value, grouped by section.
  std::string manifest(const std::map<std::string, std::string>& run_info) const;

 private:
  std::map<std::string, std::vector<std::string>> values_;
  std::map<std::string, std::string> resolved_;  // key -> TOML literal
  std::vector<std::string> accepted_;
  std::map<std::string, bool> used_;

  const std::vector<std::string>* find(const std::string& key);
  void record(const std::string& key, const std::string& literal) { resolved_[key] = literal; }
};

std::string format_number(double v);
std::string quote(const std::string& s);

}  // namespace levyfrac::cli
