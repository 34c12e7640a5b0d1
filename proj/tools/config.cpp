// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <CLI11.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace levyfrac::cli {
namespace {

Config parse(std::istream& is, Config cfg) {
  CLI::ConfigTOML toml;
  std::vector<CLI::ConfigItem> items;
  try {
    items = toml.from_config(is);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    const std::string key = it.fullname();
    if (cfg.has(key)) throw ConfigError(key + ": duplicate field");
    std::string joined;
    for (const auto& s : it.inputs) joined += (joined.empty() ? "" : "\x1f") + s;
    cfg.set(key, joined);
  }
  return cfg;
}

std::vector<std::string> split_inputs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\x1f') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

Config Config::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  return parse(is, Config{});
}

Config Config::from_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is, Config{});
}

const std::vector<std::string>* Config::find(const std::string& key) {
  used_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  // Values are stored joined; split lazily.
  static thread_local std::vector<std::string> parts;
  parts = split_inputs(it->second.front());
  return &parts;
}

std::string Config::str(const std::string& key) {
  const auto* v = find(key);
  if (!v) throw ConfigError(key + ": required field is missing");
  if (v->size() != 1) throw ConfigError(key + ": expected a single value");
  record(key, quote(v->front()));
  return v->front();
}

std::string Config::str(const std::string& key, const std::string& fallback) {
  if (!has(key)) {
    used_[key] = true;
    record(key, quote(fallback));
    return fallback;
  }
  return str(key);
}

double Config::num(const std::string& key) {
  const auto* v = find(key);
  if (!v) throw ConfigError(key + ": required field is missing");
  if (v->size() != 1) throw ConfigError(key + ": expected a single number");
  const double x = to_double(key, v->front());
  record(key, format_number(x));
  return x;
}

double Config::num(const std::string& key, double fallback) {
  if (!has(key)) {
    used_[key] = true;
    record(key, format_number(fallback));
    return fallback;
  }
  return num(key);
}

std::uint64_t Config::u64(const std::string& key) {
  const auto* v = find(key);
  if (!v) throw ConfigError(key + ": required field is missing");
  if (v->size() != 1) throw ConfigError(key + ": expected a single integer");
  const std::string& s = v->front();
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  record(key, std::to_string(x));
  return x;
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    used_[key] = true;
    record(key, std::to_string(fallback));
    return fallback;
  }
  return u64(key);
}

bool Config::flag(const std::string& key, bool fallback) {
  if (!has(key)) {
    used_[key] = true;
    record(key, fallback ? "true" : "false");
    return fallback;
  }
  const auto* v = find(key);
  if (v->size() != 1 || (v->front() != "true" && v->front() != "false"))
    throw ConfigError(key + ": expected true or false");
  record(key, v->front());
  return v->front() == "true";
}

std::vector<double> Config::list(const std::string& key) {
  const auto* v = find(key);
  if (!v) throw ConfigError(key + ": required field is missing");
  std::vector<double> out;
  std::string lit = "[";
  for (const auto& s : *v) {
    if (s.empty() && v->size() == 1) break;  // empty array
    out.push_back(to_double(key, s));
    lit += (out.size() > 1 ? ", " : "") + format_number(out.back());
  }
  record(key, lit + "]");
  return out;
}

std::vector<double> Config::list(const std::string& key, const std::vector<double>& fallback) {
  if (!has(key)) {
    used_[key] = true;
    std::string lit = "[";
    for (std::size_t i = 0; i < fallback.size(); ++i) lit += (i ? ", " : "") + format_number(fallback[i]);
    record(key, lit + "]");
    return fallback;
  }
  return list(key);
}

std::vector<std::string> Config::keys_in(const std::string& section) const {
  std::vector<std::string> out;
  const std::string prefix = section + ".";
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) == 0 && k.find('.', prefix.size()) == std::string::npos) out.push_back(k.substr(prefix.size()));
  }
  return out;
}

void Config::accept(const std::string& prefix) { accepted_.push_back(prefix + "."); }

void Config::check_unused() const {
  for (const auto& [k, v] : values_) {
    if (used_.count(k)) continue;
    bool ok = false;
    for (const auto& p : accepted_) ok = ok || k.rfind(p, 0) == 0;
    if (!ok) throw ConfigError(k + ": unknown field for this command");
  }
}

std::string Config::manifest(const std::map<std::string, std::string>& run_info) const {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  for (const auto& [k, lit] : resolved_) {
    const auto dot = k.rfind('.');
    const std::string sec = dot == std::string::npos ? "" : k.substr(0, dot);
    sections[sec].emplace_back(k.substr(dot == std::string::npos ? 0 : dot + 1), lit);
  }
  std::ostringstream os;
  os << "# levyfrac run manifest; replay with: levyfrac --config <this file>\n";
  for (const auto& [sec, entries] : sections) {
    if (!sec.empty()) os << "\n[" << sec << "]\n";
    for (const auto& [k, lit] : entries) os << k << " = " << lit << "\n";
  }
  os << "\n[run]\n";
  for (const auto& [k, v] : run_info) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace levyfrac::cli
