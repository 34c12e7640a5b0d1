// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace levyfrac::cli {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : os_(path, std::ios::trunc), path_(path), width_(header.size()) {
  if (!os_) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::sep() {
  if (col_++) os_ << ',';
}

CsvWriter& CsvWriter::operator<<(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  sep();
  os_ << buf;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  if (s.find_first_of(",\"\n") == std::string::npos) {
    os_ << s;
  } else {
    os_ << '"';
    for (char c : s) os_ << (c == '"' ? "\"\"" : std::string(1, c));
    os_ << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  if (col_ != width_) throw std::logic_error("csv row width mismatch in '" + path_ + "'");
  os_ << '\n';
  col_ = 0;
}

void CsvWriter::close() {
  os_.close();
  if (!os_) throw std::runtime_error("write to '" + path_ + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("'" + path + "' is empty");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) {
    t.header.push_back(cell);
    t.columns[cell];
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    for (std::string cell; std::getline(ls, cell, ','); ++c) {
      if (c >= t.header.size()) throw std::runtime_error("'" + path + "': row wider than header");
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      t.columns[t.header[c]].push_back(end == cell.c_str() ? std::numeric_limits<double>::quiet_NaN() : v);
    }
    if (c != t.header.size()) throw std::runtime_error("'" + path + "': short row");
    ++t.rows;
  }
  return t;
}

}  // namespace levyfrac::cli
