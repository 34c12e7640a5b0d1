// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace levyfrac::cli {

/// CSV output with round-trip number formatting.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(const std::string& s);
  void end_row();
  void close();

 private:
  std::ofstream os_;
  std::string path_;
  std::size_t width_;
  std::size_t col_ = 0;
  void sep();
};

/// Columns keyed by header name.
struct CsvTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
  std::size_t rows = 0;
  bool has(const std::string& name) const { return columns.count(name) != 0; }
};

CsvTable read_csv(const std::string& path);

}  // namespace levyfrac::cli
