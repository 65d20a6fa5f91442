// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

namespace {

constexpr double kCycleHalfStep = 0.005;  // cycle cells carry two decimals
constexpr double kReportHalfStep = 0.05;  // speedup / reduction carry one

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    const auto a = f.find_first_not_of(" \t\r");
    const auto b = f.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : f.substr(a, b - a + 1));
  }
  return out;
}

double number(const std::string& s, std::size_t line) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw mlkit::DataError(fmt::format("reference table line {}: '{}' is not a number", line, s));
  }
  return v;
}

}  // namespace

const ReferenceRow* ReferenceTable::find(const ConfigKey& key) const {
  const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.key == key; });
  return it == rows.end() ? nullptr : &*it;
}

ReferenceTable parse_reference(std::string_view text) {
  static const std::vector<std::string> kColumns{
      "dataset", "scheme", "bits", "accuracy", "base_mcycles", "base_mj",
      "accel_mcycles", "accel_mj", "speedup", "energy_reduction"};
  ReferenceTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    const auto f = fields(line);
    if (!header) {
      if (f != kColumns) throw mlkit::DataError(fmt::format("reference table line {}: unexpected header", no));
      header = true;
      continue;
    }
    if (f.size() != kColumns.size()) {
      throw mlkit::DataError(fmt::format("reference table line {}: expected {} fields", no, kColumns.size()));
    }
    ReferenceRow r;
    r.key.dataset = f[0];
    r.key.scheme = mlkit::scheme_from_string(f[1]);
    r.key.bits = static_cast<unsigned>(number(f[2], no));
    r.accuracy = number(f[3], no);
    r.base_mcycles = number(f[4], no);
    r.base_mj = number(f[5], no);
    r.accel_mcycles = number(f[6], no);
    r.accel_mj = number(f[7], no);
    r.speedup = number(f[8], no);
    r.energy_reduction = number(f[9], no);
    if (t.find(r.key) != nullptr) {
      throw mlkit::DataError(fmt::format("reference table line {}: duplicate {}", no, r.key.str()));
    }
    t.rows.push_back(std::move(r));
  }
  if (!header) throw mlkit::DataError("reference table has no header");
  return t;
}

ReferenceTable load_reference(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw mlkit::DataError(fmt::format("cannot open reference table {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_reference(ss.str());
}

std::vector<ConsistencyIssue> check_consistency(const ReferenceTable& table) {
  std::vector<ConsistencyIssue> out;
  for (const auto& r : table.rows) {
    const double b_lo = r.base_mcycles - kCycleHalfStep;
    const double b_hi = r.base_mcycles + kCycleHalfStep;
    const double a_lo = r.accel_mcycles - kCycleHalfStep;
    const double a_hi = r.accel_mcycles + kCycleHalfStep;
    const double s_lo = b_lo / a_hi;
    const double s_hi = b_hi / a_lo;
    if (r.speedup < s_lo - kReportHalfStep || r.speedup > s_hi + kReportHalfStep) {
      out.push_back({r.key, "speedup", r.speedup, s_lo, s_hi});
    }
    const double e_lo = 100.0 * (1.0 - a_hi / b_lo);
    const double e_hi = 100.0 * (1.0 - a_lo / b_hi);
    if (r.energy_reduction < e_lo - kReportHalfStep || r.energy_reduction > e_hi + kReportHalfStep) {
      out.push_back({r.key, "energy_reduction", r.energy_reduction, e_lo, e_hi});
    }
  }
  return out;
}

}  // namespace flexsvm::bench
