// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "flexsvm/mlkit.hpp"

namespace flexsvm::mlkit {

std::string_view to_string(Scheme s) { return s == Scheme::OvR ? "ovr" : "ovo"; }

Scheme scheme_from_string(std::string_view s) {
  if (s == "ovr" || s == "OvR" || s == "OVR") return Scheme::OvR;
  if (s == "ovo" || s == "OvO" || s == "OVO") return Scheme::OvO;
  throw std::invalid_argument(fmt::format("unknown scheme '{}' (expected ovr or ovo)", s));
}

std::size_t classifier_count(Scheme s, std::size_t m) {
  return s == Scheme::OvR ? m : m * (m - 1) / 2;
}

std::vector<std::pair<int, int>> ovo_pairs(std::size_t m) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < static_cast<int>(m); ++a) {
    for (int b = a + 1; b < static_cast<int>(m); ++b) out.emplace_back(a, b);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\"";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

std::vector<std::string> split_line(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::size_t resolve_column(std::string_view spec, const std::vector<std::string>& header,
                           std::size_t ncols) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == spec) return i;
  }
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
  if (ec == std::errc{} && ptr == spec.data() + spec.size() && idx < ncols) return idx;
  throw DataError(fmt::format("unknown column '{}'", spec));
}

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& opt, std::string name) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    rows.push_back(split_line(line, opt.delimiter));
  }
  if (rows.empty()) throw DataError(fmt::format("{}: no rows", name));

  std::vector<std::string> header;
  if (opt.header) {
    header = rows.front();
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw DataError(fmt::format("{}: header but no data rows", name));
  const std::size_t ncols = rows.front().size();
  if (header.empty()) {
    for (std::size_t i = 0; i < ncols; ++i) header.push_back(fmt::format("c{}", i));
  }
  if (header.size() != ncols) {
    throw DataError(fmt::format("{}: header has {} columns, data has {}", name, header.size(),
                                ncols));
  }

  const std::size_t label_col = opt.label_column < 0
                                    ? ncols - static_cast<std::size_t>(-opt.label_column)
                                    : static_cast<std::size_t>(opt.label_column);
  if (label_col >= ncols) throw DataError(fmt::format("{}: label column out of range", name));

  std::vector<bool> keep(ncols, true);
  keep[label_col] = false;
  for (const auto& d : opt.drop_columns) keep[resolve_column(d, header, ncols)] = false;

  Dataset ds;
  ds.name = std::move(name);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (keep[c]) ds.feature_names.push_back(header[c]);
  }

  std::vector<std::string> raw_labels;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != ncols) {
      throw DataError(fmt::format("{}: row {} has {} fields, expected {}", ds.name, r + 1,
                                  row.size(), ncols));
    }
    std::vector<double> x;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!keep[c]) continue;
      const auto v = to_number(row[c]);
      if (!v) {
        throw DataError(fmt::format("{}: row {} column '{}' is not numeric: '{}'", ds.name, r + 1,
                                    header[c], row[c]));
      }
      x.push_back(*v);
    }
    ds.features.push_back(std::move(x));
    raw_labels.push_back(row[label_col]);
  }

  std::vector<std::string> names = raw_labels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (std::all_of(names.begin(), names.end(), [](const auto& s) { return to_number(s).has_value(); })) {
    std::sort(names.begin(), names.end(),
              [](const auto& a, const auto& b) { return *to_number(a) < *to_number(b); });
  }
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < names.size(); ++i) ids[names[i]] = static_cast<int>(i);
  for (const auto& l : raw_labels) ds.labels.push_back(ids.at(l));
  ds.class_names = std::move(names);
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open dataset {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), options, path.stem().string());
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

Split split_train_test(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (n < 2) throw DataError("need at least two samples to split");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must be in (0, 1)");
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
  Split s;
  s.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  return s;
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> idx) {
  Matrix out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(m.at(i));
  return out;
}

std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

Normalizer::Normalizer(std::vector<double> lo, std::vector<double> hi)
    : min_(std::move(lo)), max_(std::move(hi)) {
  if (min_.size() != max_.size()) throw DataError("normalizer min/max size mismatch");
}

Normalizer Normalizer::fit(const Matrix& train) {
  if (train.empty()) throw DataError("cannot fit a normalizer on an empty dataset");
  std::vector<double> lo = train.front();
  std::vector<double> hi = train.front();
  for (const auto& row : train) {
    if (row.size() != lo.size()) throw DataError("ragged feature matrix");
    for (std::size_t j = 0; j < row.size(); ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  return {std::move(lo), std::move(hi)};
}

std::vector<double> Normalizer::apply(std::span<const double> row) const {
  if (row.size() != min_.size()) {
    throw DataError(fmt::format("sample has {} features, normalizer expects {}", row.size(),
                                min_.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double range = max_[j] - min_[j];
    out[j] = range > 0.0 ? std::clamp((row[j] - min_[j]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

Matrix Normalizer::apply(const Matrix& rows) const {
  Matrix out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

}  // namespace flexsvm::mlkit
