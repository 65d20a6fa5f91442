// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include <fmt/format.h>
#include "json.hpp"

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

std::vector<DatasetSpec> load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw mlkit::DataError(fmt::format("cannot open dataset catalog {}", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw mlkit::DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
  std::vector<DatasetSpec> out;
  try {
    for (const auto& d : doc.at("datasets")) {
      DatasetSpec s;
      s.name = d.at("name").get<std::string>();
      s.file = d.at("file").get<std::string>();
      if (s.file.is_relative()) s.file = path.parent_path() / s.file;
      s.csv.header = d.value("header", true);
      s.csv.label_column = d.value("label_column", -1);
      s.csv.drop_columns = d.value("drop_columns", std::vector<std::string>{});
      s.seed = d.value("seed", std::uint64_t{1});
      s.provenance = d.value("provenance", std::string{});
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw mlkit::DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return out;
}

const DatasetSpec& find_dataset(const std::vector<DatasetSpec>& catalog, std::string_view name) {
  for (const auto& d : catalog) {
    if (d.name == name) return d;
  }
  throw mlkit::DataError(fmt::format("dataset '{}' is not in the catalog", name));
}

PreparedData prepare(const DatasetSpec& spec, double test_fraction) {
  PreparedData p;
  p.data = mlkit::load_csv(spec.file, spec.csv);
  p.data.name = spec.name;
  p.split = mlkit::split_train_test(p.data.size(), test_fraction, spec.seed);
  const auto raw_train = mlkit::select_rows(p.data.features, p.split.train);
  const auto raw_test = mlkit::select_rows(p.data.features, p.split.test);
  p.norm = mlkit::Normalizer::fit(raw_train);
  p.x_train = p.norm.apply(raw_train);
  p.x_test = p.norm.apply(raw_test);
  p.y_train = mlkit::select_labels(p.data.labels, p.split.train);
  p.y_test = mlkit::select_labels(p.data.labels, p.split.test);
  for (const auto& x : p.x_test) p.q_test.push_back(mlkit::quantize_features(x));
  return p;
}

}  // namespace flexsvm::bench
