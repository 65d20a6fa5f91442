// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "flexsvm/mlkit.hpp"

namespace flexsvm::testing {

inline std::filesystem::path data_dir() { return FLEXSVM_DATA_DIR; }
inline std::filesystem::path catalog_path() { return data_dir() / "datasets.json"; }
inline std::filesystem::path reference_path() { return data_dir() / "reference" / "table1.csv"; }

inline std::int32_t random_weight(mlkit::Rng& rng, unsigned bits) {
  const std::int64_t q = (std::int64_t{1} << (bits - 1)) - 1;
  return static_cast<std::int32_t>(static_cast<std::int64_t>(rng.below(2 * q + 1)) - q);
}

inline std::vector<std::uint8_t> random_sample(mlkit::Rng& rng, std::size_t d) {
  std::vector<std::uint8_t> x(d);
  for (auto& v : x) v = static_cast<std::uint8_t>(rng.below(16));
  return x;
}

/// Random integer model with weights and biases in the symmetric range.
inline mlkit::QuantizedModel random_model(mlkit::Rng& rng, mlkit::Scheme scheme, unsigned bits,
                                          std::size_t m, std::size_t d) {
  mlkit::QuantizedModel q;
  q.scheme = scheme;
  q.bits = bits;
  q.num_classes = m;
  q.dims = d;
  q.scale = 1.0;
  if (scheme == mlkit::Scheme::OvR) {
    for (std::size_t k = 0; k < m; ++k) q.classifiers.push_back({{}, 0, static_cast<int>(k), -1});
  } else {
    for (auto [a, b] : mlkit::ovo_pairs(m)) q.classifiers.push_back({{}, 0, a, b});
  }
  for (auto& c : q.classifiers) {
    c.w.resize(d);
    for (auto& w : c.w) w = random_weight(rng, bits);
    c.b = random_weight(rng, bits);
  }
  return q;
}

}  // namespace flexsvm::testing
