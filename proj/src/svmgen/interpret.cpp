// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <fmt/format.h>

#include "flexsvm/svmgen.hpp"

namespace flexsvm::svmgen {

namespace {

int vote(std::span<const std::uint32_t> words, std::size_t m, bool (*second_wins)(std::uint32_t)) {
  const auto pairs = mlkit::ovo_pairs(m);
  if (words.size() != pairs.size()) {
    throw GenError(fmt::format("OvO with {} classes needs {} results, got {}", m, pairs.size(),
                               words.size()));
  }
  std::vector<int> votes(m, 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ++votes[second_wins(words[i]) ? pairs[i].second : pairs[i].first];
  }
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace

int interpret(std::span<const std::uint32_t> results, mlkit::Scheme scheme, std::size_t m) {
  if (scheme == mlkit::Scheme::OvR) {
    if (results.empty()) throw GenError("OvR needs at least one result word");
    return accel::PackedResult{results.back()}.class_id();
  }
  return vote(results, m, [](std::uint32_t w) { return accel::PackedResult{w}.negative(); });
}

int interpret_baseline(std::span<const std::uint32_t> outputs, mlkit::Scheme scheme,
                       std::size_t m) {
  if (scheme == mlkit::Scheme::OvR) {
    if (outputs.size() != 1) throw GenError("OvR baseline stores exactly one class ID");
    return static_cast<int>(outputs.front());
  }
  return vote(outputs, m, [](std::uint32_t w) { return w != 0; });
}

}  // namespace flexsvm::svmgen
