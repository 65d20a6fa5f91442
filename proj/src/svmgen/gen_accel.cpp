// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "flexsvm/svmgen.hpp"

namespace flexsvm::svmgen {

using isa::AccelOpId;
using isa::Op;

namespace {

constexpr unsigned kFeat = 5;
constexpr unsigned kWeight = 6;
constexpr unsigned kResult = 7;
constexpr unsigned kTmp = 8;
constexpr unsigned kMask = 29;

}  // namespace

void check_sample(const mlkit::QuantizedModel& model, std::span<const std::uint8_t> x) {
  if (model.dims == 0) throw GenError("model has no features");
  if (x.size() != model.dims) {
    throw GenError(fmt::format("sample has {} features, model expects {}", x.size(), model.dims));
  }
  if (model.classifiers.size() != mlkit::classifier_count(model.scheme, model.num_classes)) {
    throw GenError("classifier count does not match the scheme");
  }
  if (model.classifiers.size() > accel::kMaxClassifiers) throw GenError("too many classifiers");
}

std::size_t accel_custom_op_count(const mlkit::QuantizedModel& model) {
  return 1 + model.classifiers.size() * (mlkit::words_per_classifier(model.dims, model.mode()) + 1);
}

coresim::Program gen_accel(const mlkit::QuantizedModel& model, std::span<const std::uint8_t> x,
                           Layout* layout) {
  check_sample(model, x);
  const accel::WeightMode mode = model.mode();
  const std::size_t f = mlkit::words_per_classifier(model.dims, mode);
  const std::size_t c = model.classifiers.size();
  const bool ovr = model.scheme == mlkit::Scheme::OvR;

  Layout lay;
  lay.feature_base = 0;
  lay.weight_base = static_cast<std::uint32_t>(4 * f);
  lay.output_base = static_cast<std::uint32_t>(4 * (f + c * f));
  lay.outputs = ovr ? 1 : c;

  coresim::Program p;
  p.data = mlkit::pack_features(x, mode);
  for (const auto& qc : model.classifiers) {
    const auto w = mlkit::pack_weights(qc, mode);
    p.data.insert(p.data.end(), w.begin(), w.end());
  }
  p.data.resize(p.data.size() + lay.outputs, 0);

  Emitter e;
  if (ovr) e.li(kMask, 0xFF);
  e.emit(isa::accel(AccelOpId::CreateEnv, 0, 0, 0));
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t j = 0; j < f; ++j) {
      e.load_word(kFeat, lay.feature_base + static_cast<std::uint32_t>(4 * j));
      e.load_word(kWeight, lay.weight_base + static_cast<std::uint32_t>(4 * (k * f + j)));
      e.emit(isa::accel(accel::calc_op(mode), 0, kFeat, kWeight));
    }
    e.emit(isa::accel(accel::res_op(mode), kResult, 0, 0));
    if (!ovr) e.store_word(kResult, lay.output_base + static_cast<std::uint32_t>(4 * k));
  }
  if (ovr) {
    e.emit(isa::r_type(Op::And, kTmp, kResult, kMask));
    e.store_word(kTmp, lay.output_base);
  }
  p.text = e.finish();
  for (std::size_t i = 0; i < lay.outputs; ++i) {
    p.output_addrs.push_back(lay.output_base + static_cast<std::uint32_t>(4 * i));
  }
  if (layout != nullptr) *layout = lay;
  return p;
}

}  // namespace flexsvm::svmgen
