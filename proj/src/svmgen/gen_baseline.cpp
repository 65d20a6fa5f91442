// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexsvm/svmgen.hpp"

namespace flexsvm::svmgen {

using isa::Op;

namespace {

constexpr unsigned kOne = 1;
constexpr unsigned kAcc = 10;
constexpr unsigned kLess = 14;
constexpr unsigned kBest = 20;
constexpr unsigned kBestId = 21;

}  // namespace

coresim::Program gen_baseline(const mlkit::QuantizedModel& model,
                              std::span<const std::uint8_t> x, Layout* layout) {
  check_sample(model, x);
  const std::size_t d = model.dims;
  const std::size_t c = model.classifiers.size();
  const bool ovr = model.scheme == mlkit::Scheme::OvR;

  Layout lay;
  lay.feature_base = 0;
  lay.weight_base = static_cast<std::uint32_t>(4 * d);
  lay.bias_base = static_cast<std::uint32_t>(4 * (d + c * d));
  lay.output_base = static_cast<std::uint32_t>(4 * (d + c * d + c));
  lay.outputs = ovr ? 1 : c;

  coresim::Program p;
  p.data.assign(x.begin(), x.end());
  for (const auto& qc : model.classifiers) {
    for (std::int32_t w : qc.w) p.data.push_back(static_cast<std::uint32_t>(w));
  }
  // The bias term B * 15 is folded into one constant per classifier.
  for (const auto& qc : model.classifiers) {
    p.data.push_back(static_cast<std::uint32_t>(qc.b * mlkit::kFeatureMax));
  }
  p.data.resize(p.data.size() + lay.outputs, 0);

  const MulRegs mul;
  Emitter e;
  e.li(kOne, 1);
  for (std::size_t k = 0; k < c; ++k) {
    e.load_word(kAcc, lay.bias_base + static_cast<std::uint32_t>(4 * k));
    for (std::size_t j = 0; j < d; ++j) {
      e.load_word(mul.multiplier, lay.feature_base + static_cast<std::uint32_t>(4 * j));
      e.load_word(mul.multiplicand, lay.weight_base + static_cast<std::uint32_t>(4 * (k * d + j)));
      emit_shift_add_multiply(e, mul);
      e.emit(isa::r_type(Op::Add, kAcc, kAcc, mul.product));
    }
    if (ovr) {
      if (k == 0) {
        e.emit(isa::r_type(Op::Add, kBest, kAcc, 0));
        e.emit(isa::addi(kBestId, 0, 0));
      } else {
        const auto keep = e.new_label();
        e.emit(isa::r_type(Op::Slt, kLess, kBest, kAcc));
        e.branch(Op::Beq, kLess, 0, keep);
        e.emit(isa::r_type(Op::Add, kBest, kAcc, 0));
        e.emit(isa::addi(kBestId, 0, static_cast<std::int32_t>(k)));
        e.bind(keep);
      }
    } else {
      e.emit(isa::r_type(Op::Slt, kLess, kAcc, 0));
      e.store_word(kLess, lay.output_base + static_cast<std::uint32_t>(4 * k));
    }
  }
  if (ovr) e.store_word(kBestId, lay.output_base);
  p.text = e.finish();
  for (std::size_t i = 0; i < lay.outputs; ++i) {
    p.output_addrs.push_back(lay.output_base + static_cast<std::uint32_t>(4 * i));
  }
  if (layout != nullptr) *layout = lay;
  return p;
}

}  // namespace flexsvm::svmgen
