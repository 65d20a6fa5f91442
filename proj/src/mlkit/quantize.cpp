// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "flexsvm/mlkit.hpp"

namespace flexsvm::mlkit {

std::int32_t round_half_away(double v) {
  return static_cast<std::int32_t>(v < 0.0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5));
}

std::uint8_t quantize_feature(double x) {
  return static_cast<std::uint8_t>(round_half_away(kFeatureMax * std::clamp(x, 0.0, 1.0)));
}

std::vector<std::uint8_t> quantize_features(std::span<const double> x) {
  std::vector<std::uint8_t> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(quantize_feature(v));
  return out;
}

std::int64_t QuantizedClassifier::score(std::span<const std::uint8_t> x) const {
  if (x.size() != w.size()) {
    throw DataError(fmt::format("sample has {} features, model expects {}", x.size(), w.size()));
  }
  std::int64_t s = std::int64_t{kFeatureMax} * b;
  for (std::size_t j = 0; j < w.size(); ++j) s += std::int64_t{w[j]} * x[j];
  return s;
}

std::vector<std::int64_t> QuantizedModel::scores(std::span<const std::uint8_t> x) const {
  std::vector<std::int64_t> out;
  out.reserve(classifiers.size());
  for (const auto& c : classifiers) out.push_back(c.score(x));
  return out;
}

int QuantizedModel::predict(std::span<const std::uint8_t> x) const {
  const auto s = scores(x);
  std::vector<double> d(s.begin(), s.end());
  return decide(scheme, num_classes, d);
}

QuantizedModel quantize(const FloatModel& model, unsigned bits) {
  QuantizedModel q;
  q.bits = accel::weight_bits(accel::mode_for_bits(bits));
  q.scheme = model.scheme;
  q.num_classes = model.num_classes;
  q.dims = model.dims;

  double peak = 0.0;
  for (const auto& c : model.classifiers) {
    for (double v : c.w) peak = std::max(peak, std::abs(v));
    peak = std::max(peak, std::abs(c.b));
  }
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw DataError("cannot quantize: model coefficients are all zero or not finite");
  }
  const std::int32_t qmax = q.qmax();
  q.scale = peak / qmax;

  auto level = [&](double v) { return std::clamp(round_half_away(v / q.scale), -qmax, qmax); };
  for (const auto& c : model.classifiers) {
    QuantizedClassifier qc;
    qc.pos = c.pos;
    qc.neg = c.neg;
    qc.b = level(c.b);
    for (double v : c.w) qc.w.push_back(level(v));
    q.classifiers.push_back(std::move(qc));
  }
  return q;
}

std::size_t words_per_classifier(std::size_t dims, accel::WeightMode mode) {
  const std::size_t l = accel::lanes(mode);
  return (dims + 1 + l - 1) / l;
}

std::vector<std::uint32_t> pack_features(std::span<const std::uint8_t> x, accel::WeightMode mode) {
  const unsigned l = accel::lanes(mode);
  std::vector<std::uint32_t> words(words_per_classifier(x.size(), mode), 0);
  for (std::size_t i = 0; i <= x.size(); ++i) {
    const std::uint32_t f = i < x.size() ? x[i] : kFeatureMax;
    if (f > kFeatureMax) throw DataError(fmt::format("feature {} = {} exceeds 4 bits", i, f));
    words[i / l] |= f << (4 * (i % l));
  }
  return words;
}

std::vector<std::uint32_t> pack_weights(const QuantizedClassifier& c, accel::WeightMode mode) {
  const unsigned l = accel::lanes(mode);
  const unsigned width = accel::weight_bits(mode);
  const std::int32_t qmax = (std::int32_t{1} << (width - 1)) - 1;
  const std::uint32_t mask = (1u << width) - 1u;
  std::vector<std::uint32_t> words(words_per_classifier(c.w.size(), mode), 0);
  for (std::size_t i = 0; i <= c.w.size(); ++i) {
    const std::int32_t v = i < c.w.size() ? c.w[i] : c.b;
    if (v > qmax || v < -qmax) {
      throw DataError(fmt::format("weight {} = {} outside the {}-bit range", i, v, width));
    }
    words[i / l] |= (static_cast<std::uint32_t>(v) & mask) << (width * (i % l));
  }
  return words;
}

std::vector<std::uint8_t> unpack_features(std::span<const std::uint32_t> words, std::size_t dims,
                                          accel::WeightMode mode) {
  const unsigned l = accel::lanes(mode);
  if (words.size() != words_per_classifier(dims, mode)) throw DataError("feature word count mismatch");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i <= dims; ++i) {
    out.push_back(static_cast<std::uint8_t>((words[i / l] >> (4 * (i % l))) & 0xFu));
  }
  return out;
}

std::vector<std::int32_t> unpack_weights(std::span<const std::uint32_t> words, std::size_t dims,
                                         accel::WeightMode mode) {
  const unsigned l = accel::lanes(mode);
  const unsigned width = accel::weight_bits(mode);
  if (words.size() != words_per_classifier(dims, mode)) throw DataError("weight word count mismatch");
  const std::uint32_t mask = (1u << width) - 1u;
  const std::uint32_t sign = 1u << (width - 1);
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i <= dims; ++i) {
    const std::uint32_t f = (words[i / l] >> (width * (i % l))) & mask;
    out.push_back(static_cast<std::int32_t>(f ^ sign) - static_cast<std::int32_t>(sign));
  }
  return out;
}

}  // namespace flexsvm::mlkit
