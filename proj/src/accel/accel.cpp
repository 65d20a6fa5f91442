// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexsvm/accel.hpp"

#include <fmt/format.h>

namespace flexsvm::accel {

WeightMode mode_for_bits(unsigned bits) {
  switch (bits) {
    case 4: return WeightMode::W4;
    case 8: return WeightMode::W8;
    case 16: return WeightMode::W16;
    default:
      throw std::invalid_argument(fmt::format("unsupported weight width {} (expected 4, 8 or 16)", bits));
  }
}

isa::AccelOpId calc_op(WeightMode m) {
  switch (m) {
    case WeightMode::W4: return isa::AccelOpId::Calc4;
    case WeightMode::W8: return isa::AccelOpId::Calc8;
    case WeightMode::W16: return isa::AccelOpId::Calc16;
  }
  return isa::AccelOpId::Calc4;
}

isa::AccelOpId res_op(WeightMode m) {
  switch (m) {
    case WeightMode::W4: return isa::AccelOpId::Res4;
    case WeightMode::W8: return isa::AccelOpId::Res8;
    case WeightMode::W16: return isa::AccelOpId::Res16;
  }
  return isa::AccelOpId::Res4;
}

SignMagnitude to_sign_magnitude(std::uint32_t field, WeightMode mode) {
  const unsigned width = weight_bits(mode);
  const std::uint32_t mask = (1u << width) - 1u;
  const std::uint32_t sign_bit = 1u << (width - 1);
  field &= mask;

  SignMagnitude out;
  out.count = nibbles_per_weight(mode);
  out.negative = (field & sign_bit) != 0;
  std::uint32_t magnitude = out.negative ? ((~field + 1u) & mask) : field;
  if (magnitude == sign_bit) {
    // -2^(n-1) has no positive counterpart in n bits.
    magnitude = sign_bit - 1u;
    out.saturated = true;
  }
  for (unsigned i = 0; i < out.count; ++i) {
    out.nibbles[i] = static_cast<std::uint8_t>((magnitude >> (4 * i)) & 0xFu);
  }
  return out;
}

PeInputs unpack_operands(std::uint32_t rs1, std::uint32_t rs2, WeightMode mode) {
  const unsigned width = weight_bits(mode);
  const unsigned npw = nibbles_per_weight(mode);
  PeInputs in;
  for (unsigned k = 0; k < lanes(mode); ++k) {
    const auto feature = static_cast<std::uint8_t>((rs1 >> (4 * k)) & 0xFu);
    const SignMagnitude sm = to_sign_magnitude(rs2 >> (width * k), mode);
    in.saturated = in.saturated || sm.saturated;
    for (unsigned j = 0; j < npw; ++j) {
      const unsigned m = k * npw + j;
      in.features[m] = feature;
      in.nibbles[m] = sm.nibbles[j];
      in.negative[m] = sm.negative;
    }
  }
  return in;
}

std::int32_t pe_execute(const PeInputs& in, WeightMode mode) {
  const unsigned npw = nibbles_per_weight(mode);
  std::int32_t sum = 0;
  for (unsigned m = 0; m < kMultipliers; ++m) {
    const std::uint32_t product = static_cast<std::uint32_t>(in.features[m] & 0xFu) *
                                  static_cast<std::uint32_t>(in.nibbles[m] & 0xFu);
    const auto shifted = static_cast<std::int32_t>(product << (4 * (m % npw)));
    sum += in.negative[m] ? -shifted : shifted;
  }
  return sum;
}

AccelState create_env() { return AccelState{}; }

CalcOutcome calc(const AccelState& state, std::uint32_t rs1, std::uint32_t rs2,
                 WeightMode mode) {
  const PeInputs in = unpack_operands(rs1, rs2, mode);
  const std::int64_t next = static_cast<std::int64_t>(state.cur_sum) + pe_execute(in, mode);
  if (next > INT32_MAX || next < INT32_MIN) {
    throw AccelError(fmt::format("cur_sum overflow: {} + contribution leaves 32-bit range",
                                 state.cur_sum));
  }
  CalcOutcome out{state, in.saturated};
  out.state.cur_sum = static_cast<std::int32_t>(next);
  return out;
}

ResOutcome res(const AccelState& state) {
  if (state.cur_id >= kMaxClassifiers) {
    throw AccelError("too many classifiers: cur_id would pass 255");
  }
  AccelState next = state;
  if (!state.has_result || state.cur_sum > state.max_sum) {
    next.max_sum = state.cur_sum;
    next.max_id = state.cur_id;
  }
  next.has_result = true;
  next.cur_sum = 0;
  next.cur_id = static_cast<std::uint8_t>(state.cur_id + 1);
  return {PackedResult::make(state.cur_sum < 0, next.max_id), next};
}

std::uint32_t compute_latency(isa::AccelOpId op, const LatencyTable& table) {
  return table[op];
}

std::uint32_t SvmAccelerator::execute(isa::AccelOpId op, std::uint32_t rs1, std::uint32_t rs2) {
  using isa::AccelOpId;
  switch (op) {
    case AccelOpId::CreateEnv:
      state_ = create_env();
      return 0;
    case AccelOpId::Calc4:
    case AccelOpId::Calc8:
    case AccelOpId::Calc16: {
      const auto mode = op == AccelOpId::Calc4   ? WeightMode::W4
                        : op == AccelOpId::Calc8 ? WeightMode::W8
                                                 : WeightMode::W16;
      const CalcOutcome out = calc(state_, rs1, rs2, mode);
      state_ = out.state;
      saturations_ += out.saturated ? 1 : 0;
      return 0;
    }
    case AccelOpId::Res4:
    case AccelOpId::Res8:
    case AccelOpId::Res16: {
      const ResOutcome out = res(state_);
      state_ = out.state;
      return out.result.word;
    }
  }
  throw AccelError(fmt::format("unknown accelerator operation {}", static_cast<unsigned>(op)));
}

coresim::PlugResponse SvmAccelerator::on_valid(std::uint8_t funct3, std::uint32_t rs1,
                                               std::uint32_t rs2) {
  const auto op = isa::accel_op_from_funct3(funct3);
  if (!op) throw AccelError(fmt::format("reserved accelerator operation funct3={}", funct3));
  return {execute(*op, rs1, rs2), compute_latency(*op, latency_)};
}

void SvmAccelerator::reset() {
  state_ = create_env();
  saturations_ = 0;
}

}  // namespace flexsvm::accel
