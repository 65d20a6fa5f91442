// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "flexsvm/coresim.hpp"
#include "flexsvm/isa.hpp"

/// Bit-exact functional model of the linear SVM co-processor.
///
/// The processing element holds eight 4x4 unsigned multipliers. Signed
/// weights go through a two's-complement to sign-magnitude converter; each
/// weight's magnitude is split into nibbles that occupy one multiplier each,
/// and the multiplier outputs are shifted by 0/4/8/12 according to the
/// nibble position. Four registers (cur_sum, cur_id, max_sum, max_id) carry
/// the running dot product and the running argmax across classifiers.
///
/// Operand packing:
///   W4:  rs1 nibble k = feature k (k < 8), rs2 nibble k = 4-bit weight k.
///   W8:  rs1 nibble k = feature k (k < 4), rs2 byte k = 8-bit weight k.
///        Weight k uses multipliers 2k (shift 0) and 2k+1 (shift 4).
///   W16: rs1 nibble k = feature k (k < 2), rs2 halfword k = weight k.
///        Weight k uses multipliers 4k..4k+3 (shifts 0, 4, 8, 12).
/// Unused rs1 nibbles are ignored.
namespace flexsvm::accel {

inline constexpr unsigned kMultipliers = 8;
inline constexpr unsigned kMaxClassifiers = 255;

enum class WeightMode : std::uint8_t { W4, W8, W16 };

constexpr unsigned weight_bits(WeightMode m) {
  switch (m) {
    case WeightMode::W4: return 4;
    case WeightMode::W8: return 8;
    case WeightMode::W16: return 16;
  }
  return 0;
}

constexpr unsigned nibbles_per_weight(WeightMode m) { return weight_bits(m) / 4; }

/// Weights carried by one 32-bit rs2 word.
constexpr unsigned lanes(WeightMode m) { return kMultipliers / nibbles_per_weight(m); }

/// Throws std::invalid_argument unless bits is 4, 8 or 16.
WeightMode mode_for_bits(unsigned bits);

isa::AccelOpId calc_op(WeightMode m);
isa::AccelOpId res_op(WeightMode m);

class AccelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SignMagnitude {
  bool negative = false;
  std::array<std::uint8_t, 4> nibbles{};  // low nibble first
  unsigned count = 0;                     // nibbles_per_weight(mode)
  bool saturated = false;                 // most-negative input clamped
};

/// `field` holds the raw two's-complement bits of one weight (upper bits
/// beyond the mode's width are ignored).
SignMagnitude to_sign_magnitude(std::uint32_t field, WeightMode mode);

/// Per-multiplier operands after unpacking.
struct PeInputs {
  std::array<std::uint8_t, kMultipliers> features{};
  std::array<std::uint8_t, kMultipliers> nibbles{};
  std::array<bool, kMultipliers> negative{};
  bool saturated = false;
};

PeInputs unpack_operands(std::uint32_t rs1, std::uint32_t rs2, WeightMode mode);

/// Signed sum of the eight shifted multiplier outputs.
std::int32_t pe_execute(const PeInputs& in, WeightMode mode);

struct AccelState {
  std::int32_t cur_sum = 0;
  std::uint8_t cur_id = 0;
  std::int32_t max_sum = 0;
  std::uint8_t max_id = 0;
  bool has_result = false;

  friend bool operator==(const AccelState&, const AccelState&) = default;
};

/// Bit 31 carries the sign of the just-finalized classifier's score; bits
/// 7..0 carry max_id; the remaining bits are zero.
struct PackedResult {
  std::uint32_t word = 0;

  static PackedResult make(bool negative, std::uint8_t class_id) {
    return {(negative ? 0x80000000u : 0u) | class_id};
  }
  bool negative() const { return (word >> 31) != 0; }
  std::uint8_t class_id() const { return static_cast<std::uint8_t>(word & 0xFFu); }

  friend bool operator==(const PackedResult&, const PackedResult&) = default;
};

AccelState create_env();

struct CalcOutcome {
  AccelState state;
  bool saturated = false;
};

/// cur_sum += PE(rs1, rs2). Throws AccelError on signed 32-bit overflow.
CalcOutcome calc(const AccelState& state, std::uint32_t rs1, std::uint32_t rs2,
                 WeightMode mode);

struct ResOutcome {
  PackedResult result;
  AccelState state;
};

/// Finalizes one classifier. The precision variants of the instruction
/// behave identically, so no mode is taken. Throws AccelError after 255
/// classifiers.
ResOutcome res(const AccelState& state);

struct LatencyTable {
  std::array<std::uint32_t, isa::kNumAccelOps> cycles{1, 1, 1, 1, 1, 1, 1};

  std::uint32_t& operator[](isa::AccelOpId id) { return cycles[static_cast<unsigned>(id)]; }
  std::uint32_t operator[](isa::AccelOpId id) const { return cycles[static_cast<unsigned>(id)]; }
};

std::uint32_t compute_latency(isa::AccelOpId op, const LatencyTable& table = {});

/// The co-processor as a device: architectural state plus configuration.
class SvmAccelerator final : public coresim::AcceleratorPlug {
 public:
  explicit SvmAccelerator(LatencyTable latency = {}) : latency_(latency) {}

  /// Executes one operation and returns the 32-bit result written to rd.
  /// CALC ops return 0.
  std::uint32_t execute(isa::AccelOpId op, std::uint32_t rs1, std::uint32_t rs2);

  coresim::PlugResponse on_valid(std::uint8_t funct3, std::uint32_t rs1,
                                 std::uint32_t rs2) override;
  void reset() override;

  const AccelState& state() const { return state_; }
  std::uint64_t saturation_count() const { return saturations_; }
  const LatencyTable& latency() const { return latency_; }

 private:
  AccelState state_{};
  LatencyTable latency_;
  std::uint64_t saturations_ = 0;
};

}  // namespace flexsvm::accel
