// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "flexsvm/accel.hpp"
#include "flexsvm/coresim.hpp"
#include "flexsvm/isa.hpp"
#include "flexsvm/mlkit.hpp"

/// Per-sample SVM inference programs, accelerated and software-only, built
/// from one QuantizedModel. Both are straight-line apart from short forward
/// branches, and both compute the same integer scores.
namespace flexsvm::svmgen {

class GenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Small assembler: forward/backward labels and word access at absolute
/// data addresses. Addresses that do not fit a 12-bit offset from the
/// current base register trigger a rebase of `base_reg` (lui/addi).
class Emitter {
 public:
  using Label = std::size_t;

  explicit Emitter(unsigned base_reg = 31) : base_reg_(base_reg) {}

  void emit(const isa::Instruction& i) { text_.push_back(i); }
  Label new_label();
  void bind(Label l);
  void branch(isa::Op op, unsigned rs1, unsigned rs2, Label target);

  /// rd = value, one or two instructions.
  void li(unsigned rd, std::int32_t value);
  void load_word(unsigned rd, std::uint32_t addr);
  void store_word(unsigned src, std::uint32_t addr);

  std::size_t size() const { return text_.size(); }
  std::size_t rebases() const { return rebases_; }

  /// Resolves branches. Throws GenError on an unbound label.
  std::vector<isa::Instruction> finish();

 private:
  std::int32_t offset_for(std::uint32_t addr);

  struct Fixup {
    std::size_t at;
    Label target;
  };
  std::vector<isa::Instruction> text_;
  std::vector<std::optional<std::size_t>> labels_;
  std::vector<Fixup> fixups_;
  unsigned base_reg_;
  unsigned cur_base_reg_ = 0;  // x0 doubles as base 0
  std::uint32_t cur_base_ = 0;
  std::size_t rebases_ = 0;
};

struct MulRegs {
  unsigned product = 13;
  unsigned multiplier = 11;    // unsigned, consumed
  unsigned multiplicand = 12;  // signed, consumed
  unsigned sign = 15;
  unsigned scratch = 16;
  unsigned one = 1;  // must already hold 1
};

/// product = multiplier * multiplicand with shift-add: per multiplier bit,
/// conditionally add the shifted multiplicand. The multiplicand is made
/// non-negative first and the sign restored at the end. The loop over
/// `multiplier_bits` is unrolled and exits early once the remaining
/// multiplier bits are all zero.
void emit_shift_add_multiply(Emitter& e, const MulRegs& r, unsigned multiplier_bits = 4);

/// Data image and output locations of a generated program.
struct Layout {
  std::uint32_t feature_base = 0;
  std::uint32_t weight_base = 0;
  std::uint32_t bias_base = 0;  // baseline only
  std::uint32_t output_base = 0;
  std::size_t outputs = 0;
};

/// CREATE_ENV; per classifier, word pairs through CALC then RES. OvR ends
/// with result & 0xFF stored as the single output; OvO stores every RES
/// word (bit 31 carries the sign) as one output per pair.
coresim::Program gen_accel(const mlkit::QuantizedModel& model, std::span<const std::uint8_t> x,
                           Layout* layout = nullptr);

/// Same scores with software shift-add MACs. OvR stores the argmax class
/// (first maximum wins); OvO stores one word per pair, 1 if the score is
/// negative.
coresim::Program gen_baseline(const mlkit::QuantizedModel& model,
                              std::span<const std::uint8_t> x, Layout* layout = nullptr);

/// Throws GenError when the sample does not fit the model or the model is
/// malformed (no features, wrong classifier count).
void check_sample(const mlkit::QuantizedModel& model, std::span<const std::uint8_t> x);

/// 1 + C (ceil((d+1)/lanes) + 1).
std::size_t accel_custom_op_count(const mlkit::QuantizedModel& model);

/// OvR: last word & 0xFF. OvO: words in pair order; bit 31 clear votes for
/// the first class of the pair; most votes wins, ties to the smallest ID.
/// Throws GenError on a wrong word count.
int interpret(std::span<const std::uint32_t> results, mlkit::Scheme scheme,
              std::size_t num_classes);

/// Decodes gen_baseline outputs.
int interpret_baseline(std::span<const std::uint32_t> outputs, mlkit::Scheme scheme,
                       std::size_t num_classes);

enum class Variant : std::uint8_t { Accel, Baseline };

struct InferenceConfig {
  coresim::MemModel mem{};
  coresim::CoreCostModel cost{};
  accel::LatencyTable latency{};
  bool record_traces = true;
};

struct InferenceResult {
  coresim::SimReport report;
  int predicted = -1;
  std::uint64_t saturations = 0;
};

/// Generates, simulates and interprets one sample. report.predicted_class
/// is filled in.
InferenceResult run_inference(const mlkit::QuantizedModel& model,
                              std::span<const std::uint8_t> x, Variant variant,
                              const InferenceConfig& config = {});

}  // namespace flexsvm::svmgen
