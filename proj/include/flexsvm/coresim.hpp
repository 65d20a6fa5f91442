// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexsvm/isa.hpp"

/// Cycle-level model of a bit-serial RV32I core with a co-processor port.
///
/// Every instruction takes a fixed number of execute cycles (32 by default,
/// one bit per cycle). Memory accesses add the read/write delay plus a
/// per-access overhead. Custom instructions stall the core for the whole
/// operand transfer / compute / write-back handshake.
namespace flexsvm::coresim {

enum class FetchPolicy : std::uint8_t {
  FetchIsMemRead,  // every fetch pays read_cycles + access_overhead
  FetchFree,
};

struct MemModel {
  std::uint32_t read_cycles = 46;
  std::uint32_t write_cycles = 47;
  std::uint32_t access_overhead = 64;
  FetchPolicy fetch_policy = FetchPolicy::FetchIsMemRead;

  std::uint32_t read_cost() const { return read_cycles + access_overhead; }
  std::uint32_t write_cost() const { return write_cycles + access_overhead; }
};

enum class InstrClass : std::uint8_t { Alu, Load, Store, Branch, Jump, Upper };
inline constexpr std::size_t kNumInstrClasses = 6;

InstrClass classify(isa::Op op);

struct CoreCostModel {
  std::array<std::uint32_t, kNumInstrClasses> base_exec{32, 32, 32, 32, 32, 32};
  // Custom-instruction handshake phases.
  std::uint32_t pre_transfer = 2;  // init, i_rf_ready
  std::uint32_t operand_transfer = 32;
  std::uint32_t valid_assert = 1;
  std::uint32_t writeback_setup = 1;  // i_rf_ready + o_rf_wreq
  std::uint32_t writeback = 32;

  std::uint32_t exec_cycles(InstrClass c) const { return base_exec[static_cast<std::size_t>(c)]; }
  std::uint32_t custom_fixed_cycles() const {
    return pre_transfer + operand_transfer + valid_assert + writeback_setup + writeback;
  }
};

struct PlugResponse {
  std::uint32_t result = 0;
  std::uint32_t latency = 1;  // cycles from accel_valid to accel_ready
};

/// Co-processor contract. The core presents funct3 and both operands only
/// when it raises accel_valid; the plug answers with the result word and
/// the number of cycles until accel_ready.
class AcceleratorPlug {
 public:
  virtual ~AcceleratorPlug() = default;
  virtual PlugResponse on_valid(std::uint8_t funct3, std::uint32_t rs1, std::uint32_t rs2) = 0;
  virtual void reset() = 0;
};

/// Instruction stream plus the initial data image. Text and data live in
/// separate address spaces, both starting at 0.
struct Program {
  std::vector<isa::Instruction> text;
  std::vector<std::uint32_t> data;
  std::vector<std::uint32_t> output_addrs;  // byte addresses read back after halt
};

/// Cycle stamps of one custom instruction.
struct HandshakeTrace {
  std::uint32_t pc = 0;
  std::uint8_t funct3 = 0;
  std::uint32_t latency = 0;
  std::uint64_t init = 0;
  std::uint64_t rf_ready_read = 0;
  std::uint64_t cnt_en_start = 0;
  std::uint64_t cnt_done = 0;
  std::uint64_t accel_valid = 0;
  std::uint64_t accel_ready = 0;
  std::uint64_t rf_wreq = 0;
  std::uint64_t writeback_done = 0;
};

/// True iff the stamps follow the handshake: init, register-file read setup,
/// a 32-cycle operand phase, valid on the following cycle, ready `latency`
/// cycles later, then a write request followed by a 32-cycle write-back.
bool trace_check(const HandshakeTrace& trace);

struct SimReport {
  std::uint64_t total_cycles = 0;
  std::uint64_t instructions = 0;
  std::uint64_t fetch_accesses = 0;
  std::uint64_t data_reads = 0;
  std::uint64_t data_writes = 0;
  std::uint64_t custom_ops = 0;
  std::uint64_t memory_cycles = 0;  // cycles spent in memory delay + overhead
  std::vector<HandshakeTrace> traces;
  std::array<std::uint32_t, isa::kNumRegs> regs{};
  std::vector<std::uint32_t> data;
  std::vector<std::uint32_t> outputs;
  std::optional<int> predicted_class;

  std::uint64_t data_mem_accesses() const { return data_reads + data_writes; }
};

/// key: value lines, one trace entry per line.
std::string to_text(const SimReport& report);

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  std::uint64_t max_cycles = 4'000'000'000ull;
  bool record_traces = true;
};

class Simulator {
 public:
  explicit Simulator(MemModel mem = {}, CoreCostModel cost = {}, SimOptions options = {})
      : mem_(mem), cost_(cost), options_(options) {}

  /// Custom instructions dispatch to `plug`, which must outlive the
  /// simulator or be detached first.
  Simulator& attach(AcceleratorPlug& plug) {
    plug_ = &plug;
    return *this;
  }
  void detach() { plug_ = nullptr; }
  bool has_plug() const { return plug_ != nullptr; }

  /// Runs until the pc falls off the end of the text. Throws SimError on
  /// an invalid access, a custom instruction without a plug, or when the
  /// cycle limit is hit.
  SimReport run(const Program& program);

  const MemModel& mem_model() const { return mem_; }
  const CoreCostModel& cost_model() const { return cost_; }

 private:
  MemModel mem_;
  CoreCostModel cost_;
  SimOptions options_;
  AcceleratorPlug* plug_ = nullptr;
};

/// Little-endian 32-bit words.
std::vector<std::uint32_t> read_data_image(const std::filesystem::path& path);
void write_data_image(const std::filesystem::path& path, std::span<const std::uint32_t> words);

/// Disassembly file + binary data image. The program has no declared outputs.
Program load_program(const std::filesystem::path& asm_path,
                     const std::filesystem::path& data_path);

}  // namespace flexsvm::coresim
