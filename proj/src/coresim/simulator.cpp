// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "flexsvm/coresim.hpp"

namespace flexsvm::coresim {

using isa::Op;

InstrClass classify(Op op) {
  switch (op) {
    case Op::Lw: return InstrClass::Load;
    case Op::Sw: return InstrClass::Store;
    case Op::Beq:
    case Op::Bne:
    case Op::Blt: return InstrClass::Branch;
    case Op::Jal: return InstrClass::Jump;
    case Op::Lui: return InstrClass::Upper;
    default: return InstrClass::Alu;
  }
}

namespace {

std::size_t word_index(std::uint32_t addr, std::size_t image_words, std::uint32_t pc,
                       std::string_view what) {
  if (addr % 4 != 0) {
    throw SimError(fmt::format("pc={:#x}: misaligned {} at {:#x}", pc, what, addr));
  }
  if (addr / 4 >= image_words) {
    throw SimError(fmt::format("pc={:#x}: {} at {:#x} outside the {}-word data image", pc,
                               what, addr, image_words));
  }
  return addr / 4;
}

}  // namespace

SimReport Simulator::run(const Program& program) {
  SimReport rep;
  rep.data = program.data;
  auto& x = rep.regs;
  std::uint32_t pc = 0;
  std::uint64_t now = 0;
  const std::uint64_t text_bytes = program.text.size() * 4ull;

  while (pc != text_bytes) {
    if (pc % 4 != 0 || pc > text_bytes) {
      throw SimError(fmt::format("pc={:#x}: fetch outside the {}-instruction text", pc,
                                 program.text.size()));
    }
    if (now > options_.max_cycles) {
      throw SimError(fmt::format("pc={:#x}: cycle limit {} exceeded", pc, options_.max_cycles));
    }
    const isa::Instruction& in = program.text[pc / 4];
    ++rep.instructions;

    if (mem_.fetch_policy == FetchPolicy::FetchIsMemRead) {
      now += mem_.read_cost();
      rep.memory_cycles += mem_.read_cost();
      ++rep.fetch_accesses;
    }

    const std::uint32_t a = x[in.rs1];
    const std::uint32_t b = x[in.rs2];
    const auto sa = static_cast<std::int32_t>(a);
    const auto sb = static_cast<std::int32_t>(b);
    const auto imm = static_cast<std::uint32_t>(in.imm);
    std::uint32_t next_pc = pc + 4;
    std::optional<std::uint32_t> write;

    if (in.op == Op::Accel) {
      if (plug_ == nullptr) {
        throw SimError(fmt::format("pc={:#x}: custom instruction with no accelerator attached", pc));
      }
      const auto funct3 = static_cast<std::uint8_t>(*in.accel_op);
      HandshakeTrace t;
      t.pc = pc;
      t.funct3 = funct3;
      t.init = now;
      t.rf_ready_read = now + cost_.pre_transfer - 1;
      t.cnt_en_start = now + cost_.pre_transfer;
      t.cnt_done = t.cnt_en_start + cost_.operand_transfer - 1;
      t.accel_valid = t.cnt_done + cost_.valid_assert;
      // Operands reach the plug only once accel_valid is raised.
      const PlugResponse resp = plug_->on_valid(funct3, a, b);
      t.latency = resp.latency;
      t.accel_ready = t.accel_valid + resp.latency;
      t.rf_wreq = t.accel_ready + cost_.writeback_setup;
      t.writeback_done = t.rf_wreq + cost_.writeback;
      now = t.writeback_done + 1;
      write = resp.result;
      ++rep.custom_ops;
      if (options_.record_traces) rep.traces.push_back(t);
    } else {
      now += cost_.exec_cycles(classify(in.op));
      switch (in.op) {
        case Op::Add: write = a + b; break;
        case Op::Sub: write = a - b; break;
        case Op::Sll: write = a << (b & 31u); break;
        case Op::Srl: write = a >> (b & 31u); break;
        case Op::And: write = a & b; break;
        case Op::Or: write = a | b; break;
        case Op::Xor: write = a ^ b; break;
        case Op::Slt: write = sa < sb ? 1u : 0u; break;
        case Op::Addi: write = a + imm; break;
        case Op::Lui: write = imm; break;
        case Op::Lw: {
          const std::size_t idx = word_index(a + imm, rep.data.size(), pc, "load");
          write = rep.data[idx];
          now += mem_.read_cost();
          rep.memory_cycles += mem_.read_cost();
          ++rep.data_reads;
          break;
        }
        case Op::Sw: {
          const std::size_t idx = word_index(a + imm, rep.data.size(), pc, "store");
          rep.data[idx] = b;
          now += mem_.write_cost();
          rep.memory_cycles += mem_.write_cost();
          ++rep.data_writes;
          break;
        }
        case Op::Beq: if (a == b) next_pc = pc + imm; break;
        case Op::Bne: if (a != b) next_pc = pc + imm; break;
        case Op::Blt: if (sa < sb) next_pc = pc + imm; break;
        case Op::Jal:
          write = pc + 4;
          next_pc = pc + imm;
          break;
        case Op::Accel: break;
      }
    }

    if (write && in.rd != 0) x[in.rd] = *write;
    pc = next_pc;
  }

  rep.total_cycles = now;
  for (std::uint32_t addr : program.output_addrs) {
    rep.outputs.push_back(rep.data.at(word_index(addr, rep.data.size(), pc, "output read")));
  }
  return rep;
}

}  // namespace flexsvm::coresim
