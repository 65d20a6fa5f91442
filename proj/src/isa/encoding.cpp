// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexsvm/isa.hpp"

#include <array>

#include <fmt/format.h>

namespace flexsvm::isa {
namespace {

struct OpInfo {
  Op op;
  std::string_view name;
  Format format;
  std::uint32_t opcode;
  std::uint32_t funct3;
  std::uint32_t funct7;
};

constexpr std::array<OpInfo, 17> kOps{{
    {Op::Lw, "lw", Format::I, kOpcodeLoad, 0b010, 0},
    {Op::Sw, "sw", Format::S, kOpcodeStore, 0b010, 0},
    {Op::Add, "add", Format::R, kOpcodeOp, 0b000, kFunct7Base},
    {Op::Addi, "addi", Format::I, kOpcodeOpImm, 0b000, 0},
    {Op::Sub, "sub", Format::R, kOpcodeOp, 0b000, kFunct7Alt},
    {Op::Sll, "sll", Format::R, kOpcodeOp, 0b001, kFunct7Base},
    {Op::Srl, "srl", Format::R, kOpcodeOp, 0b101, kFunct7Base},
    {Op::And, "and", Format::R, kOpcodeOp, 0b111, kFunct7Base},
    {Op::Or, "or", Format::R, kOpcodeOp, 0b110, kFunct7Base},
    {Op::Xor, "xor", Format::R, kOpcodeOp, 0b100, kFunct7Base},
    {Op::Slt, "slt", Format::R, kOpcodeOp, 0b010, kFunct7Base},
    {Op::Beq, "beq", Format::B, kOpcodeBranch, 0b000, 0},
    {Op::Bne, "bne", Format::B, kOpcodeBranch, 0b001, 0},
    {Op::Blt, "blt", Format::B, kOpcodeBranch, 0b100, 0},
    {Op::Jal, "jal", Format::J, kOpcodeJal, 0, 0},
    {Op::Lui, "lui", Format::U, kOpcodeLui, 0, 0},
    {Op::Accel, "sv", Format::R, kOpcodeOp, 0, kFunct7Accel},
}};

constexpr std::array<std::string_view, kNumAccelOps> kAccelNames{
    "sv.create_env", "sv.calc4", "sv.calc8", "sv.calc16",
    "sv.res4",       "sv.res8",  "sv.res16"};

const OpInfo& info(Op op) {
  return kOps[static_cast<std::size_t>(op)];
}

constexpr std::uint32_t bits(std::uint32_t word, unsigned hi, unsigned lo) {
  return (word >> lo) & ((1u << (hi - lo + 1)) - 1u);
}

constexpr std::int32_t sign_extend(std::uint32_t value, unsigned width) {
  const std::uint32_t m = 1u << (width - 1);
  return static_cast<std::int32_t>((value ^ m) - m);
}

void check_reg(unsigned r, std::string_view field, const Instruction& i) {
  if (r >= kNumRegs) {
    throw EncodeError(fmt::format("{}: register {} = {} out of range",
                                  mnemonic(i.op), field, r));
  }
}

void require_zero(bool is_zero, std::string_view field, const Instruction& i) {
  if (!is_zero) {
    throw EncodeError(fmt::format("{}: field {} is not used by the format and must be zero",
                                  mnemonic(i.op), field));
  }
}

void check_imm(const Instruction& i, std::int64_t lo, std::int64_t hi,
               std::int32_t align) {
  if (i.imm < lo || i.imm > hi || i.imm % align != 0) {
    throw EncodeError(fmt::format("{}: immediate {} outside [{}, {}] or not a multiple of {}",
                                  mnemonic(i.op), i.imm, lo, hi, align));
  }
}

}  // namespace

Format format_of(Op op) { return info(op).format; }

std::string_view mnemonic(Op op) { return info(op).name; }

std::string_view mnemonic(AccelOpId id) {
  return kAccelNames[static_cast<std::size_t>(id)];
}

std::optional<AccelOpId> accel_op_from_funct3(unsigned funct3) {
  if (funct3 >= kNumAccelOps) return std::nullopt;
  return static_cast<AccelOpId>(funct3);
}

bool is_load(Op op) { return op == Op::Lw; }
bool is_store(Op op) { return op == Op::Sw; }
bool is_branch(Op op) { return format_of(op) == Format::B; }

void validate(const Instruction& i) {
  if (static_cast<std::size_t>(i.op) >= kOps.size()) {
    throw EncodeError("unknown operation");
  }
  check_reg(i.rd, "rd", i);
  check_reg(i.rs1, "rs1", i);
  check_reg(i.rs2, "rs2", i);
  if ((i.op == Op::Accel) != i.accel_op.has_value()) {
    throw EncodeError(fmt::format("{}: accelerator operation ID must be present exactly for custom instructions",
                                  mnemonic(i.op)));
  }
  if (i.accel_op && static_cast<unsigned>(*i.accel_op) >= kNumAccelOps) {
    throw EncodeError(fmt::format("accelerator operation ID {} is reserved",
                                  static_cast<unsigned>(*i.accel_op)));
  }
  switch (format_of(i.op)) {
    case Format::R:
      require_zero(i.imm == 0, "imm", i);
      break;
    case Format::I:
      require_zero(i.rs2 == 0, "rs2", i);
      check_imm(i, -2048, 2047, 1);
      break;
    case Format::S:
      require_zero(i.rd == 0, "rd", i);
      check_imm(i, -2048, 2047, 1);
      break;
    case Format::B:
      require_zero(i.rd == 0, "rd", i);
      check_imm(i, -4096, 4094, 2);
      break;
    case Format::J:
      require_zero(i.rs1 == 0, "rs1", i);
      require_zero(i.rs2 == 0, "rs2", i);
      check_imm(i, -(1 << 20), (1 << 20) - 2, 2);
      break;
    case Format::U:
      require_zero(i.rs1 == 0, "rs1", i);
      require_zero(i.rs2 == 0, "rs2", i);
      if ((static_cast<std::uint32_t>(i.imm) & 0xFFFu) != 0) {
        throw EncodeError(fmt::format("lui: value {:#x} has nonzero low 12 bits",
                                      static_cast<std::uint32_t>(i.imm)));
      }
      break;
  }
}

std::uint32_t encode(const Instruction& i) {
  validate(i);
  const OpInfo& o = info(i.op);
  const std::uint32_t rd = i.rd;
  const std::uint32_t rs1 = i.rs1;
  const std::uint32_t rs2 = i.rs2;
  const auto imm = static_cast<std::uint32_t>(i.imm);
  const std::uint32_t funct3 =
      i.op == Op::Accel ? static_cast<std::uint32_t>(*i.accel_op) : o.funct3;

  switch (o.format) {
    case Format::R:
      return (o.funct7 << 25) | (rs2 << 20) | (rs1 << 15) | (funct3 << 12) |
             (rd << 7) | o.opcode;
    case Format::I:
      return (bits(imm, 11, 0) << 20) | (rs1 << 15) | (funct3 << 12) |
             (rd << 7) | o.opcode;
    case Format::S:
      return (bits(imm, 11, 5) << 25) | (rs2 << 20) | (rs1 << 15) |
             (funct3 << 12) | (bits(imm, 4, 0) << 7) | o.opcode;
    case Format::B:
      return (bits(imm, 12, 12) << 31) | (bits(imm, 10, 5) << 25) |
             (rs2 << 20) | (rs1 << 15) | (funct3 << 12) |
             (bits(imm, 4, 1) << 8) | (bits(imm, 11, 11) << 7) | o.opcode;
    case Format::J:
      return (bits(imm, 20, 20) << 31) | (bits(imm, 10, 1) << 21) |
             (bits(imm, 11, 11) << 20) | (bits(imm, 19, 12) << 12) |
             (rd << 7) | o.opcode;
    case Format::U:
      return (imm & 0xFFFFF000u) | (rd << 7) | o.opcode;
  }
  throw EncodeError("unreachable format");
}

Instruction decode(std::uint32_t word) {
  const std::uint32_t opcode = bits(word, 6, 0);
  const auto rd = static_cast<std::uint8_t>(bits(word, 11, 7));
  const std::uint32_t funct3 = bits(word, 14, 12);
  const auto rs1 = static_cast<std::uint8_t>(bits(word, 19, 15));
  const auto rs2 = static_cast<std::uint8_t>(bits(word, 24, 20));
  const std::uint32_t funct7 = bits(word, 31, 25);

  Instruction out;
  switch (opcode) {
    case kOpcodeOp: {
      out.rd = rd;
      out.rs1 = rs1;
      out.rs2 = rs2;
      if (funct7 == kFunct7Accel) {
        auto id = accel_op_from_funct3(funct3);
        if (!id) {
          throw DecodeError(fmt::format("{:#010x}: reserved accelerator operation funct3={}",
                                        word, funct3));
        }
        out.op = Op::Accel;
        out.accel_op = id;
        return out;
      }
      if (funct7 != kFunct7Base && funct7 != kFunct7Alt) {
        throw DecodeError(fmt::format("{:#010x}: reserved accelerator ID funct7={:#x}",
                                      word, funct7));
      }
      for (const OpInfo& o : kOps) {
        if (o.format == Format::R && o.op != Op::Accel && o.funct3 == funct3 &&
            o.funct7 == funct7) {
          out.op = o.op;
          return out;
        }
      }
      throw DecodeError(fmt::format("{:#010x}: unsupported R-type funct3={} funct7={:#x}",
                                    word, funct3, funct7));
    }
    case kOpcodeLoad:
    case kOpcodeOpImm:
      out.op = opcode == kOpcodeLoad ? Op::Lw : Op::Addi;
      if (funct3 != info(out.op).funct3) {
        throw DecodeError(fmt::format("{:#010x}: unsupported funct3={} for opcode {:#09b}",
                                      word, funct3, opcode));
      }
      out.rd = rd;
      out.rs1 = rs1;
      out.imm = sign_extend(bits(word, 31, 20), 12);
      return out;
    case kOpcodeStore:
      if (funct3 != info(Op::Sw).funct3) {
        throw DecodeError(fmt::format("{:#010x}: unsupported store width funct3={}",
                                      word, funct3));
      }
      out.op = Op::Sw;
      out.rs1 = rs1;
      out.rs2 = rs2;
      out.imm = sign_extend((bits(word, 31, 25) << 5) | bits(word, 11, 7), 12);
      return out;
    case kOpcodeBranch:
      switch (funct3) {
        case 0b000: out.op = Op::Beq; break;
        case 0b001: out.op = Op::Bne; break;
        case 0b100: out.op = Op::Blt; break;
        default:
          throw DecodeError(fmt::format("{:#010x}: unsupported branch funct3={}",
                                        word, funct3));
      }
      out.rs1 = rs1;
      out.rs2 = rs2;
      out.imm = sign_extend((bits(word, 31, 31) << 12) | (bits(word, 7, 7) << 11) |
                                (bits(word, 30, 25) << 5) | (bits(word, 11, 8) << 1),
                            13);
      return out;
    case kOpcodeJal:
      out.op = Op::Jal;
      out.rd = rd;
      out.imm = sign_extend((bits(word, 31, 31) << 20) | (bits(word, 19, 12) << 12) |
                                (bits(word, 20, 20) << 11) | (bits(word, 30, 21) << 1),
                            21);
      return out;
    case kOpcodeLui:
      out.op = Op::Lui;
      out.rd = rd;
      out.imm = static_cast<std::int32_t>(word & 0xFFFFF000u);
      return out;
    default:
      throw DecodeError(fmt::format("{:#010x}: unsupported opcode {:#09b}", word, opcode));
  }
}

Instruction r_type(Op op, unsigned rd, unsigned rs1, unsigned rs2) {
  Instruction i;
  i.op = op;
  i.rd = static_cast<std::uint8_t>(rd);
  i.rs1 = static_cast<std::uint8_t>(rs1);
  i.rs2 = static_cast<std::uint8_t>(rs2);
  return i;
}

Instruction addi(unsigned rd, unsigned rs1, std::int32_t imm) {
  Instruction i = r_type(Op::Addi, rd, rs1, 0);
  i.imm = imm;
  return i;
}

Instruction lw(unsigned rd, std::int32_t offset, unsigned base) {
  Instruction i = r_type(Op::Lw, rd, base, 0);
  i.imm = offset;
  return i;
}

Instruction sw(unsigned src, std::int32_t offset, unsigned base) {
  Instruction i = r_type(Op::Sw, 0, base, src);
  i.imm = offset;
  return i;
}

Instruction branch(Op op, unsigned rs1, unsigned rs2, std::int32_t offset) {
  Instruction i = r_type(op, 0, rs1, rs2);
  i.imm = offset;
  return i;
}

Instruction jal(unsigned rd, std::int32_t offset) {
  Instruction i = r_type(Op::Jal, rd, 0, 0);
  i.imm = offset;
  return i;
}

Instruction lui(unsigned rd, std::int32_t upper_value) {
  Instruction i = r_type(Op::Lui, rd, 0, 0);
  i.imm = upper_value;
  return i;
}

Instruction accel(AccelOpId id, unsigned rd, unsigned rs1, unsigned rs2) {
  Instruction i = r_type(Op::Accel, rd, rs1, rs2);
  i.accel_op = id;
  return i;
}

}  // namespace flexsvm::isa
