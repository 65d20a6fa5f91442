// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// RV32I subset plus the custom R-type SVM accelerator instructions.
///
/// Accelerator instructions reuse the standard OP opcode (0b0110011). The
/// funct7 field selects the accelerator (only funct7 == 1 is assigned) and
/// funct3 selects the accelerator operation. SERV uses funct7 0x00 and 0x20
/// for its own ALU ops; every other funct7 on OP is reserved.
namespace flexsvm::isa {

inline constexpr std::uint32_t kOpcodeLoad = 0b0000011;
inline constexpr std::uint32_t kOpcodeOpImm = 0b0010011;
inline constexpr std::uint32_t kOpcodeStore = 0b0100011;
inline constexpr std::uint32_t kOpcodeOp = 0b0110011;
inline constexpr std::uint32_t kOpcodeLui = 0b0110111;
inline constexpr std::uint32_t kOpcodeBranch = 0b1100011;
inline constexpr std::uint32_t kOpcodeJal = 0b1101111;

inline constexpr std::uint32_t kFunct7Base = 0x00;
inline constexpr std::uint32_t kFunct7Alt = 0x20;
inline constexpr std::uint32_t kFunct7Accel = 0x01;

inline constexpr unsigned kNumRegs = 32;

enum class Op : std::uint8_t {
  Lw,
  Sw,
  Add,
  Addi,
  Sub,
  Sll,
  Srl,
  And,
  Or,
  Xor,
  Slt,
  Beq,
  Bne,
  Blt,
  Jal,
  Lui,
  Accel,
};

enum class Format : std::uint8_t { R, I, S, B, J, U };

/// funct3 operation IDs of the SVM accelerator. Value 7 is reserved.
enum class AccelOpId : std::uint8_t {
  CreateEnv = 0,
  Calc4 = 1,
  Calc8 = 2,
  Calc16 = 3,
  Res4 = 4,
  Res8 = 5,
  Res16 = 6,
};

inline constexpr unsigned kNumAccelOps = 7;

struct Instruction {
  Op op = Op::Add;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;
  std::optional<AccelOpId> accel_op;  // set iff op == Op::Accel

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Format format_of(Op op);
std::string_view mnemonic(Op op);
std::string_view mnemonic(AccelOpId id);
std::optional<AccelOpId> accel_op_from_funct3(unsigned funct3);

bool is_load(Op op);
bool is_store(Op op);
bool is_branch(Op op);

/// Throws EncodeError if a field is out of range or a field the format does
/// not carry is nonzero (the canonical form keeps decode(encode(i)) == i).
void validate(const Instruction& instr);

std::uint32_t encode(const Instruction& instr);

/// Throws DecodeError for opcodes and function codes outside the subset.
Instruction decode(std::uint32_t word);

// Builders. Operand order follows assembly syntax.
Instruction r_type(Op op, unsigned rd, unsigned rs1, unsigned rs2);
Instruction addi(unsigned rd, unsigned rs1, std::int32_t imm);
Instruction lw(unsigned rd, std::int32_t offset, unsigned base);
Instruction sw(unsigned src, std::int32_t offset, unsigned base);
Instruction branch(Op op, unsigned rs1, unsigned rs2, std::int32_t offset);
Instruction jal(unsigned rd, std::int32_t offset);
Instruction lui(unsigned rd, std::int32_t upper_value);
Instruction accel(AccelOpId id, unsigned rd, unsigned rs1, unsigned rs2);

/// One instruction in the textual form used by program files, e.g.
/// "add x3, x1, x2", "lw x5, 16(x8)", "beq x1, x0, 12", "sv.calc4 x7, x5, x6".
std::string disassemble(const Instruction& instr);
Instruction parse_instruction(std::string_view line);

/// Whole program: one instruction per line; blank lines and '#' comments are
/// ignored on input.
std::string disassemble_program(std::span<const Instruction> program);
std::vector<Instruction> parse_program(std::string_view text);

}  // namespace flexsvm::isa
