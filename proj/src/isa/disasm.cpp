// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "flexsvm/isa.hpp"

namespace flexsvm::isa {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "a, b, c" into trimmed tokens.
std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

unsigned parse_reg(std::string_view tok, std::string_view line) {
  unsigned value = 0;
  if (tok.size() >= 2 && tok.front() == 'x') {
    const auto* first = tok.data() + 1;
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc{} && ptr == last && value < kNumRegs) return value;
  }
  throw ParseError(fmt::format("bad register '{}' in '{}'", tok, line));
}

std::int64_t parse_int(std::string_view tok, std::string_view line) {
  bool negative = false;
  std::string_view digits = tok;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  int base = 10;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  }
  std::int64_t value = 0;
  const auto* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), last, value, base);
  if (digits.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(fmt::format("bad immediate '{}' in '{}'", tok, line));
  }
  return negative ? -value : value;
}

std::int32_t parse_imm32(std::string_view tok, std::string_view line) {
  const std::int64_t v = parse_int(tok, line);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw ParseError(fmt::format("immediate '{}' does not fit 32 bits in '{}'", tok, line));
  }
  return static_cast<std::int32_t>(v);
}

// "16(x8)" -> {16, 8}
std::pair<std::int32_t, unsigned> parse_mem_operand(std::string_view tok,
                                                    std::string_view line) {
  const auto open = tok.find('(');
  if (open == std::string_view::npos || tok.back() != ')') {
    throw ParseError(fmt::format("bad memory operand '{}' in '{}'", tok, line));
  }
  const auto offset = trim(tok.substr(0, open));
  const auto reg = trim(tok.substr(open + 1, tok.size() - open - 2));
  return {offset.empty() ? 0 : parse_imm32(offset, line), parse_reg(reg, line)};
}

void expect_count(const std::vector<std::string_view>& ops, std::size_t n,
                  std::string_view line) {
  if (ops.size() != n) {
    throw ParseError(fmt::format("expected {} operands in '{}'", n, line));
  }
}

}  // namespace

std::string disassemble(const Instruction& i) {
  switch (format_of(i.op)) {
    case Format::R:
      if (i.op == Op::Accel) {
        return fmt::format("{} x{}, x{}, x{}", mnemonic(*i.accel_op), i.rd, i.rs1, i.rs2);
      }
      return fmt::format("{} x{}, x{}, x{}", mnemonic(i.op), i.rd, i.rs1, i.rs2);
    case Format::I:
      if (i.op == Op::Lw) return fmt::format("lw x{}, {}(x{})", i.rd, i.imm, i.rs1);
      return fmt::format("{} x{}, x{}, {}", mnemonic(i.op), i.rd, i.rs1, i.imm);
    case Format::S:
      return fmt::format("sw x{}, {}(x{})", i.rs2, i.imm, i.rs1);
    case Format::B:
      return fmt::format("{} x{}, x{}, {}", mnemonic(i.op), i.rs1, i.rs2, i.imm);
    case Format::J:
      return fmt::format("jal x{}, {}", i.rd, i.imm);
    case Format::U:
      return fmt::format("lui x{}, {:#x}", i.rd, static_cast<std::uint32_t>(i.imm) >> 12);
  }
  return "<invalid>";
}

Instruction parse_instruction(std::string_view raw) {
  const std::string_view line = trim(raw);
  const auto space = line.find_first_of(" \t");
  const std::string_view name = line.substr(0, space);
  const auto ops = split_operands(space == std::string_view::npos ? std::string_view{}
                                                                  : line.substr(space + 1));

  for (unsigned id = 0; id < kNumAccelOps; ++id) {
    if (name == mnemonic(static_cast<AccelOpId>(id))) {
      expect_count(ops, 3, line);
      return accel(static_cast<AccelOpId>(id), parse_reg(ops[0], line),
                   parse_reg(ops[1], line), parse_reg(ops[2], line));
    }
  }

  for (auto op_index = 0u; op_index <= static_cast<unsigned>(Op::Lui); ++op_index) {
    const auto op = static_cast<Op>(op_index);
    if (name != mnemonic(op)) continue;
    switch (format_of(op)) {
      case Format::R:
        expect_count(ops, 3, line);
        return r_type(op, parse_reg(ops[0], line), parse_reg(ops[1], line),
                      parse_reg(ops[2], line));
      case Format::I:
        if (op == Op::Lw) {
          expect_count(ops, 2, line);
          auto [offset, base] = parse_mem_operand(ops[1], line);
          return lw(parse_reg(ops[0], line), offset, base);
        }
        expect_count(ops, 3, line);
        return addi(parse_reg(ops[0], line), parse_reg(ops[1], line),
                    parse_imm32(ops[2], line));
      case Format::S: {
        expect_count(ops, 2, line);
        auto [offset, base] = parse_mem_operand(ops[1], line);
        return sw(parse_reg(ops[0], line), offset, base);
      }
      case Format::B:
        expect_count(ops, 3, line);
        return branch(op, parse_reg(ops[0], line), parse_reg(ops[1], line),
                      parse_imm32(ops[2], line));
      case Format::J:
        expect_count(ops, 2, line);
        return jal(parse_reg(ops[0], line), parse_imm32(ops[1], line));
      case Format::U: {
        expect_count(ops, 2, line);
        const std::int64_t upper = parse_int(ops[1], line);
        if (upper < 0 || upper > 0xFFFFF) {
          throw ParseError(fmt::format("lui immediate out of range in '{}'", line));
        }
        return lui(parse_reg(ops[0], line),
                   static_cast<std::int32_t>(static_cast<std::uint32_t>(upper) << 12));
      }
    }
  }
  throw ParseError(fmt::format("unknown mnemonic '{}'", name));
}

std::string disassemble_program(std::span<const Instruction> program) {
  std::string out;
  for (const Instruction& i : program) {
    out += disassemble(i);
    out += '\n';
  }
  return out;
}

std::vector<Instruction> parse_program(std::string_view text) {
  std::vector<Instruction> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    try {
      Instruction instr = parse_instruction(line);
      validate(instr);
      out.push_back(instr);
    } catch (const std::exception& e) {
      throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

}  // namespace flexsvm::isa
