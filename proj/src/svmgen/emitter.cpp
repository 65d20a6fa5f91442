// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "flexsvm/svmgen.hpp"

namespace flexsvm::svmgen {

using isa::Op;

Emitter::Label Emitter::new_label() {
  labels_.emplace_back();
  return labels_.size() - 1;
}

void Emitter::bind(Label l) {
  if (labels_.at(l)) throw GenError(fmt::format("label {} bound twice", l));
  labels_[l] = text_.size();
}

void Emitter::branch(Op op, unsigned rs1, unsigned rs2, Label target) {
  fixups_.push_back({text_.size(), target});
  text_.push_back(isa::branch(op, rs1, rs2, 0));
}

void Emitter::li(unsigned rd, std::int32_t value) {
  if (value >= -2048 && value <= 2047) {
    emit(isa::addi(rd, 0, value));
    return;
  }
  const auto v = static_cast<std::uint32_t>(value);
  const std::uint32_t upper = (v + 0x800u) & 0xFFFFF000u;
  const auto low = static_cast<std::int32_t>(v - upper);
  emit(isa::lui(rd, static_cast<std::int32_t>(upper)));
  if (low != 0) emit(isa::addi(rd, rd, low));
}

std::int32_t Emitter::offset_for(std::uint32_t addr) {
  const auto fits = [](std::int64_t off) { return off >= -2048 && off <= 2047; };
  if (fits(std::int64_t{addr} - cur_base_)) return static_cast<std::int32_t>(addr - cur_base_);
  if (fits(addr)) {
    cur_base_reg_ = 0;
    cur_base_ = 0;
    return static_cast<std::int32_t>(addr);
  }
  li(base_reg_, static_cast<std::int32_t>(addr));
  cur_base_reg_ = base_reg_;
  cur_base_ = addr;
  ++rebases_;
  return 0;
}

void Emitter::load_word(unsigned rd, std::uint32_t addr) {
  const std::int32_t off = offset_for(addr);
  emit(isa::lw(rd, off, cur_base_reg_));
}

void Emitter::store_word(unsigned src, std::uint32_t addr) {
  const std::int32_t off = offset_for(addr);
  emit(isa::sw(src, off, cur_base_reg_));
}

std::vector<isa::Instruction> Emitter::finish() {
  for (const Fixup& f : fixups_) {
    const auto& target = labels_.at(f.target);
    if (!target) throw GenError(fmt::format("branch at {} targets unbound label {}", f.at, f.target));
    text_[f.at].imm = static_cast<std::int32_t>((static_cast<std::int64_t>(*target) -
                                                 static_cast<std::int64_t>(f.at)) * 4);
    isa::validate(text_[f.at]);
  }
  fixups_.clear();
  return std::move(text_);
}

void emit_shift_add_multiply(Emitter& e, const MulRegs& r, unsigned multiplier_bits) {
  const auto positive = e.new_label();
  const auto done = e.new_label();
  const auto end = e.new_label();
  e.emit(isa::r_type(Op::Slt, r.sign, r.multiplicand, 0));
  e.branch(Op::Beq, r.sign, 0, positive);
  e.emit(isa::r_type(Op::Sub, r.multiplicand, 0, r.multiplicand));
  e.bind(positive);
  e.emit(isa::r_type(Op::Add, r.product, 0, 0));
  for (unsigned k = 0; k < multiplier_bits; ++k) {
    const auto skip = e.new_label();
    e.branch(Op::Beq, r.multiplier, 0, done);
    e.emit(isa::r_type(Op::And, r.scratch, r.multiplier, r.one));
    e.branch(Op::Beq, r.scratch, 0, skip);
    e.emit(isa::r_type(Op::Add, r.product, r.product, r.multiplicand));
    e.bind(skip);
    e.emit(isa::r_type(Op::Sll, r.multiplicand, r.multiplicand, r.one));
    e.emit(isa::r_type(Op::Srl, r.multiplier, r.multiplier, r.one));
  }
  e.bind(done);
  e.branch(Op::Beq, r.sign, 0, end);
  e.emit(isa::r_type(Op::Sub, r.product, 0, r.product));
  e.bind(end);
}

}  // namespace flexsvm::svmgen
