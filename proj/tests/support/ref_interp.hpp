// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "flexsvm/coresim.hpp"
#include "flexsvm/isa.hpp"

// Cost-free interpreter used as the functional oracle for coresim, plus a
// cycle oracle that sums the documented per-instruction costs from the
// dynamic instruction mix.
namespace flexsvm::testing {

using CustomFn = std::function<std::uint32_t(std::uint8_t funct3, std::uint32_t rs1,
                                             std::uint32_t rs2)>;

struct RefResult {
  std::array<std::uint32_t, 32> regs{};
  std::vector<std::uint32_t> data;
  std::vector<std::uint32_t> outputs;
  std::uint64_t executed = 0;  // all instructions
  std::uint64_t plain = 0;     // non-load/store/custom
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t customs = 0;
};

/// Throws std::runtime_error on a bad access or after `max_steps`.
RefResult ref_run(const coresim::Program& program, const CustomFn& custom = {},
                  std::uint64_t max_steps = 100'000'000);

/// Expected cycles with 32-cycle execute, 46/47 + 64 memory costs and a
/// 68 + latency custom op, optionally paying a read for every fetch.
std::uint64_t expected_cycles(const RefResult& r, bool fetch_is_read, std::uint32_t latency = 1);

}  // namespace flexsvm::testing
