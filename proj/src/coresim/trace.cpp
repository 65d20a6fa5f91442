// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexsvm/coresim.hpp"

namespace flexsvm::coresim {

namespace {
constexpr std::uint64_t kSerialPhase = 32;
constexpr std::uint64_t kHandshakeFixed = 68;
}  // namespace

bool trace_check(const HandshakeTrace& t) {
  return t.init < t.rf_ready_read && t.rf_ready_read < t.cnt_en_start &&
         t.cnt_done == t.cnt_en_start + (kSerialPhase - 1) &&
         t.accel_valid == t.cnt_done + 1 &&
         t.accel_ready == t.accel_valid + t.latency &&
         t.rf_wreq > t.accel_ready &&
         t.writeback_done == t.rf_wreq + kSerialPhase &&
         t.writeback_done - t.init + 1 == kHandshakeFixed + t.latency;
}

}  // namespace flexsvm::coresim
