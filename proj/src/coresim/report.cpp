// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "flexsvm/coresim.hpp"

namespace flexsvm::coresim {

std::string to_text(const SimReport& r) {
  std::string out;
  auto line = [&out](std::string_view key, auto value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  line("total_cycles", r.total_cycles);
  line("instructions", r.instructions);
  line("fetch_accesses", r.fetch_accesses);
  line("data_reads", r.data_reads);
  line("data_writes", r.data_writes);
  line("data_mem_accesses", r.data_mem_accesses());
  line("memory_cycles", r.memory_cycles);
  line("custom_ops", r.custom_ops);
  line("predicted_class", r.predicted_class ? fmt::format("{}", *r.predicted_class) : "none");
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    out += fmt::format("output.{}: {:#010x}\n", i, r.outputs[i]);
  }
  for (unsigned i = 1; i < r.regs.size(); ++i) {
    if (r.regs[i] != 0) out += fmt::format("reg.x{}: {:#010x}\n", i, r.regs[i]);
  }
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    const HandshakeTrace& t = r.traces[i];
    out += fmt::format(
        "trace.{}: pc={:#x} funct3={} latency={} init={} rf_ready_read={} cnt_en_start={} "
        "cnt_done={} accel_valid={} accel_ready={} rf_wreq={} writeback_done={}\n",
        i, t.pc, t.funct3, t.latency, t.init, t.rf_ready_read, t.cnt_en_start, t.cnt_done,
        t.accel_valid, t.accel_ready, t.rf_wreq, t.writeback_done);
  }
  return out;
}

}  // namespace flexsvm::coresim
