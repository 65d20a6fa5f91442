// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <fmt/format.h>

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

Comparison compare(const MatrixReport& report, const ReferenceTable& reference,
                   const Tolerances& tol) {
  Comparison cmp;
  for (const auto& r : reference.rows) {
    CellComparison cc;
    cc.key = r.key;
    cc.ref_accuracy = r.accuracy;
    cc.ref_speedup = r.speedup;
    const CellResult* m = report.find(r.key);
    cc.present = m != nullptr;
    if (!cc.present) {
      ++cmp.absent;
      cmp.cells.push_back(cc);
      continue;
    }
    cc.measured_ok = m->ok;
    cc.accuracy_gated = r.key.scheme == mlkit::Scheme::OvR || tol.gate_ovo_accuracy;
    if (m->ok) {
      cc.accuracy = m->accuracy;
      cc.accuracy_delta = m->accuracy - r.accuracy;
      cc.accuracy_pass = std::abs(cc.accuracy_delta) <= tol.accuracy_points + 1e-9;
      cc.speedup = m->speedup;
      cc.speedup_ratio = m->speedup / r.speedup;
      cc.speedup_pass =
          cc.speedup_ratio <= tol.speedup_ratio && cc.speedup_ratio >= 1.0 / tol.speedup_ratio;
      cc.pass = (!cc.accuracy_gated || cc.accuracy_pass) && (!tol.gate_speedup || cc.speedup_pass);
    }
    ++(cc.pass ? cmp.passed : cmp.failed);
    cmp.cells.push_back(cc);
  }
  return cmp;
}

std::string format_comparison(const Comparison& cmp) {
  std::string out = fmt::format("{:<18} {:>7} {:>7} {:>7} {:>5} {:>8} {:>8} {:>6}  {}\n", "config",
                                "acc%", "ref%", "delta", "gate", "speedup", "ref_x", "ratio",
                                "result");
  for (const auto& c : cmp.cells) {
    if (!c.present) {
      out += fmt::format("{:<18} absent from the measured report\n", c.key.str());
      continue;
    }
    if (!c.measured_ok) {
      out += fmt::format("{:<18} measurement failed  FAIL\n", c.key.str());
      continue;
    }
    out += fmt::format("{:<18} {:>7.1f} {:>7.1f} {:>+7.1f} {:>5} {:>8.1f} {:>8.1f} {:>6.2f}  {}{}{}\n",
                       c.key.str(), c.accuracy, c.ref_accuracy, c.accuracy_delta,
                       c.accuracy_gated ? "yes" : "no", c.speedup, c.ref_speedup, c.speedup_ratio,
                       c.pass ? "PASS" : "FAIL",
                       c.accuracy_gated && !c.accuracy_pass ? " accuracy" : "",
                       c.speedup_pass ? "" : " speedup");
  }
  out += fmt::format("summary: {} pass, {} fail, {} absent\n", cmp.passed, cmp.failed, cmp.absent);
  return out;
}

}  // namespace flexsvm::bench
