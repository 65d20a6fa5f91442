// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <fmt/format.h>

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

namespace {

std::string_view policy_name(coresim::FetchPolicy p) {
  return p == coresim::FetchPolicy::FetchIsMemRead ? "fetch_is_mem_read" : "fetch_free";
}

CellResult run_anchor(const MatrixConfig& cfg) {
  const MatrixReport r = run_matrix(cfg);
  if (r.cells.size() != 1) throw std::logic_error("anchor run must produce exactly one cell");
  if (!r.cells.front().ok) {
    throw mlkit::DataError(fmt::format("anchor {} failed: {}", r.cells.front().key.str(),
                                       r.cells.front().error));
  }
  return r.cells.front();
}

}  // namespace

Calibration calibrate(const DatasetSpec& dataset, mlkit::Scheme scheme, unsigned bits,
                      double target_cycles, const MatrixConfig& base) {
  if (!(target_cycles > 0)) throw std::invalid_argument("target cycle count must be positive");
  Calibration cal;
  cal.anchor = {dataset.name, scheme, bits};
  cal.target_cycles = target_cycles;

  MatrixConfig cfg = base;
  cfg.datasets = {dataset};
  cfg.schemes = {scheme};
  cfg.bits = {bits};
  cfg.sim.record_traces = false;

  double best = INFINITY;
  for (auto policy : {coresim::FetchPolicy::FetchIsMemRead, coresim::FetchPolicy::FetchFree}) {
    MatrixConfig run = cfg;
    run.sim.mem.fetch_policy = policy;
    const CellResult raw = run_anchor(run);

    CalibrationCandidate c;
    c.policy = policy;
    c.raw_cycles = raw.accel_cycles;
    c.instructions = raw.accel_instructions;
    const double gap = target_cycles - static_cast<double>(raw.accel_cycles);
    c.extra_exec = std::max<std::int64_t>(
        0, std::llround(gap / static_cast<double>(std::max<std::uint64_t>(1, c.instructions))));

    for (auto& e : run.sim.cost.base_exec) e += static_cast<std::uint32_t>(c.extra_exec);
    c.calibrated_cycles = c.extra_exec == 0 ? raw.accel_cycles : run_anchor(run).accel_cycles;
    c.rel_error = (static_cast<double>(c.calibrated_cycles) - target_cycles) / target_cycles;

    if (std::abs(c.rel_error) < best) {
      best = std::abs(c.rel_error);
      cal.chosen = cal.candidates.size();
      cal.mem = run.sim.mem;
      cal.cost = run.sim.cost;
    }
    cal.candidates.push_back(c);
  }
  return cal;
}

std::string format_calibration(const Calibration& cal) {
  std::string out = fmt::format("anchor {} target {:.0f} accelerated cycles (test-set total)\n",
                                cal.anchor.str(), cal.target_cycles);
  for (std::size_t i = 0; i < cal.candidates.size(); ++i) {
    const auto& c = cal.candidates[i];
    out += fmt::format(
        "  {:<18} raw {:>10} instr {:>8} extra_exec {:>4} calibrated {:>10} error {:>+7.2f}%{}\n",
        policy_name(c.policy), c.raw_cycles, c.instructions, c.extra_exec, c.calibrated_cycles,
        100.0 * c.rel_error, i == cal.chosen ? "  <- chosen" : "");
  }
  return out;
}

std::vector<Prediction> predictions(const MatrixReport& report, const ReferenceTable& reference,
                                    double band) {
  std::vector<Prediction> out;
  for (const auto& r : reference.rows) {
    const CellResult* m = report.find(r.key);
    if (m == nullptr || !m->ok) continue;
    Prediction p;
    p.key = r.key;
    p.measured_mcycles = static_cast<double>(m->accel_cycles) / 1e6;
    p.ref_mcycles = r.accel_mcycles;
    p.ratio = p.measured_mcycles / p.ref_mcycles;
    p.within_band = p.ratio <= band && p.ratio >= 1.0 / band;
    out.push_back(p);
  }
  return out;
}

}  // namespace flexsvm::bench
