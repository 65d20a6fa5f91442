// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

std::string ConfigKey::str() const {
  return fmt::format("{}/{}/{}", dataset, mlkit::to_string(scheme), bits);
}

std::vector<EnergyCheck> check_energy(const ReferenceTable& table, const EnergyModel& model,
                                      double rel_tol) {
  std::vector<EnergyCheck> out;
  std::set<std::pair<std::string, mlkit::Scheme>> seen;
  auto add = [&](const ConfigKey& key, std::string column, double mcycles, double mj) {
    EnergyCheck c;
    c.key = key;
    c.column = std::move(column);
    c.mcycles = mcycles;
    c.table_mj = mj;
    c.model_mj = model.energy_mj(mcycles * 1e6);
    c.rel_error = std::abs(c.model_mj - mj) / mj;
    c.pass = c.rel_error <= rel_tol;
    out.push_back(std::move(c));
  };
  for (const auto& r : table.rows) {
    if (seen.insert({r.key.dataset, r.key.scheme}).second) {
      add(r.key, "baseline", r.base_mcycles, r.base_mj);
    }
    add(r.key, "accel", r.accel_mcycles, r.accel_mj);
  }
  return out;
}

}  // namespace flexsvm::bench
