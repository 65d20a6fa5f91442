// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <future>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "flexsvm/bench.hpp"

namespace flexsvm::bench {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ull;
  return h;
}

double pct(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

CellResult run_cell(const PreparedData& p, const mlkit::TrainResult& trained, unsigned bits,
                    const MatrixConfig& cfg) {
  CellResult cell;
  cell.key = {p.data.name, trained.model.scheme, bits};
  cell.n_train = p.x_train.size();
  cell.n_test = p.x_test.size();
  cell.dims = p.data.dims();
  cell.classifiers = trained.model.classifiers.size();
  cell.c = trained.c;
  cell.warnings = trained.warnings;
  cell.float_accuracy = mlkit::accuracy(trained.model, p.x_test, p.y_test);

  const mlkit::QuantizedModel q = mlkit::quantize(trained.model, bits);
  const std::size_t expected_ops = svmgen::accel_custom_op_count(q);

  std::uint64_t correct = 0;
  std::uint64_t agree = 0;
  std::uint64_t weight_agree = 0;
  std::uint64_t base_mem = 0;
  std::uint64_t accel_mem = 0;
  for (std::size_t i = 0; i < p.q_test.size(); ++i) {
    const auto& x = p.q_test[i];
    const auto acc = svmgen::run_inference(q, x, svmgen::Variant::Accel, cfg.sim);
    const auto base = svmgen::run_inference(q, x, svmgen::Variant::Baseline, cfg.sim);
    const int host = q.predict(x);

    cell.accel_cycles += acc.report.total_cycles;
    cell.base_cycles += base.report.total_cycles;
    accel_mem += acc.report.memory_cycles;
    base_mem += base.report.memory_cycles;
    cell.custom_ops += acc.report.custom_ops;
    cell.accel_instructions += acc.report.instructions - acc.report.custom_ops;
    cell.custom_op_mismatches += acc.report.custom_ops == expected_ops ? 0 : 1;
    cell.saturations += acc.saturations;
    for (const auto& t : acc.report.traces) {
      ++cell.traces_checked;
      cell.trace_failures += coresim::trace_check(t) ? 0 : 1;
    }
    cell.prediction_mismatches += acc.predicted == base.predicted ? 0 : 1;
    cell.integer_mismatches += acc.predicted == host ? 0 : 1;
    correct += acc.predicted == p.y_test[i] ? 1 : 0;
    agree += host == trained.model.predict(p.x_test[i]) ? 1 : 0;
    std::vector<double> xq(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) xq[j] = x[j] / double{mlkit::kFeatureMax};
    weight_agree += host == trained.model.predict(xq) ? 1 : 0;
  }

  const auto n = static_cast<std::uint64_t>(p.q_test.size());
  cell.accuracy = pct(correct, n);
  cell.argmax_agreement = pct(agree, n);
  cell.weight_agreement = pct(weight_agree, n);
  cell.accel_cycles_mean = static_cast<double>(cell.accel_cycles) / static_cast<double>(n);
  cell.base_cycles_mean = static_cast<double>(cell.base_cycles) / static_cast<double>(n);
  cell.accel_mj = cfg.energy.energy_mj(cell.accel_cycles_mean);
  cell.base_mj = cfg.energy.energy_mj(cell.base_cycles_mean);
  cell.speedup = static_cast<double>(cell.base_cycles) / static_cast<double>(cell.accel_cycles);
  cell.energy_reduction = 100.0 * (1.0 - cell.accel_mj / cell.base_mj);
  cell.accel_memory_share = pct(accel_mem, cell.accel_cycles);
  cell.base_memory_share = pct(base_mem, cell.base_cycles);
  cell.ok = true;
  return cell;
}

std::vector<CellResult> run_group(const std::shared_ptr<const PreparedData>& p,
                                  mlkit::Scheme scheme, const MatrixConfig& cfg) {
  std::vector<CellResult> out;
  std::optional<mlkit::TrainResult> trained;
  std::string train_error;
  try {
    trained = train_group(*p, scheme, cfg);
  } catch (const std::exception& e) {
    train_error = e.what();
  }
  for (unsigned bits : cfg.bits) {
    if (!trained) {
      CellResult c;
      c.key = {p->data.name, scheme, bits};
      c.error = train_error;
      out.push_back(std::move(c));
      continue;
    }
    try {
      out.push_back(run_cell(*p, *trained, bits, cfg));
    } catch (const std::exception& e) {
      CellResult c;
      c.key = {p->data.name, scheme, bits};
      c.error = e.what();
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

mlkit::TrainResult train_group(const PreparedData& p, mlkit::Scheme scheme,
                               const MatrixConfig& cfg) {
  mlkit::TrainParams params = cfg.train;
  params.seed = cfg.train.seed ^ fnv1a(p.data.name) ^ (scheme == mlkit::Scheme::OvR ? 0x0Fu : 0xF0u);
  return mlkit::train(p.x_train, p.y_train, p.data.num_classes(), scheme, params);
}

const CellResult* MatrixReport::find(const ConfigKey& key) const {
  const auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& c) { return c.key == key; });
  return it == cells.end() ? nullptr : &*it;
}

MatrixReport run_matrix(const MatrixConfig& cfg) {
  MatrixReport report;
  std::vector<std::function<std::vector<CellResult>()>> tasks;
  for (const auto& spec : cfg.datasets) {
    std::shared_ptr<const PreparedData> p;
    try {
      p = std::make_shared<const PreparedData>(prepare(spec, cfg.test_fraction));
    } catch (const std::exception& e) {
      for (auto scheme : cfg.schemes) {
        for (unsigned bits : cfg.bits) {
          CellResult c;
          c.key = {spec.name, scheme, bits};
          c.error = e.what();
          report.cells.push_back(std::move(c));
        }
      }
      continue;
    }
    for (auto scheme : cfg.schemes) {
      tasks.emplace_back([p, scheme, &cfg] { return run_group(p, scheme, cfg); });
    }
  }

  const std::size_t jobs = std::max(1u, cfg.jobs);
  for (std::size_t start = 0; start < tasks.size(); start += jobs) {
    std::vector<std::future<std::vector<CellResult>>> running;
    for (std::size_t i = start; i < std::min(tasks.size(), start + jobs); ++i) {
      running.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, tasks[i]));
    }
    for (auto& f : running) {
      auto cells = f.get();
      report.cells.insert(report.cells.end(), cells.begin(), cells.end());
    }
  }
  std::sort(report.cells.begin(), report.cells.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  return report;
}

std::string format_table(const MatrixReport& report, const ReferenceTable* reference) {
  std::string out = fmt::format(
      "{:<7} {:<4} {:>4} {:>6} {:>6} {:>12} {:>10} {:>11} {:>9} {:>8} {:>7} {:>6}", "dataset",
      "scm", "bits", "acc%", "ref%", "base_cyc/inf", "base_mJ", "accel_cyc/inf", "accel_mJ",
      "speedup", "ref_x", "red%");
  out += "\n";
  for (const auto& c : report.cells) {
    if (!c.ok) {
      out += fmt::format("{:<7} {:<4} {:>4} error: {}\n", c.key.dataset,
                         mlkit::to_string(c.key.scheme), c.key.bits, c.error);
      continue;
    }
    const ReferenceRow* r = reference != nullptr ? reference->find(c.key) : nullptr;
    out += fmt::format(
        "{:<7} {:<4} {:>4} {:>6.1f} {:>6} {:>12.0f} {:>10.3f} {:>11.0f} {:>9.3f} {:>8.1f} {:>7} "
        "{:>6.1f}\n",
        c.key.dataset, mlkit::to_string(c.key.scheme), c.key.bits, c.accuracy,
        r ? fmt::format("{:.1f}", r->accuracy) : "-", c.base_cycles_mean, c.base_mj,
        c.accel_cycles_mean, c.accel_mj, c.speedup, r ? fmt::format("{:.1f}", r->speedup) : "-",
        c.energy_reduction);
  }
  return out;
}

std::string to_csv(const MatrixReport& report) {
  std::string out =
      "dataset,scheme,bits,ok,n_train,n_test,dims,classifiers,c,float_accuracy,accuracy,"
      "argmax_agreement,weight_agreement,base_cycles_total,accel_cycles_total,base_cycles_mean,"
      "accel_cycles_mean,"
      "base_mj,accel_mj,speedup,energy_reduction,base_memory_share,accel_memory_share,"
      "custom_ops,prediction_mismatches,integer_mismatches,trace_failures,saturations,error\n";
  for (const auto& c : report.cells) {
    out += fmt::format(
        "{},{},{},{},{},{},{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{:.2f},{:.2f},{:.6f},{:.6f},{:.4f},"
        "{:.4f},{:.3f},{:.3f},{},{},{},{},{},\"{}\"\n",
        c.key.dataset, mlkit::to_string(c.key.scheme), c.key.bits, c.ok ? 1 : 0, c.n_train,
        c.n_test, c.dims, c.classifiers, c.c, c.float_accuracy, c.accuracy, c.argmax_agreement,
        c.weight_agreement,
        c.base_cycles, c.accel_cycles, c.base_cycles_mean, c.accel_cycles_mean, c.base_mj,
        c.accel_mj, c.speedup, c.energy_reduction, c.base_memory_share, c.accel_memory_share,
        c.custom_ops, c.prediction_mismatches, c.integer_mismatches, c.trace_failures,
        c.saturations, c.error);
  }
  return out;
}

MatrixReport from_csv(std::string_view text) {
  MatrixReport report;
  std::istringstream in{std::string(text)};
  std::string line;
  std::getline(in, line);
  if (line.rfind("dataset,scheme,bits,ok,", 0) != 0) throw mlkit::DataError("not a matrix report CSV");
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (f.size() < 28 && std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 28) throw mlkit::DataError(fmt::format("matrix report line {}: short row", no));
    auto num = [&](std::size_t i) {
      try {
        return std::stod(f[i]);
      } catch (const std::exception&) {
        throw mlkit::DataError(fmt::format("matrix report line {}: bad field {}", no, i + 1));
      }
    };
    CellResult c;
    c.key = {f[0], mlkit::scheme_from_string(f[1]), static_cast<unsigned>(num(2))};
    c.ok = f[3] == "1";
    c.n_train = static_cast<std::size_t>(num(4));
    c.n_test = static_cast<std::size_t>(num(5));
    c.dims = static_cast<std::size_t>(num(6));
    c.classifiers = static_cast<std::size_t>(num(7));
    c.c = num(8);
    c.float_accuracy = num(9);
    c.accuracy = num(10);
    c.argmax_agreement = num(11);
    c.weight_agreement = num(12);
    c.base_cycles = static_cast<std::uint64_t>(num(13));
    c.accel_cycles = static_cast<std::uint64_t>(num(14));
    c.base_cycles_mean = num(15);
    c.accel_cycles_mean = num(16);
    c.base_mj = num(17);
    c.accel_mj = num(18);
    c.speedup = num(19);
    c.energy_reduction = num(20);
    c.base_memory_share = num(21);
    c.accel_memory_share = num(22);
    c.custom_ops = static_cast<std::uint64_t>(num(23));
    c.prediction_mismatches = static_cast<std::uint64_t>(num(24));
    c.integer_mismatches = static_cast<std::uint64_t>(num(25));
    c.trace_failures = static_cast<std::uint64_t>(num(26));
    c.saturations = static_cast<std::uint64_t>(num(27));
    std::getline(ss, tok);
    if (tok.size() >= 2 && tok.front() == '"') tok = tok.substr(1, tok.size() - 2);
    c.error = tok;
    report.cells.push_back(std::move(c));
  }
  std::sort(report.cells.begin(), report.cells.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  return report;
}

}  // namespace flexsvm::bench
