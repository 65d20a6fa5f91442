// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include "CLI11.hpp"

#include "flexsvm/bench.hpp"

namespace fs = std::filesystem;
using namespace flexsvm;

namespace {

#ifndef FLEXSVM_DATA_DIR
#define FLEXSVM_DATA_DIR "data"
#endif

struct Common {
  std::string catalog = std::string(FLEXSVM_DATA_DIR) + "/datasets.json";
  std::string reference = std::string(FLEXSVM_DATA_DIR) + "/reference/table1.csv";
  std::string fetch = "mem";
  std::uint64_t seed = 1;
  std::vector<std::uint32_t> latency;  // per accelerator op, optional
  std::int64_t extra_exec = 0;
};

coresim::FetchPolicy parse_fetch(const std::string& s) {
  if (s == "mem") return coresim::FetchPolicy::FetchIsMemRead;
  if (s == "free") return coresim::FetchPolicy::FetchFree;
  throw CLI::ValidationError("--fetch", "expected 'mem' or 'free'");
}

svmgen::InferenceConfig sim_config(const Common& c) {
  svmgen::InferenceConfig cfg;
  cfg.mem.fetch_policy = parse_fetch(c.fetch);
  for (auto& e : cfg.cost.base_exec) e = static_cast<std::uint32_t>(std::max<std::int64_t>(1, e + c.extra_exec));
  if (!c.latency.empty()) {
    if (c.latency.size() != isa::kNumAccelOps) {
      throw CLI::ValidationError("--latency", fmt::format("expects {} values", isa::kNumAccelOps));
    }
    for (std::size_t i = 0; i < c.latency.size(); ++i) cfg.latency.cycles[i] = c.latency[i];
  }
  return cfg;
}

void add_common(CLI::App* app, Common& c, bool sim) {
  app->add_option("--catalog", c.catalog, "dataset catalog (JSON)");
  app->add_option("--seed", c.seed, "training seed");
  if (sim) {
    app->add_option("--fetch", c.fetch, "instruction fetch cost: mem or free")
        ->check(CLI::IsMember({"mem", "free"}));
    app->add_option("--latency", c.latency, "accelerator latency per op id 0..6");
    app->add_option("--extra-exec", c.extra_exec, "cycles added to every base execute cost");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
  out << text;
}

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexsvm: SVM co-processor simulator and benchmark harness"};
  app.require_subcommand(1);
  Common common;

  // train
  auto* train = app.add_subcommand("train", "train a float SVM model on a catalog dataset");
  add_common(train, common, false);
  std::string dataset;
  std::string scheme = "ovr";
  std::string out_path;
  double fixed_c = 0;
  train->add_option("--dataset", dataset, "catalog dataset name")->required();
  train->add_option("--scheme", scheme, "ovr or ovo")->check(CLI::IsMember({"ovr", "ovo"}));
  train->add_option("--C", fixed_c, "fixed regularization (skips the grid search)");
  train->add_option("-o,--out", out_path, "model archive to write")->required();

  // quantize
  auto* quant = app.add_subcommand("quantize", "quantize a float model archive");
  std::string model_path;
  unsigned bits = 4;
  quant->add_option("--model", model_path, "float model archive")->required();
  quant->add_option("--bits", bits, "weight width")->check(CLI::IsMember({4, 8, 16}));
  quant->add_option("-o,--out", out_path, "quantized archive to write")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one inference program on the core model");
  add_common(simulate, common, true);
  std::string variant = "accel";
  std::string features;
  std::string program_path;
  std::string data_path;
  std::string emit_asm;
  std::string emit_data;
  int sample = -1;
  bool traces = false;
  simulate->add_option("--model", model_path, "quantized model archive");
  simulate->add_option("--variant", variant, "accel or baseline")
      ->check(CLI::IsMember({"accel", "baseline"}));
  simulate->add_option("--features", features, "raw feature values, comma separated");
  simulate->add_option("--dataset", dataset, "catalog dataset for --sample");
  simulate->add_option("--sample", sample, "index into the dataset's test split");
  simulate->add_option("--program", program_path, "run a disassembly file instead of a model");
  simulate->add_option("--data", data_path, "data image for --program");
  simulate->add_option("--emit-asm", emit_asm, "write the generated program text");
  simulate->add_option("--emit-data", emit_data, "write the generated data image");
  simulate->add_flag("--traces", traces, "include handshake traces in the report");

  // matrix
  auto* matrix = app.add_subcommand("matrix", "run the full experiment matrix");
  add_common(matrix, common, true);
  std::vector<std::string> datasets;
  std::vector<std::string> schemes{"ovr", "ovo"};
  std::vector<unsigned> widths{4, 8, 16};
  std::string csv_path;
  unsigned jobs = 1;
  for (auto* sc : {matrix}) {
    sc->add_option("--datasets", datasets, "subset of catalog datasets");
    sc->add_option("--schemes", schemes, "schemes")->check(CLI::IsMember({"ovr", "ovo"}));
    sc->add_option("--bits", widths, "weight widths")->check(CLI::IsMember({4, 8, 16}));
    sc->add_option("--jobs", jobs, "parallel (dataset, scheme) jobs");
    sc->add_option("--csv", csv_path, "write the report as CSV");
    sc->add_option("--reference", common.reference, "reference table CSV");
  }

  // compare
  auto* cmp = app.add_subcommand("compare", "compare a matrix report with the reference table");
  std::string report_path;
  bench::Tolerances tol;
  cmp->add_option("--report", report_path, "matrix CSV written by 'matrix --csv'")->required();
  cmp->add_option("--reference", common.reference, "reference table CSV");
  cmp->add_option("--accuracy-points", tol.accuracy_points, "accuracy tolerance");
  cmp->add_option("--speedup-ratio", tol.speedup_ratio, "speedup band factor");
  cmp->add_flag("--gate-ovo", tol.gate_ovo_accuracy, "also gate OvO accuracy");
  cmp->add_flag("!--no-gate-speedup", tol.gate_speedup, "report speedups without gating");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "fit the cost model to one anchor configuration");
  add_common(cal, common, false);
  std::string anchor = "BS";
  double target = 0;
  double band = 2.0;
  bool apply = false;
  cal->add_option("--dataset", anchor, "anchor dataset");
  cal->add_option("--scheme", scheme, "anchor scheme")->check(CLI::IsMember({"ovr", "ovo"}));
  cal->add_option("--bits", bits, "anchor width")->check(CLI::IsMember({4, 8, 16}));
  cal->add_option("--target", target, "target accelerated cycles (default: reference table)");
  cal->add_option("--reference", common.reference, "reference table CSV");
  cal->add_flag("--predict", apply, "run the matrix with the fitted model and report predictions");
  cal->add_option("--band", band, "prediction band factor");
  cal->add_option("--jobs", jobs, "parallel jobs for --predict");
  cal->add_option("--csv", csv_path, "write the calibrated matrix as CSV (with --predict)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto catalog = bench::load_catalog(common.catalog);
      const auto p = bench::prepare(bench::find_dataset(catalog, dataset));
      mlkit::TrainParams params;
      params.seed = common.seed;
      if (fixed_c > 0) params.c_grid = {fixed_c};
      const auto s = mlkit::scheme_from_string(scheme);
      const auto res = mlkit::train(p.x_train, p.y_train, p.data.num_classes(), s, params);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      mlkit::save_model_file(out_path, res.model, p.norm);
      fmt::print("{} {}: C={} train {:.1f}% test {:.1f}% ({} train / {} test)\n", dataset, scheme,
                 res.c, mlkit::accuracy(res.model, p.x_train, p.y_train),
                 mlkit::accuracy(res.model, p.x_test, p.y_test), p.x_train.size(), p.x_test.size());
      return 0;
    }

    if (*quant) {
      const auto a = mlkit::load_float_model_file(model_path);
      const auto q = mlkit::quantize(a.model, bits);
      mlkit::save_model_file(out_path, q, a.norm);
      fmt::print("{}-bit model, scale {:.6g}, {} classifiers\n", q.bits, q.scale,
                 q.classifiers.size());
      return 0;
    }

    if (*simulate) {
      auto cfg = sim_config(common);
      cfg.record_traces = traces;
      coresim::SimOptions opts;
      opts.record_traces = traces;
      coresim::Simulator sim(cfg.mem, cfg.cost, opts);

      if (!program_path.empty()) {
        if (data_path.empty()) throw CLI::ValidationError("--data", "required with --program");
        accel::SvmAccelerator acc(cfg.latency);
        sim.attach(acc);
        std::cout << coresim::to_text(sim.run(coresim::load_program(program_path, data_path)));
        return 0;
      }
      if (model_path.empty()) throw CLI::ValidationError("--model", "or --program is required");
      const auto a = mlkit::load_quantized_model_file(model_path);
      std::vector<std::uint8_t> x;
      if (!features.empty()) {
        x = mlkit::quantize_features(a.norm.apply(parse_values(features)));
      } else if (sample >= 0 && !dataset.empty()) {
        const auto catalog = bench::load_catalog(common.catalog);
        const auto p = bench::prepare(bench::find_dataset(catalog, dataset));
        if (static_cast<std::size_t>(sample) >= p.q_test.size()) {
          throw CLI::ValidationError("--sample", fmt::format("test split has {} samples", p.q_test.size()));
        }
        x = mlkit::quantize_features(a.norm.apply(p.data.features[p.split.test[static_cast<std::size_t>(sample)]]));
      } else {
        throw CLI::ValidationError("--features", "or --dataset with --sample is required");
      }
      const auto v = variant == "accel" ? svmgen::Variant::Accel : svmgen::Variant::Baseline;
      const auto prog = v == svmgen::Variant::Accel ? svmgen::gen_accel(a.model, x)
                                                    : svmgen::gen_baseline(a.model, x);
      if (!emit_asm.empty()) write_text(emit_asm, isa::disassemble_program(prog.text));
      if (!emit_data.empty()) coresim::write_data_image(emit_data, prog.data);
      const auto res = svmgen::run_inference(a.model, x, v, cfg);
      std::cout << coresim::to_text(res.report);
      return 0;
    }

    auto build_matrix = [&] {
      bench::MatrixConfig cfg;
      const auto catalog = bench::load_catalog(common.catalog);
      if (datasets.empty()) {
        cfg.datasets = catalog;
      } else {
        for (const auto& d : datasets) cfg.datasets.push_back(bench::find_dataset(catalog, d));
      }
      cfg.schemes.clear();
      for (const auto& s : schemes) cfg.schemes.push_back(mlkit::scheme_from_string(s));
      cfg.bits = widths;
      cfg.train.seed = common.seed;
      cfg.sim = sim_config(common);
      cfg.jobs = jobs;
      return cfg;
    };

    if (*matrix) {
      const auto cfg = build_matrix();
      const auto report = bench::run_matrix(cfg);
      std::unique_ptr<bench::ReferenceTable> ref;
      if (fs::exists(common.reference)) {
        ref = std::make_unique<bench::ReferenceTable>(bench::load_reference(common.reference));
      }
      std::cout << bench::format_table(report, ref.get());
      if (!csv_path.empty()) write_text(csv_path, bench::to_csv(report));
      bool bad = false;
      for (const auto& c : report.cells) {
        if (!c.ok || c.prediction_mismatches != 0 || c.trace_failures != 0) bad = true;
        for (const auto& w : c.warnings) std::cerr << c.key.str() << ": warning: " << w << '\n';
      }
      return bad ? 1 : 0;
    }

    if (*cmp) {
      std::ifstream in(report_path);
      if (!in) throw std::runtime_error(fmt::format("cannot open {}", report_path));
      std::stringstream ss;
      ss << in.rdbuf();
      const auto c = bench::compare(bench::from_csv(ss.str()), bench::load_reference(common.reference), tol);
      std::cout << bench::format_comparison(c);
      return c.hard_failure() ? 1 : 0;
    }

    if (*cal) {
      const auto ref = bench::load_reference(common.reference);
      bench::ConfigKey key{anchor, mlkit::scheme_from_string(scheme), bits};
      if (target <= 0) {
        const auto* row = ref.find(key);
        if (row == nullptr) throw std::runtime_error(fmt::format("{} not in the reference table", key.str()));
        target = row->accel_mcycles * 1e6;
      }
      auto cfg = build_matrix();
      const auto catalog = bench::load_catalog(common.catalog);
      const auto c = bench::calibrate(bench::find_dataset(catalog, anchor), key.scheme, bits, target, cfg);
      std::cout << bench::format_calibration(c);
      if (apply) {
        cfg.sim.mem = c.mem;
        cfg.sim.cost = c.cost;
        const auto report = bench::run_matrix(cfg);
        if (!csv_path.empty()) write_text(csv_path, bench::to_csv(report));
        std::size_t inside = 0;
        const auto preds = bench::predictions(report, ref, band);
        for (const auto& p : preds) {
          fmt::print("{:<18} predicted {:>8.3f} M  reference {:>6.2f} M  ratio {:>5.2f}  {}\n",
                     p.key.str(), p.measured_mcycles, p.ref_mcycles, p.ratio,
                     p.within_band ? "inside" : "outside");
          inside += p.within_band ? 1 : 0;
        }
        fmt::print("{} of {} predictions within {}x\n", inside, preds.size(), band);
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "flexsvm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
