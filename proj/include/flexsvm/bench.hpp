// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flexsvm/coresim.hpp"
#include "flexsvm/mlkit.hpp"
#include "flexsvm/svmgen.hpp"

/// Experiment matrix: datasets x {OvR, OvO} x {4, 8, 16} bits, with cycles,
/// energy, speedup and a comparison against the published reference table.
namespace flexsvm::bench {

struct EnergyModel {
  double f_clk_hz = 52'000.0;
  double p_core_mw = 0.94;
  double p_accel_mw = 0.224;

  /// Core and accelerator power combined; applied to both variants.
  double power_mw() const { return p_core_mw + p_accel_mw; }
  double energy_mj(double cycles) const { return cycles / f_clk_hz * power_mw(); }
};

struct ConfigKey {
  std::string dataset;
  mlkit::Scheme scheme = mlkit::Scheme::OvR;
  unsigned bits = 4;

  std::string str() const;
  friend auto operator<=>(const ConfigKey&, const ConfigKey&) = default;
};

// ------------------------------------------------------------ reference

struct ReferenceRow {
  ConfigKey key;
  double accuracy = 0;        // %
  double base_mcycles = 0;    // millions of cycles
  double base_mj = 0;
  double accel_mcycles = 0;
  double accel_mj = 0;
  double speedup = 0;
  double energy_reduction = 0;  // %
};

struct ReferenceTable {
  std::vector<ReferenceRow> rows;
  const ReferenceRow* find(const ConfigKey& key) const;
};

/// CSV with '#' comment lines and a header row.
ReferenceTable parse_reference(std::string_view text);
ReferenceTable load_reference(const std::filesystem::path& path);

struct EnergyCheck {
  ConfigKey key;
  std::string column;  // "baseline" or "accel"
  double mcycles = 0;
  double table_mj = 0;
  double model_mj = 0;
  double rel_error = 0;
  bool pass = false;
};

/// Energy of every cycle cell under `model` against the table's energy cell.
/// The baseline cell is checked once per (dataset, scheme) group.
std::vector<EnergyCheck> check_energy(const ReferenceTable& table, const EnergyModel& model,
                                      double rel_tol);

struct ConsistencyIssue {
  ConfigKey key;
  std::string what;
  double reported = 0;
  double low = 0;  // range implied by the rounded cycle cells
  double high = 0;
};

/// Speedup and energy reduction recomputed from the rounded cycle cells
/// (+-0.005 M) and compared with the reported one-decimal values.
std::vector<ConsistencyIssue> check_consistency(const ReferenceTable& table);

// -------------------------------------------------------------- catalog

struct DatasetSpec {
  std::string name;
  std::filesystem::path file;
  mlkit::CsvOptions csv;
  std::uint64_t seed = 1;
  std::string provenance;
};

/// JSON list of datasets; relative file paths resolve against the
/// catalog's directory.
std::vector<DatasetSpec> load_catalog(const std::filesystem::path& path);
const DatasetSpec& find_dataset(const std::vector<DatasetSpec>& catalog, std::string_view name);

struct PreparedData {
  mlkit::Dataset data;
  mlkit::Split split;
  mlkit::Normalizer norm;
  mlkit::Matrix x_train;  // normalized
  mlkit::Matrix x_test;
  std::vector<int> y_train;
  std::vector<int> y_test;
  std::vector<std::vector<std::uint8_t>> q_test;  // 4-bit features
};

PreparedData prepare(const DatasetSpec& spec, double test_fraction = 0.2);

// --------------------------------------------------------------- matrix

struct MatrixConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<mlkit::Scheme> schemes{mlkit::Scheme::OvR, mlkit::Scheme::OvO};
  std::vector<unsigned> bits{4, 8, 16};
  mlkit::TrainParams train{};
  double test_fraction = 0.2;
  svmgen::InferenceConfig sim{};
  EnergyModel energy{};
  unsigned jobs = 1;
};

struct CellResult {
  ConfigKey key;
  bool ok = false;
  std::string error;
  std::vector<std::string> warnings;

  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t dims = 0;
  std::size_t classifiers = 0;
  double c = 0;
  double float_accuracy = 0;  // %
  double accuracy = 0;        // quantized integer model, %
  double argmax_agreement = 0;  // % of test samples where quantized == float
  double weight_agreement = 0;  // same, float model fed the 4-bit features (X / 15)

  std::uint64_t base_cycles = 0;  // summed over the test set
  std::uint64_t accel_cycles = 0;
  double base_cycles_mean = 0;
  double accel_cycles_mean = 0;
  double base_mj = 0;   // per inference
  double accel_mj = 0;
  double speedup = 0;
  double energy_reduction = 0;  // %
  double base_memory_share = 0;   // memory cycles / total, %
  double accel_memory_share = 0;

  std::uint64_t accel_instructions = 0;  // non-custom instructions over the test set
  std::uint64_t custom_ops = 0;
  std::uint64_t custom_op_mismatches = 0;  // per-sample count != 1 + C (F + 1)
  std::uint64_t prediction_mismatches = 0;  // baseline vs accelerated
  std::uint64_t integer_mismatches = 0;     // accelerated vs host integer model
  std::uint64_t traces_checked = 0;
  std::uint64_t trace_failures = 0;
  std::uint64_t saturations = 0;
};

struct MatrixReport {
  std::vector<CellResult> cells;  // sorted by key
  const CellResult* find(const ConfigKey& key) const;
};

/// The float model run_matrix uses for one (dataset, scheme) group.
mlkit::TrainResult train_group(const PreparedData& p, mlkit::Scheme scheme,
                               const MatrixConfig& config);

/// One float model per (dataset, scheme), quantized at every bit width;
/// every test sample runs through both programs. A dataset that fails to
/// load yields error rows and the rest of the matrix still runs.
MatrixReport run_matrix(const MatrixConfig& config);

/// Aligned console table and CSV.
std::string format_table(const MatrixReport& report, const ReferenceTable* reference = nullptr);
std::string to_csv(const MatrixReport& report);
/// Reads what to_csv wrote (the fields compare and predictions use).
MatrixReport from_csv(std::string_view text);

// -------------------------------------------------------------- compare

struct Tolerances {
  double accuracy_points = 5.0;
  double speedup_ratio = 2.0;  // measured/reference within [1/r, r]
  bool gate_ovo_accuracy = false;
  bool gate_speedup = true;
};

struct CellComparison {
  ConfigKey key;
  bool present = false;  // both sides have the cell
  bool measured_ok = false;
  double accuracy = 0;
  double ref_accuracy = 0;
  double accuracy_delta = 0;
  bool accuracy_gated = false;
  bool accuracy_pass = false;
  double speedup = 0;
  double ref_speedup = 0;
  double speedup_ratio = 0;
  bool speedup_pass = false;
  bool pass = false;  // gated checks only
};

struct Comparison {
  std::vector<CellComparison> cells;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t absent = 0;
  bool hard_failure() const { return failed > 0; }
};

Comparison compare(const MatrixReport& report, const ReferenceTable& reference,
                   const Tolerances& tol = {});
std::string format_comparison(const Comparison& cmp);

// ------------------------------------------------------------ calibrate

struct CalibrationCandidate {
  coresim::FetchPolicy policy = coresim::FetchPolicy::FetchIsMemRead;
  std::uint64_t raw_cycles = 0;        // anchor total before adjustment
  std::uint64_t instructions = 0;      // non-custom instructions in the anchor
  std::int64_t extra_exec = 0;         // cycles added to every base_exec entry
  std::uint64_t calibrated_cycles = 0;
  double rel_error = 0;
};

struct Calibration {
  ConfigKey anchor;
  double target_cycles = 0;
  std::vector<CalibrationCandidate> candidates;  // one per fetch policy
  std::size_t chosen = 0;
  coresim::MemModel mem{};
  coresim::CoreCostModel cost{};
};

/// Fits a uniform extra execute cost (>= 0) per fetch policy so that the
/// anchor's accelerated total cycle count approaches `target_cycles`, and
/// keeps the policy with the smaller residual.
Calibration calibrate(const DatasetSpec& dataset, mlkit::Scheme scheme, unsigned bits,
                      double target_cycles, const MatrixConfig& base);

std::string format_calibration(const Calibration& cal);

struct Prediction {
  ConfigKey key;
  double measured_mcycles = 0;
  double ref_mcycles = 0;
  double ratio = 0;
  bool within_band = false;
};

/// Accelerated cycle totals of a (calibrated) matrix against the table.
std::vector<Prediction> predictions(const MatrixReport& report, const ReferenceTable& reference,
                                    double band = 2.0);

}  // namespace flexsvm::bench
