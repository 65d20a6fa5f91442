// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flexsvm/accel.hpp"

/// Linear SVM training, min-max normalization, uniform quantization and
/// packing into accelerator operand words.
namespace flexsvm::mlkit {

using Matrix = std::vector<std::vector<double>>;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme : std::uint8_t { OvR, OvO };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

/// Classifiers a scheme needs for m classes: m or m(m-1)/2.
std::size_t classifier_count(Scheme s, std::size_t num_classes);

/// OvO pairs in (0,1),(0,2),...,(m-2,m-1) order.
std::vector<std::pair<int, int>> ovo_pairs(std::size_t num_classes);

// ---------------------------------------------------------------- data

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;  // index = class ID
  Matrix features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return feature_names.size(); }
  std::size_t num_classes() const { return class_names.size(); }
};

struct CsvOptions {
  bool header = true;
  int label_column = -1;  // negative counts from the end
  std::vector<std::string> drop_columns;  // by header name or decimal index
  char delimiter = ',';
};

/// Class IDs are assigned in sorted label order (numeric order when every
/// label parses as a number).
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::string_view text, const CsvOptions& options = {},
                  std::string name = "inline");

/// mt19937_64 with hand-rolled draws so sequences match across standard
/// libraries (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  std::uint64_t below(std::uint64_t n);  // [0, n), unbiased
  double normal();

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffled split; the test part has ceil(test_fraction * n) samples.
Split split_train_test(std::size_t n, double test_fraction, std::uint64_t seed);

Matrix select_rows(const Matrix& m, std::span<const std::size_t> idx);
std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> idx);

class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> lo, std::vector<double> hi);

  /// Column min/max of the training rows. Throws DataError when empty.
  static Normalizer fit(const Matrix& train);

  /// Maps to [0, 1] with the fitted range; clamps outside values and
  /// sends constant columns to 0.
  std::vector<double> apply(std::span<const double> row) const;
  Matrix apply(const Matrix& rows) const;

  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  std::size_t dims() const { return min_.size(); }

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

// ------------------------------------------------------------- training

struct Classifier {
  std::vector<double> w;
  double b = 0.0;
  int pos = 0;   // class scored positive
  int neg = -1;  // OvO second class; -1 for OvR

  double score(std::span<const double> x) const;
};

struct FloatModel {
  Scheme scheme = Scheme::OvR;
  std::size_t num_classes = 0;
  std::size_t dims = 0;
  std::vector<Classifier> classifiers;

  std::vector<double> scores(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
};

/// OvR: first maximum wins. OvO: score >= 0 votes for the first class of
/// the pair; ties go to the smallest class.
int decide(Scheme scheme, std::size_t num_classes, std::span<const double> scores);

enum class Loss : std::uint8_t { Hinge, SquaredHinge };

struct TrainParams {
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0};
  unsigned folds = 5;
  unsigned max_epochs = 300;
  double tol = 1e-4;  // relative objective change between epochs
  Loss loss = Loss::Hinge;
  std::uint64_t seed = 1;
};

struct BinaryFit {
  std::vector<double> w;
  double b = 0.0;
  double objective = 0.0;
  unsigned epochs = 0;
  bool converged = false;
};

/// Pegasos on  lambda/2 |(w,b)|^2 + mean loss,  lambda = 1/(C n), with the
/// bias as an extra constant feature (regularized like the weights).
/// Returns the averaged iterate with the lowest objective seen.
BinaryFit train_binary(const Matrix& x, std::span<const int> y, double c,
                       const TrainParams& params, std::uint64_t seed);

double accuracy(const FloatModel& model, const Matrix& x, std::span<const int> labels);

struct TrainResult {
  FloatModel model;
  double c = 0.0;
  std::vector<double> cv_accuracy;  // per grid entry
  std::vector<std::string> warnings;
};

/// Trains every binary classifier of the scheme with a fixed C.
TrainResult train_fixed(const Matrix& x, std::span<const int> labels, std::size_t num_classes,
                        Scheme scheme, double c, const TrainParams& params);

/// Picks C from the grid by k-fold cross-validation on the training data
/// (first best wins), then refits on all of it.
TrainResult train(const Matrix& x, std::span<const int> labels, std::size_t num_classes,
                  Scheme scheme, const TrainParams& params);

// ---------------------------------------------------------- quantization

inline constexpr int kFeatureMax = 15;

std::int32_t round_half_away(double v);

/// round(15 x) on the clamped value.
std::uint8_t quantize_feature(double x);
std::vector<std::uint8_t> quantize_features(std::span<const double> x);

struct QuantizedClassifier {
  std::vector<std::int32_t> w;
  std::int32_t b = 0;
  int pos = 0;
  int neg = -1;

  /// Sum W_i X_i + 15 B.
  std::int64_t score(std::span<const std::uint8_t> x) const;
};

struct QuantizedModel {
  Scheme scheme = Scheme::OvR;
  unsigned bits = 4;
  std::size_t num_classes = 0;
  std::size_t dims = 0;
  double scale = 0.0;  // s_w: real weight ~ W * s_w
  std::vector<QuantizedClassifier> classifiers;

  accel::WeightMode mode() const { return accel::mode_for_bits(bits); }
  std::int32_t qmax() const { return (std::int32_t{1} << (bits - 1)) - 1; }
  std::vector<std::int64_t> scores(std::span<const std::uint8_t> x) const;
  int predict(std::span<const std::uint8_t> x) const;
};

/// Global symmetric scale s_w = max(max|w|, max|b|) / (2^(n-1) - 1).
/// Throws DataError for an all-zero model, std::invalid_argument for bits.
QuantizedModel quantize(const FloatModel& model, unsigned bits);

// --------------------------------------------------------------- packing

/// ceil((d + 1) / lanes): the bias rides as a trailing (15, B) pair.
std::size_t words_per_classifier(std::size_t dims, accel::WeightMode mode);

std::vector<std::uint32_t> pack_features(std::span<const std::uint8_t> x, accel::WeightMode mode);
std::vector<std::uint32_t> pack_weights(const QuantizedClassifier& c, accel::WeightMode mode);

/// Inverse of pack_features: the d features, then the bias feature.
std::vector<std::uint8_t> unpack_features(std::span<const std::uint32_t> words, std::size_t dims,
                                          accel::WeightMode mode);
/// Inverse of pack_weights: the d weights, then B.
std::vector<std::int32_t> unpack_weights(std::span<const std::uint32_t> words, std::size_t dims,
                                         accel::WeightMode mode);

// -------------------------------------------------------------- archives

void save_model(std::ostream& out, const FloatModel& model, const Normalizer& norm);
void save_model(std::ostream& out, const QuantizedModel& model, const Normalizer& norm);

struct FloatArchive {
  FloatModel model;
  Normalizer norm;
};

struct QuantizedArchive {
  QuantizedModel model;
  Normalizer norm;
};

FloatArchive load_float_model(std::istream& in);
QuantizedArchive load_quantized_model(std::istream& in);

void save_model_file(const std::filesystem::path& path, const FloatModel& m, const Normalizer& n);
void save_model_file(const std::filesystem::path& path, const QuantizedModel& m,
                     const Normalizer& n);
FloatArchive load_float_model_file(const std::filesystem::path& path);
QuantizedArchive load_quantized_model_file(const std::filesystem::path& path);

}  // namespace flexsvm::mlkit
