// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "flexsvm/mlkit.hpp"

namespace flexsvm::mlkit {

double Classifier::score(std::span<const double> x) const {
  double s = b;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

std::vector<double> FloatModel::scores(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(classifiers.size());
  for (const auto& c : classifiers) out.push_back(c.score(x));
  return out;
}

int FloatModel::predict(std::span<const double> x) const {
  return decide(scheme, num_classes, scores(x));
}

int decide(Scheme scheme, std::size_t m, std::span<const double> scores) {
  if (scheme == Scheme::OvR) {
    if (scores.size() != m) throw std::invalid_argument("OvR needs one score per class");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = i;
    }
    return static_cast<int>(best);
  }
  const auto pairs = ovo_pairs(m);
  if (scores.size() != pairs.size()) throw std::invalid_argument("OvO needs one score per pair");
  std::vector<int> votes(m, 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ++votes[scores[i] >= 0.0 ? pairs[i].first : pairs[i].second];
  }
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

namespace {

double objective(const Matrix& x, std::span<const int> y, const std::vector<double>& w,
                 double lambda, Loss loss) {
  const std::size_t d = w.size() - 1;
  double norm = 0;
  for (double v : w) norm += v * v;
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = w[d];
    for (std::size_t j = 0; j < d; ++j) s += w[j] * x[i][j];
    const double slack = std::max(0.0, 1.0 - y[i] * s);
    sum += loss == Loss::Hinge ? slack : slack * slack;
  }
  return 0.5 * lambda * norm + sum / static_cast<double>(x.size());
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

BinaryFit train_binary(const Matrix& x, std::span<const int> y, double c,
                       const TrainParams& params, std::uint64_t seed) {
  if (x.size() != y.size()) throw DataError("feature/label count mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  BinaryFit fit;
  if (x.empty()) return fit;
  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  const double lambda = 1.0 / (c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);

  std::vector<double> w(d + 1, 0.0);  // last entry is the bias
  std::vector<double> avg(d + 1, 0.0);
  std::vector<double> best = w;
  double best_obj = objective(x, y, w, lambda, params.loss);
  double prev_obj = best_obj;
  std::uint64_t averaged = 0;
  unsigned stable = 0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  std::uint64_t t = 0;

  for (unsigned epoch = 1; epoch <= params.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      double s = w[d];
      for (std::size_t j = 0; j < d; ++j) s += w[j] * x[i][j];
      const double margin = y[i] * s;
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        const double g = params.loss == Loss::Hinge ? 1.0 : 2.0 * (1.0 - margin);
        const double step = eta * g * y[i];
        for (std::size_t j = 0; j < d; ++j) w[j] += step * x[i][j];
        w[d] += step;
      }
      double norm = 0;
      for (double v : w) norm += v * v;
      if (norm > radius * radius) {
        const double k = radius / std::sqrt(norm);
        for (double& v : w) v *= k;
      }
      // Average the second half onward: running mean from epoch 2.
      if (epoch > 1) {
        ++averaged;
        const double a = 1.0 / static_cast<double>(averaged);
        for (std::size_t j = 0; j <= d; ++j) avg[j] += a * (w[j] - avg[j]);
      }
    }

    const std::vector<double>& cand = averaged > 0 ? avg : w;
    const double obj = objective(x, y, cand, lambda, params.loss);
    const double cur = objective(x, y, w, lambda, params.loss);
    if (obj < best_obj) {
      best_obj = obj;
      best = cand;
    }
    if (cur < best_obj) {
      best_obj = cur;
      best = w;
    }
    fit.epochs = epoch;
    const double rel = std::abs(prev_obj - obj) / std::max(obj, 1e-12);
    prev_obj = obj;
    stable = rel < params.tol ? stable + 1 : 0;
    if (stable >= 3) {
      fit.converged = true;
      break;
    }
  }

  fit.w.assign(best.begin(), best.end() - 1);
  fit.b = best[d];
  fit.objective = best_obj;
  return fit;
}

double accuracy(const FloatModel& model, const Matrix& x, std::span<const int> labels) {
  if (x.empty()) return 0.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ok += model.predict(x[i]) == labels[i] ? 1 : 0;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(x.size());
}

TrainResult train_fixed(const Matrix& x, std::span<const int> labels, std::size_t m,
                        Scheme scheme, double c, const TrainParams& params) {
  if (x.empty()) throw DataError("empty training set");
  if (m < 2) throw DataError("need at least two classes");
  if (x.size() != labels.size()) throw DataError("feature/label count mismatch");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= m) throw DataError("label out of range");
  }

  TrainResult res;
  res.c = c;
  res.model.scheme = scheme;
  res.model.num_classes = m;
  res.model.dims = x.front().size();

  auto add = [&](const Matrix& xs, const std::vector<int>& ys, int pos, int neg) {
    const std::uint64_t k = res.model.classifiers.size();
    const BinaryFit fit = train_binary(xs, ys, c, params, mix(params.seed, k));
    if (!fit.converged) {
      res.warnings.push_back(fmt::format(
          "classifier {} ({} vs {}) did not converge in {} epochs; best iterate kept (C={})", k,
          pos, neg < 0 ? std::string("rest") : std::to_string(neg), fit.epochs, c));
    }
    res.model.classifiers.push_back({fit.w, fit.b, pos, neg});
  };

  if (scheme == Scheme::OvR) {
    for (int cls = 0; cls < static_cast<int>(m); ++cls) {
      std::vector<int> ys(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) ys[i] = labels[i] == cls ? 1 : -1;
      add(x, ys, cls, -1);
    }
  } else {
    for (const auto& [a, b] : ovo_pairs(m)) {
      Matrix xs;
      std::vector<int> ys;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == a || labels[i] == b) {
          xs.push_back(x[i]);
          ys.push_back(labels[i] == a ? 1 : -1);
        }
      }
      add(xs, ys, a, b);
    }
  }
  return res;
}

TrainResult train(const Matrix& x, std::span<const int> labels, std::size_t m, Scheme scheme,
                  const TrainParams& params) {
  if (params.c_grid.empty()) throw std::invalid_argument("empty C grid");
  const unsigned k = params.c_grid.size() == 1 ? 0 : std::max(2u, params.folds);
  std::vector<double> cv(params.c_grid.size(), 0.0);

  if (k > 0 && x.size() >= k) {
    std::vector<std::size_t> idx(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(mix(params.seed, 0xC5));
    rng.shuffle(idx);
    for (std::size_t g = 0; g < params.c_grid.size(); ++g) {
      std::size_t ok = 0;
      for (unsigned f = 0; f < k; ++f) {
        const std::size_t lo = idx.size() * f / k;
        const std::size_t hi = idx.size() * (f + 1) / k;
        std::vector<std::size_t> tr;
        std::vector<std::size_t> va(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                                    idx.begin() + static_cast<std::ptrdiff_t>(hi));
        tr.insert(tr.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(lo));
        tr.insert(tr.end(), idx.begin() + static_cast<std::ptrdiff_t>(hi), idx.end());
        const auto fold = train_fixed(select_rows(x, tr), select_labels(labels, tr), m, scheme,
                                      params.c_grid[g], params);
        for (std::size_t i : va) ok += fold.model.predict(x[i]) == labels[i] ? 1 : 0;
      }
      cv[g] = 100.0 * static_cast<double>(ok) / static_cast<double>(x.size());
    }
  }

  const std::size_t pick =
      static_cast<std::size_t>(std::max_element(cv.begin(), cv.end()) - cv.begin());
  TrainResult res = train_fixed(x, labels, m, scheme, params.c_grid[pick], params);
  res.cv_accuracy = std::move(cv);
  return res;
}

}  // namespace flexsvm::mlkit
