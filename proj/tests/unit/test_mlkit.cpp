// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "flexsvm/bench.hpp"
#include "flexsvm/mlkit.hpp"

using namespace flexsvm;
using accel::WeightMode;
using mlkit::Scheme;

namespace {

mlkit::FloatModel random_float_model(mlkit::Rng& rng, Scheme s, std::size_t m, std::size_t d) {
  mlkit::FloatModel f;
  f.scheme = s;
  f.num_classes = m;
  f.dims = d;
  const auto n = mlkit::classifier_count(s, m);
  const double spread = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
  for (std::size_t k = 0; k < n; ++k) {
    mlkit::Classifier c;
    for (std::size_t j = 0; j < d; ++j) c.w.push_back(spread * (2 * rng.uniform() - 1));
    c.b = spread * (2 * rng.uniform() - 1);
    f.classifiers.push_back(c);
  }
  return f;
}

}  // namespace

TEST_CASE("schemes") {
  CHECK(mlkit::classifier_count(Scheme::OvR, 6) == 6);
  CHECK(mlkit::classifier_count(Scheme::OvO, 3) == 3);
  CHECK(mlkit::classifier_count(Scheme::OvO, 6) == 15);
  const auto p = mlkit::ovo_pairs(4);
  REQUIRE(p.size() == 6);
  CHECK(p[0] == std::pair{0, 1});
  CHECK(p[2] == std::pair{0, 3});
  CHECK(p[5] == std::pair{2, 3});
  CHECK(mlkit::scheme_from_string("ovo") == Scheme::OvO);
  CHECK(mlkit::to_string(Scheme::OvR) == "ovr");
  CHECK_THROWS(mlkit::scheme_from_string("ova"));
}

TEST_CASE("csv parsing") {
  const auto d = mlkit::parse_csv("a,b,id,label\n1,2,9,10\n3,4,9,2\n5,6,9,10\n",
                                  {true, -1, {"id"}, ','});
  CHECK(d.dims() == 2);
  CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(d.class_names == std::vector<std::string>{"2", "10"});  // numeric order
  CHECK(d.labels == std::vector<int>{1, 0, 1});
  CHECK(d.features[1] == std::vector<double>{3, 4});

  const auto s = mlkit::parse_csv("a;1\nq;2\np;3\n", {false, 0, {}, ';'});
  CHECK(s.size() == 3);  // no header: first row is data
  CHECK_THROWS_AS(mlkit::parse_csv("a,b\n1,2\n1\n"), mlkit::DataError);
  CHECK_THROWS_AS(mlkit::parse_csv("a,b\n1,x,\n"), mlkit::DataError);
  CHECK_THROWS_AS(mlkit::parse_csv("a,b\n"), mlkit::DataError);
}

TEST_CASE("split") {
  const auto s = mlkit::split_train_test(150, 0.2, 3);
  CHECK(s.test.size() == 30);
  CHECK(s.train.size() == 120);
  std::vector<int> seen(150, 0);
  for (auto i : s.train) ++seen[i];
  for (auto i : s.test) ++seen[i];
  for (int v : seen) CHECK(v == 1);
  CHECK(mlkit::split_train_test(625, 0.2, 1).test.size() == 125);
  CHECK(mlkit::split_train_test(366, 0.2, 1).test.size() == 74);
  const auto again = mlkit::split_train_test(150, 0.2, 3);
  CHECK(again.test == s.test);
}

TEST_CASE("normalizer") {
  const auto n = mlkit::Normalizer::fit({{2, 5}, {4, 5}, {6, 5}});
  CHECK(n.apply(std::vector<double>{2, 5}) == std::vector<double>{0, 0});
  CHECK(n.apply(std::vector<double>{4, 5})[0] == doctest::Approx(0.5));
  CHECK(n.apply(std::vector<double>{6, 5})[0] == doctest::Approx(1.0));
  CHECK(n.apply(std::vector<double>{9, 1})[0] == 1.0);
  CHECK(n.apply(std::vector<double>{-1, 9})[0] == 0.0);
  CHECK(n.apply(std::vector<double>{4, 9})[1] == 0.0);  // constant column
  CHECK_THROWS_AS(mlkit::Normalizer::fit({}), mlkit::DataError);
}

TEST_CASE("rng is reproducible") {
  mlkit::Rng a(11), b(11);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  mlkit::Rng c(12);
  double sum = 0, sq = 0;
  for (int i = 0; i < 20000; ++i) {
    const double v = c.normal();
    sum += v;
    sq += v * v;
    const auto k = c.below(7);
    REQUIRE(k < 7);
  }
  CHECK(std::abs(sum / 20000) < 0.05);
  CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
}

TEST_CASE("separable toy set trains to 100%") {
  mlkit::Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    x.push_back({0.0});
    y.push_back(0);
    x.push_back({1.0});
    y.push_back(1);
  }
  mlkit::TrainParams p;
  for (Scheme s : {Scheme::OvR, Scheme::OvO}) {
    const auto r = mlkit::train(x, y, 2, s, p);
    CHECK(mlkit::accuracy(r.model, x, y) == 100.0);
    CHECK(r.cv_accuracy.size() == 4);
  }
}

TEST_CASE("non-convergence warns and keeps the best iterate") {
  mlkit::Rng rng(9);
  mlkit::Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    x.push_back({rng.uniform(), rng.uniform()});
    y.push_back(static_cast<int>(rng.below(3)));
  }
  mlkit::TrainParams p;
  p.max_epochs = 2;
  const auto r = mlkit::train_fixed(x, y, 3, Scheme::OvR, 10.0, p);
  CHECK_FALSE(r.warnings.empty());
  CHECK(r.model.classifiers.size() == 3);
  CHECK_THROWS_AS(mlkit::train_fixed({}, {}, 3, Scheme::OvR, 1.0, p), mlkit::DataError);
  CHECK_THROWS_AS(mlkit::train_fixed(x, y, 2, Scheme::OvR, 1.0, p), mlkit::DataError);
}

TEST_CASE("Iris float model") {
  const auto cat = bench::load_catalog(testing::catalog_path());
  const auto prep = bench::prepare(bench::find_dataset(cat, "Iris"));
  mlkit::TrainParams p;
  p.seed = bench::find_dataset(cat, "Iris").seed;
  const auto ovr = mlkit::train(prep.x_train, prep.y_train, 3, Scheme::OvR, p);
  CHECK(mlkit::accuracy(ovr.model, prep.x_test, prep.y_test) >= 75.0);
  const auto ovo = mlkit::train(prep.x_train, prep.y_train, 3, Scheme::OvO, p);
  CHECK(ovo.model.classifiers.size() == 3);
}

TEST_CASE("quantization examples") {
  mlkit::FloatModel f;
  f.scheme = Scheme::OvR;
  f.num_classes = 2;
  f.dims = 3;
  f.classifiers = {{{0.5, -1.0, 0.25}, 0.0, 0, -1}, {{0.0, 0.0, 0.0}, 0.0, 1, -1}};
  const auto q = mlkit::quantize(f, 4);
  CHECK(q.scale == doctest::Approx(1.0 / 7.0));
  CHECK(q.classifiers[0].w == std::vector<std::int32_t>{4, -7, 2});
  CHECK(q.classifiers[0].b == 0);
  CHECK(mlkit::quantize_feature(1.0) == 15);
  CHECK(mlkit::quantize_feature(0.5) == 8);
  CHECK(mlkit::quantize_feature(0.0) == 0);
  CHECK(mlkit::quantize_feature(1.7) == 15);
  CHECK(mlkit::round_half_away(-2.5) == -3);
  CHECK(mlkit::round_half_away(2.5) == 3);
  CHECK(mlkit::round_half_away(-2.4) == -2);

  f.classifiers[0] = {{0, 0, 0}, 0.0, 0, -1};
  CHECK_THROWS_AS(mlkit::quantize(f, 4), mlkit::DataError);
  CHECK_THROWS_AS(mlkit::quantize(f, 12), std::invalid_argument);
}

TEST_CASE("bias counts toward the scale") {
  mlkit::FloatModel f{Scheme::OvR, 2, 1, {{{0.1}, -2.0, 0, -1}, {{0.2}, 0.0, 1, -1}}};
  const auto q = mlkit::quantize(f, 8);
  CHECK(q.scale == doctest::Approx(2.0 / 127));
  CHECK(q.classifiers[0].b == -127);
}

TEST_CASE("quantization error is at most half a step") {
  mlkit::Rng rng(0x0E);
  for (int n = 0; n < 2000; ++n) {
    const auto f = random_float_model(rng, n % 2 ? Scheme::OvO : Scheme::OvR, 2 + rng.below(5),
                                      1 + rng.below(34));
    for (unsigned bits : {4u, 8u, 16u}) {
      const auto q = mlkit::quantize(f, bits);
      const double tol = q.scale / 2 * (1 + 1e-9);
      for (std::size_t k = 0; k < f.classifiers.size(); ++k) {
        for (std::size_t j = 0; j < f.dims; ++j) {
          REQUIRE(std::abs(q.classifiers[k].w[j] * q.scale - f.classifiers[k].w[j]) <= tol);
          REQUIRE(std::abs(q.classifiers[k].w[j]) <= q.qmax());
        }
        REQUIRE(std::abs(q.classifiers[k].b * q.scale - f.classifiers[k].b) <= tol);
      }
    }
  }
}

TEST_CASE("packing layout") {
  CHECK(mlkit::words_per_classifier(4, WeightMode::W4) == 1);
  CHECK(mlkit::words_per_classifier(4, WeightMode::W8) == 2);
  CHECK(mlkit::words_per_classifier(4, WeightMode::W16) == 3);
  CHECK(mlkit::words_per_classifier(7, WeightMode::W4) == 1);
  CHECK(mlkit::words_per_classifier(8, WeightMode::W4) == 2);
  CHECK(mlkit::words_per_classifier(33, WeightMode::W16) == 17);

  const std::vector<std::uint8_t> x{1, 2, 3, 4};
  CHECK(mlkit::pack_features(x, WeightMode::W4) == std::vector<std::uint32_t>{0x000F4321u});
  CHECK(mlkit::pack_features(x, WeightMode::W16) ==
        std::vector<std::uint32_t>{0x21u, 0x43u, 0x0Fu});
  mlkit::QuantizedClassifier c{{1, -1, 7, -7}, -2, 0, -1};
  CHECK(mlkit::pack_weights(c, WeightMode::W4) == std::vector<std::uint32_t>{0x000E97F1u});
  CHECK(mlkit::pack_weights(c, WeightMode::W8) == std::vector<std::uint32_t>{0xF907FF01u, 0xFEu});
  const std::vector<std::uint8_t> too_big{16};
  CHECK_THROWS_AS(mlkit::pack_features(too_big, WeightMode::W4), mlkit::DataError);
  mlkit::QuantizedClassifier wide{{8}, 0, 0, -1};
  CHECK_THROWS_AS(mlkit::pack_weights(wide, WeightMode::W4), mlkit::DataError);
}

TEST_CASE("pack/unpack round trip") {
  mlkit::Rng rng(0x9A);
  for (unsigned bits : {4u, 8u, 16u}) {
    const auto m = accel::mode_for_bits(bits);
    for (int n = 0; n < 3000; ++n) {
      const std::size_t d = 1 + rng.below(40);
      const auto q = testing::random_model(rng, Scheme::OvR, bits, 2, d);
      const auto x = testing::random_sample(rng, d);
      auto fx = mlkit::unpack_features(mlkit::pack_features(x, m), d, m);
      REQUIRE(fx.back() == 15);
      fx.pop_back();
      REQUIRE(fx == x);
      auto wx = mlkit::unpack_weights(mlkit::pack_weights(q.classifiers[0], m), d, m);
      REQUIRE(wx.back() == q.classifiers[0].b);
      wx.pop_back();
      REQUIRE(wx == q.classifiers[0].w);
    }
  }
}

TEST_CASE("OvO vote equals a vote from score signs") {
  mlkit::Rng rng(77);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t m = 2 + rng.below(6);
    const auto f = random_float_model(rng, Scheme::OvO, m, 3);
    std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<int> votes(m, 0);
    const auto pairs = mlkit::ovo_pairs(m);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      double s = f.classifiers[k].b;
      for (std::size_t j = 0; j < 3; ++j) s += f.classifiers[k].w[j] * x[j];
      ++votes[s >= 0 ? pairs[k].first : pairs[k].second];
    }
    int best = 0;
    for (int c = 1; c < static_cast<int>(m); ++c) {
      if (votes[c] > votes[best]) best = c;
    }
    REQUIRE(f.predict(x) == best);
  }
}

TEST_CASE("integer scores") {
  mlkit::QuantizedClassifier c{{2, -3}, 1, 0, -1};
  const std::vector<std::uint8_t> x{4, 5};
  CHECK(c.score(x) == 8 - 15 + 15);
  CHECK_THROWS_AS(c.score(std::vector<std::uint8_t>{1}), mlkit::DataError);
}

TEST_CASE("model archives round trip") {
  mlkit::Rng rng(4);
  const auto f = random_float_model(rng, Scheme::OvO, 4, 5);
  mlkit::FloatModel fm = f;
  for (std::size_t k = 0; k < fm.classifiers.size(); ++k) {
    fm.classifiers[k].pos = mlkit::ovo_pairs(4)[k].first;
    fm.classifiers[k].neg = mlkit::ovo_pairs(4)[k].second;
  }
  const mlkit::Normalizer norm({0, 1, 2, 3, 4}, {1, 2, 3, 4, 5.5});
  std::stringstream s;
  mlkit::save_model(s, fm, norm);
  const auto back = mlkit::load_float_model(s);
  REQUIRE(back.model.classifiers.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(back.model.classifiers[k].w == fm.classifiers[k].w);
    CHECK(back.model.classifiers[k].b == fm.classifiers[k].b);
    CHECK(back.model.classifiers[k].neg == fm.classifiers[k].neg);
  }
  CHECK(back.norm.max() == norm.max());

  const auto q = mlkit::quantize(fm, 8);
  std::stringstream t;
  mlkit::save_model(t, q, norm);
  const auto qb = mlkit::load_quantized_model(t);
  CHECK(qb.model.bits == 8);
  CHECK(qb.model.scale == q.scale);
  for (std::size_t k = 0; k < 6; ++k) CHECK(qb.model.classifiers[k].w == q.classifiers[k].w);

  std::stringstream wrong(s.str());
  CHECK_THROWS(mlkit::load_quantized_model(wrong));
  std::stringstream junk("flexsvm-model 1\nkind float\n");
  CHECK_THROWS(mlkit::load_float_model(junk));
}
