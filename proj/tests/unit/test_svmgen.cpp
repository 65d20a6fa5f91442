// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "flexsvm/accel.hpp"
#include "flexsvm/svmgen.hpp"
#include "ref_interp.hpp"

using namespace flexsvm;
using mlkit::Scheme;
using svmgen::Variant;

namespace {

std::int32_t run_multiply(std::uint32_t multiplier, std::int32_t multiplicand) {
  svmgen::Emitter e;
  svmgen::MulRegs r;
  e.li(r.one, 1);
  e.li(r.multiplier, static_cast<std::int32_t>(multiplier));
  e.li(r.multiplicand, multiplicand);
  svmgen::emit_shift_add_multiply(e, r, 4);
  coresim::Program p;
  p.text = e.finish();
  return static_cast<std::int32_t>(coresim::Simulator().run(p).regs[r.product]);
}

// A fixed 3-class, 4-feature model for golden output.
mlkit::QuantizedModel golden_model(Scheme s) {
  mlkit::QuantizedModel q;
  q.scheme = s;
  q.bits = 4;
  q.num_classes = 3;
  q.dims = 4;
  q.scale = 0.25;
  if (s == Scheme::OvR) {
    q.classifiers = {{{3, -2, 1, 0}, -1, 0, -1}, {{-1, 4, -3, 2}, 0, 1, -1},
                     {{-5, -1, 6, 7}, -3, 2, -1}};
  } else {
    q.classifiers = {{{3, -2, 1, 0}, -1, 0, 1}, {{-1, 4, -3, 2}, 0, 0, 2},
                     {{-5, -1, 6, 7}, -3, 1, 2}};
  }
  return q;
}

void check_golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(FLEXSVM_GOLDEN_DIR) / name;
  if (std::getenv("FLEXSVM_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path) << actual;
    return;
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in, "missing golden file ", path.string());
  std::stringstream want;
  want << in.rdbuf();
  CHECK_MESSAGE(want.str() == actual, "golden mismatch: ", name);
}

accel::SvmAccelerator& device() {
  static accel::SvmAccelerator dev;
  return dev;
}

}  // namespace

TEST_CASE("custom op counts") {
  mlkit::Rng rng(1);
  const auto ovr = testing::random_model(rng, Scheme::OvR, 4, 3, 4);
  const auto ovo = testing::random_model(rng, Scheme::OvO, 4, 3, 4);
  CHECK(svmgen::accel_custom_op_count(ovr) == 7);
  CHECK(svmgen::accel_custom_op_count(ovo) == 7);
  const auto x = testing::random_sample(rng, 4);
  const auto r = svmgen::run_inference(ovr, x, Variant::Accel);
  CHECK(r.report.custom_ops == 7);
  const auto w16 = testing::random_model(rng, Scheme::OvR, 16, 6, 33);
  CHECK(svmgen::accel_custom_op_count(w16) == 1 + 6 * (17 + 1));
}

TEST_CASE("generator input errors") {
  mlkit::Rng rng(2);
  auto q = testing::random_model(rng, Scheme::OvR, 8, 3, 4);
  const std::vector<std::uint8_t> three{1, 2, 3};
  CHECK_THROWS_AS(svmgen::gen_accel(q, three), svmgen::GenError);
  CHECK_THROWS_AS(svmgen::gen_baseline(q, three), svmgen::GenError);
  auto empty = q;
  empty.dims = 0;
  for (auto& c : empty.classifiers) c.w.clear();
  CHECK_THROWS_AS(svmgen::gen_accel(empty, {}), svmgen::GenError);
  auto short_model = q;
  short_model.classifiers.pop_back();
  CHECK_THROWS_AS(svmgen::gen_accel(short_model, testing::random_sample(rng, 4)),
                  svmgen::GenError);
}

TEST_CASE("shift-add multiply") {
  CHECK(run_multiply(15, 7) == 105);
  CHECK(run_multiply(3, -5) == -15);
  CHECK(run_multiply(0, -32767) == 0);
  mlkit::Rng rng(3);
  for (std::uint32_t a = 0; a < 16; ++a) {
    for (int n = 0; n < 60; ++n) {
      const auto b = static_cast<std::int32_t>(rng.below(65535)) - 32767;
      REQUIRE(run_multiply(a, b) == static_cast<std::int32_t>(a) * b);
    }
  }
}

TEST_CASE("interpret") {
  CHECK(svmgen::interpret(std::vector<std::uint32_t>{0, 0, 0}, Scheme::OvO, 3) == 0);
  CHECK(svmgen::interpret(std::vector<std::uint32_t>{0x80000000u, 0, 0x80000000u}, Scheme::OvO,
                          3) == 0);
  CHECK(svmgen::interpret(std::vector<std::uint32_t>{0x80000002u}, Scheme::OvR, 3) == 2);
  CHECK_THROWS_AS(svmgen::interpret(std::vector<std::uint32_t>{0, 0}, Scheme::OvO, 3),
                  svmgen::GenError);
  CHECK_THROWS_AS(svmgen::interpret({}, Scheme::OvR, 3), svmgen::GenError);

  // All 8 sign patterns for m = 3 against a direct vote count.
  for (unsigned pat = 0; pat < 8; ++pat) {
    std::vector<std::uint32_t> words;
    int votes[3] = {0, 0, 0};
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    for (unsigned k = 0; k < 3; ++k) {
      const bool neg = (pat >> k) & 1u;
      words.push_back(neg ? 0x80000000u | 0x5u : 0x5u);
      ++votes[neg ? pairs[k].second : pairs[k].first];
    }
    int want = 0;
    for (int c = 1; c < 3; ++c) {
      if (votes[c] > votes[want]) want = c;
    }
    CHECK(svmgen::interpret(words, Scheme::OvO, 3) == want);
  }
}

TEST_CASE("emitter") {
  svmgen::Emitter e;
  e.load_word(5, 16);
  e.load_word(5, 4096);
  e.load_word(6, 4100);
  e.store_word(6, 8);
  CHECK(e.rebases() == 1);
  e.li(3, 0x12345);
  e.li(4, -2048);
  e.li(7, 0x7FFFF800);
  auto skip = e.new_label();
  e.branch(isa::Op::Beq, 0, 0, skip);
  e.emit(isa::addi(9, 0, 1));
  e.bind(skip);
  coresim::Program p;
  p.text = e.finish();
  p.data.resize(1026);
  const auto r = coresim::Simulator().run(p);
  CHECK(r.regs[3] == 0x12345u);
  CHECK(r.regs[4] == static_cast<std::uint32_t>(-2048));
  CHECK(r.regs[7] == 0x7FFFF800u);
  CHECK(r.regs[9] == 0);

  svmgen::Emitter bad;
  bad.branch(isa::Op::Beq, 0, 0, bad.new_label());
  CHECK_THROWS_AS(bad.finish(), svmgen::GenError);
}

TEST_CASE("accelerated, baseline and host integer model agree") {
  mlkit::Rng rng(0x5A);
  std::size_t cases = 0;
  for (unsigned bits : {4u, 8u, 16u}) {
    for (Scheme s : {Scheme::OvR, Scheme::OvO}) {
      for (int n = 0; n < 60; ++n) {
        const std::size_t m = 2 + rng.below(5);
        const std::size_t d = 1 + rng.below(35);
        const auto q = testing::random_model(rng, s, bits, m, d);
        const auto x = testing::random_sample(rng, d);
        const auto a = svmgen::run_inference(q, x, Variant::Accel);
        const auto b = svmgen::run_inference(q, x, Variant::Baseline);
        REQUIRE(a.predicted == q.predict(x));
        REQUIRE(b.predicted == a.predicted);
        REQUIRE(a.report.predicted_class == a.predicted);
        REQUIRE(b.report.total_cycles > a.report.total_cycles);
        REQUIRE(a.report.custom_ops == svmgen::accel_custom_op_count(q));
        for (const auto& t : a.report.traces) REQUIRE(coresim::trace_check(t));
        ++cases;
      }
    }
  }
  CHECK(cases == 360);
}

TEST_CASE("generated programs match the cost-free interpreter") {
  mlkit::Rng rng(0x1F);
  for (unsigned bits : {4u, 8u, 16u}) {
    for (Scheme s : {Scheme::OvR, Scheme::OvO}) {
      for (int n = 0; n < 10; ++n) {
        const auto q = testing::random_model(rng, s, bits, 2 + rng.below(4), 1 + rng.below(20));
        const auto x = testing::random_sample(rng, q.dims);
        for (const auto& p : {svmgen::gen_accel(q, x), svmgen::gen_baseline(q, x)}) {
          accel::SvmAccelerator dev;
          auto fn = [&dev](std::uint8_t f3, std::uint32_t a, std::uint32_t b) {
            return dev.execute(static_cast<isa::AccelOpId>(f3), a, b);
          };
          const auto ref = testing::ref_run(p, fn);
          accel::SvmAccelerator plug;
          coresim::Simulator sim;
          sim.attach(plug);
          const auto r = sim.run(p);
          REQUIRE(r.outputs == ref.outputs);
          REQUIRE(r.regs == ref.regs);
          REQUIRE(r.total_cycles == testing::expected_cycles(ref, true));
        }
      }
    }
  }
}

TEST_CASE("OvO accelerated outputs are raw result words") {
  const auto q = golden_model(Scheme::OvO);
  const std::vector<std::uint8_t> x{15, 0, 7, 3};
  const auto p = svmgen::gen_accel(q, x);
  coresim::Simulator sim;
  sim.attach(device());
  const auto r = sim.run(p);
  REQUIRE(r.outputs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(accel::PackedResult{r.outputs[k]}.negative() == (q.classifiers[k].score(x) < 0));
    CHECK((r.outputs[k] & 0x7FFFFF00u) == 0u);
  }
}

TEST_CASE("golden programs and reports") {
  const std::vector<std::uint8_t> x{15, 0, 7, 3};
  for (Scheme s : {Scheme::OvR, Scheme::OvO}) {
    const auto q = golden_model(s);
    const std::string tag(mlkit::to_string(s));
    const auto pa = svmgen::gen_accel(q, x);
    const auto pb = svmgen::gen_baseline(q, x);
    check_golden("accel_" + tag + "4.s", isa::disassemble_program(pa.text));
    check_golden("baseline_" + tag + "4.s", isa::disassemble_program(pb.text));
    const auto ra = svmgen::run_inference(q, x, Variant::Accel);
    const auto rb = svmgen::run_inference(q, x, Variant::Baseline);
    check_golden("accel_" + tag + "4.report", coresim::to_text(ra.report));
    check_golden("baseline_" + tag + "4.report", coresim::to_text(rb.report));
  }
}

TEST_CASE("timing configuration never changes results") {
  mlkit::Rng rng(0x7);
  const auto q = testing::random_model(rng, Scheme::OvR, 8, 4, 9);
  const auto x = testing::random_sample(rng, 9);
  const auto a = svmgen::run_inference(q, x, Variant::Accel);
  svmgen::InferenceConfig cfg;
  cfg.mem.fetch_policy = coresim::FetchPolicy::FetchFree;
  cfg.cost.base_exec.fill(97);
  cfg.latency[isa::AccelOpId::Calc8] = 9;
  const auto b = svmgen::run_inference(q, x, Variant::Accel, cfg);
  CHECK(a.report.outputs == b.report.outputs);
  CHECK(a.report.regs == b.report.regs);
  CHECK(a.report.total_cycles != b.report.total_cycles);
}
