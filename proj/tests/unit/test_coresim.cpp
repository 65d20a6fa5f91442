// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "flexsvm/accel.hpp"
#include "flexsvm/coresim.hpp"
#include "flexsvm/mlkit.hpp"
#include "ref_interp.hpp"

using namespace flexsvm;
using coresim::FetchPolicy;
using coresim::Simulator;
using isa::AccelOpId;
using isa::Op;

namespace {

coresim::MemModel fetch_free() {
  coresim::MemModel m;
  m.fetch_policy = FetchPolicy::FetchFree;
  return m;
}

class EchoPlug final : public coresim::AcceleratorPlug {
 public:
  explicit EchoPlug(std::uint32_t latency = 1) : latency_(latency) {}
  coresim::PlugResponse on_valid(std::uint8_t, std::uint32_t rs1, std::uint32_t) override {
    ++calls;
    return {rs1, latency_};
  }
  void reset() override { calls = 0; }
  int calls = 0;

 private:
  std::uint32_t latency_;
};

// Deterministic mixing plug for the random program comparison.
class MixPlug final : public coresim::AcceleratorPlug {
 public:
  static std::uint32_t f(std::uint8_t funct3, std::uint32_t a, std::uint32_t b) {
    return (a * 2654435761u) ^ (b + funct3);
  }
  coresim::PlugResponse on_valid(std::uint8_t funct3, std::uint32_t a, std::uint32_t b) override {
    return {f(funct3, a, b), 3};
  }
  void reset() override {}
};

coresim::Program random_program(mlkit::Rng& rng, std::size_t len, std::size_t words) {
  coresim::Program p;
  p.data.resize(words);
  for (auto& w : p.data) w = static_cast<std::uint32_t>(rng.next());
  const Op alu[] = {Op::Add, Op::Sub, Op::Sll, Op::Srl, Op::And, Op::Or, Op::Xor, Op::Slt};
  const auto reg = [&] { return static_cast<unsigned>(rng.below(12)); };
  for (std::size_t i = 0; i < len; ++i) {
    const auto addr = static_cast<std::int32_t>(4 * rng.below(words));
    const std::size_t remaining = len - i;
    switch (rng.below(8)) {
      case 0: p.text.push_back(isa::lw(reg(), addr, 0)); break;
      case 1: p.text.push_back(isa::sw(reg(), addr, 0)); break;
      case 2:
        p.text.push_back(isa::addi(reg(), reg(), static_cast<std::int32_t>(rng.below(4096)) - 2048));
        break;
      case 3: {
        const Op b[] = {Op::Beq, Op::Bne, Op::Blt};
        const auto skip = static_cast<std::int32_t>(1 + rng.below(std::min<std::size_t>(remaining, 6)));
        p.text.push_back(isa::branch(b[rng.below(3)], reg(), reg(), 4 * skip));
        break;
      }
      case 4:
        p.text.push_back(isa::accel(static_cast<AccelOpId>(rng.below(7)), reg(), reg(), reg()));
        break;
      case 5:
        p.text.push_back(isa::lui(reg(), static_cast<std::int32_t>(rng.next() & 0xFFFFF000u)));
        break;
      default: p.text.push_back(isa::r_type(alu[rng.below(8)], reg(), reg(), reg())); break;
    }
  }
  for (std::size_t k = 0; k < 4; ++k) p.output_addrs.push_back(static_cast<std::uint32_t>(4 * k));
  return p;
}

}  // namespace

TEST_CASE("three ALU instructions") {
  coresim::Program p;
  p.text = {isa::addi(1, 0, 5), isa::addi(2, 0, 7), isa::r_type(Op::Add, 3, 1, 2)};
  const auto r = Simulator(fetch_free()).run(p);
  CHECK(r.regs[3] == 12);
  CHECK(r.total_cycles == 96);
  const auto ref = testing::ref_run(p);
  CHECK(ref.regs == r.regs);
  CHECK(testing::expected_cycles(ref, false) == 96);
}

TEST_CASE("single load word") {
  coresim::Program p;
  p.text = {isa::lw(1, 0, 0)};
  p.data = {0xDEADBEEFu};
  const auto r = Simulator(fetch_free()).run(p);
  CHECK(r.total_cycles == 142);
  CHECK(r.regs[1] == 0xDEADBEEFu);
  CHECK(r.data_reads == 1);
  CHECK(r.memory_cycles == 110);
}

TEST_CASE("single store word") {
  coresim::Program p;
  p.text = {isa::addi(1, 0, 9), isa::sw(1, 4, 0)};
  p.data = {0, 0};
  const auto r = Simulator(fetch_free()).run(p);
  CHECK(r.total_cycles == 32 + 32 + 47 + 64);
  CHECK(r.data[1] == 9);
}

TEST_CASE("single CALC4 custom op") {
  accel::SvmAccelerator dev;
  coresim::Program p;
  p.text = {isa::accel(AccelOpId::Calc4, 0, 0, 0)};
  Simulator sim(fetch_free());
  sim.attach(dev);
  const auto r = sim.run(p);
  CHECK(r.total_cycles == 69);
  REQUIRE(r.traces.size() == 1);
  const auto& t = r.traces[0];
  CHECK(coresim::trace_check(t));
  CHECK(t.init < t.rf_ready_read);
  CHECK(t.rf_ready_read < t.cnt_en_start);
  CHECK(t.cnt_en_start < t.cnt_done);
  CHECK(t.cnt_done < t.accel_valid);
  CHECK(t.accel_valid < t.accel_ready);
  CHECK(t.accel_ready < t.rf_wreq);
  CHECK(t.rf_wreq < t.writeback_done);
}

TEST_CASE("custom op cost is 68 + latency for any operands") {
  mlkit::Rng rng(5);
  for (std::uint32_t lat : {1u, 2u, 7u, 40u}) {
    EchoPlug plug(lat);
    coresim::Program p;
    p.text = {isa::accel(AccelOpId::Calc8, 1, 2, 3)};
    Simulator sim(fetch_free());
    sim.attach(plug);
    for (int n = 0; n < 20; ++n) {
      const auto r = sim.run(p);
      CHECK(r.total_cycles == 68 + lat);
      CHECK(coresim::trace_check(r.traces[0]));
    }
  }
}

TEST_CASE("echo plug writes rs1 to rd") {
  EchoPlug plug;
  coresim::Program p;
  p.text = {isa::addi(5, 0, 1234), isa::accel(AccelOpId::Calc16, 9, 5, 0),
            isa::accel(AccelOpId::Res4, 0, 5, 0)};
  Simulator sim(fetch_free());
  sim.attach(plug);
  const auto r = sim.run(p);
  CHECK(r.regs[9] == 1234);
  CHECK(r.regs[0] == 0);
  CHECK(plug.calls == 2);
}

TEST_CASE("custom op without a plug") {
  coresim::Program p;
  p.text = {isa::accel(AccelOpId::CreateEnv, 0, 0, 0)};
  Simulator sim;
  CHECK_THROWS_WITH_AS(sim.run(p), doctest::Contains("no accelerator"), coresim::SimError);
  EchoPlug plug;
  sim.attach(plug);
  CHECK_NOTHROW(sim.run(p));
  sim.detach();
  CHECK_FALSE(sim.has_plug());
  CHECK_THROWS_AS(sim.run(p), coresim::SimError);
}

TEST_CASE("fatal errors carry the pc") {
  coresim::Program p;
  p.text = {isa::addi(1, 0, 0), isa::lw(2, 8, 0)};
  p.data = {0};
  CHECK_THROWS_WITH_AS(Simulator().run(p), doctest::Contains("pc=0x4"), coresim::SimError);

  coresim::Program loop;
  loop.text = {isa::branch(Op::Beq, 0, 0, 0)};
  coresim::SimOptions opt;
  opt.max_cycles = 10'000;
  CHECK_THROWS_WITH_AS(Simulator({}, {}, opt).run(loop), doctest::Contains("cycle limit"),
                       coresim::SimError);

  coresim::Program wild;
  wild.text = {isa::jal(0, 64)};
  CHECK_THROWS_AS(Simulator().run(wild), coresim::SimError);
}

TEST_CASE("x0 stays zero") {
  coresim::Program p;
  p.text = {isa::addi(0, 0, 5), isa::lui(0, 0x1000), isa::r_type(Op::Add, 1, 0, 0)};
  const auto r = Simulator().run(p);
  CHECK(r.regs[0] == 0);
  CHECK(r.regs[1] == 0);
}

TEST_CASE("random programs match the cost-free interpreter and the cost oracle") {
  mlkit::Rng rng(0xC0DE);
  MixPlug plug;
  for (int n = 0; n < 400; ++n) {
    const auto p = random_program(rng, 20 + rng.below(200), 4 + rng.below(29));
    const auto ref = testing::ref_run(p, MixPlug::f);
    for (FetchPolicy pol : {FetchPolicy::FetchFree, FetchPolicy::FetchIsMemRead}) {
      coresim::MemModel m;
      m.fetch_policy = pol;
      Simulator sim(m);
      sim.attach(plug);
      const auto r = sim.run(p);
      REQUIRE(r.regs == ref.regs);
      REQUIRE(r.data == ref.data);
      REQUIRE(r.outputs == ref.outputs);
      REQUIRE(r.instructions == ref.executed);
      REQUIRE(r.custom_ops == ref.customs);
      REQUIRE(r.total_cycles ==
              testing::expected_cycles(ref, pol == FetchPolicy::FetchIsMemRead, 3));
      for (const auto& t : r.traces) REQUIRE(coresim::trace_check(t));
    }
  }
}

TEST_CASE("fetch policy adds 110 cycles per instruction") {
  mlkit::Rng rng(0xFE7);
  EchoPlug plug(2);
  for (int n = 0; n < 200; ++n) {
    const auto p = random_program(rng, 50, 8);
    Simulator free_sim(fetch_free());
    Simulator read_sim;
    free_sim.attach(plug);
    read_sim.attach(plug);
    const auto a = free_sim.run(p);
    const auto b = read_sim.run(p);
    REQUIRE(b.total_cycles - a.total_cycles == 110 * a.instructions);
    REQUIRE(b.fetch_accesses == a.instructions);
    REQUIRE(a.fetch_accesses == 0);
  }
}

TEST_CASE("stall: nothing starts before the previous write-back ends") {
  EchoPlug plug;
  coresim::Program p;
  p.text = {isa::accel(AccelOpId::Calc4, 1, 0, 0), isa::accel(AccelOpId::Calc4, 2, 0, 0),
            isa::addi(3, 0, 1), isa::accel(AccelOpId::Res4, 4, 0, 0)};
  Simulator sim(fetch_free());
  sim.attach(plug);
  const auto r = sim.run(p);
  REQUIRE(r.traces.size() == 3);
  CHECK(r.traces[1].init == r.traces[0].writeback_done + 1);
  CHECK(r.traces[2].init == r.traces[1].writeback_done + 1 + 32);
  CHECK(r.total_cycles == r.traces[2].writeback_done + 1);
}

TEST_CASE("trace_check mutations fail") {
  EchoPlug plug(4);
  coresim::Program p;
  p.text = {isa::addi(1, 0, 1), isa::accel(AccelOpId::Calc4, 1, 1, 1)};
  Simulator sim;
  sim.attach(plug);
  const auto good = sim.run(p).traces.at(0);
  REQUIRE(coresim::trace_check(good));

  auto early_ready = good;
  early_ready.accel_ready = good.accel_valid - 1;
  CHECK_FALSE(coresim::trace_check(early_ready));

  auto short_operands = good;
  short_operands.cnt_done -= 1;
  short_operands.accel_valid -= 1;
  short_operands.accel_ready -= 1;
  CHECK_FALSE(coresim::trace_check(short_operands));

  auto short_writeback = good;
  short_writeback.writeback_done -= 1;
  CHECK_FALSE(coresim::trace_check(short_writeback));

  auto long_writeback = good;
  long_writeback.writeback_done += 1;
  CHECK_FALSE(coresim::trace_check(long_writeback));

  auto slow = good;
  slow.latency += 1;
  CHECK_FALSE(coresim::trace_check(slow));

  auto reorder = good;
  std::swap(reorder.init, reorder.rf_ready_read);
  CHECK_FALSE(coresim::trace_check(reorder));

  auto gap = good;
  gap.rf_wreq += 1;
  gap.writeback_done += 1;
  CHECK_FALSE(coresim::trace_check(gap));
}

TEST_CASE("program files") {
  const auto dir = std::filesystem::temp_directory_path() / "flexsvm_coresim_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::uint32_t> words{1, 0x80000000u, 0xDEADBEEFu};
  coresim::write_data_image(dir / "d.bin", words);
  CHECK(coresim::read_data_image(dir / "d.bin") == words);
  CHECK(std::filesystem::file_size(dir / "d.bin") == 12);
  {
    std::ofstream a(dir / "p.s");
    a << "lw x1, 4(x0)\naddi x2, x1, 1\n";
  }
  const auto prog = coresim::load_program(dir / "p.s", dir / "d.bin");
  CHECK(prog.text.size() == 2);
  const auto r = Simulator().run(prog);
  CHECK(r.regs[2] == 0x80000001u);
  {
    std::ofstream bad(dir / "odd.bin", std::ios::binary);
    bad << "abc";
  }
  CHECK_THROWS(coresim::read_data_image(dir / "odd.bin"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("report text") {
  coresim::Program p;
  p.text = {isa::addi(1, 0, 3)};
  const auto text = coresim::to_text(Simulator(fetch_free()).run(p));
  CHECK(text.find("total_cycles: 32\n") != std::string::npos);
  CHECK(text.find("reg.x1: 0x00000003\n") != std::string::npos);
}
