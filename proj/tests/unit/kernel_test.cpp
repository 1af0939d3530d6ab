#include <gtest/gtest.h>

#include "cosim/bridge.hpp"
#include "cosim/dut/dma.hpp"
#include "cosim/dut/register_file.hpp"
#include "cosim/dut/soc.hpp"
#include "cosim/dut/synthetic.hpp"
#include "cosim/firmware.hpp"
#include "cosim/kernel.hpp"
#include "cosim/scenario.hpp"

namespace cosim {
namespace {

TEST(Kernel, EmptySystemRunsToMaxCycles) {
  Kernel k;
  const auto r = k.run({10, 10'000, 0});
  EXPECT_EQ(r.outcome, Outcome::MaxCyclesReached);
  EXPECT_EQ(r.final_cycle, 10u);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_FALSE(r.firmware_status);
}

TEST(Kernel, NoFirmwareStopsAtMaxCycles) {
  Kernel k;
  k.register_process("idle", [](Cycle) {});
  const auto r = k.run({100, 10, 0});
  EXPECT_EQ(r.outcome, Outcome::MaxCyclesReached);
  EXPECT_EQ(r.final_cycle, 100u);
}

TEST(Kernel, RejectsBadConfig) {
  Kernel k;
  EXPECT_THROW(k.run({0, 10, 0}), ConfigError);
  Kernel k2;
  EXPECT_THROW(k2.run({10, 0, 0}), ConfigError);
}

TEST(Kernel, RegisterAfterStartFails) {
  Kernel k;
  k.register_process("late", [&k](Cycle now) {
    if (now == 2) {
      try {
        k.register_process("x", [](Cycle) {});
        ADD_FAILURE() << "registration during run accepted";
      } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "simulation already started");
      }
    }
  });
  k.run({5, 10, 0});
  EXPECT_THROW(k.register_process("y", [](Cycle) {}), Error);
  EXPECT_THROW(k.make_channel<int>("c", 4), Error);
}

// Two counters that each copy the other's committed value plus one.
struct CounterPair {
  Wire<std::uint64_t>* a = nullptr;
  Wire<std::uint64_t>* b = nullptr;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> history;

  void build(Kernel& k, bool a_first) {
    a = &k.make_wire<std::uint64_t>(1);
    b = &k.make_wire<std::uint64_t>(100);
    auto step_a = [this](Cycle) { a->set(b->get() + 1); };
    auto step_b = [this](Cycle) { b->set(a->get() * 2); };
    if (a_first) {
      k.register_process("a", step_a);
      k.register_process("b", step_b);
    } else {
      k.register_process("b", step_b);
      k.register_process("a", step_a);
    }
    k.add_cycle_observer([this](Cycle) { history.emplace_back(a->get(), b->get()); });
  }
};

TEST(Kernel, RegistrationOrderDoesNotChangeCommittedValues) {
  Kernel k1, k2;
  CounterPair p1, p2;
  p1.build(k1, true);
  p2.build(k2, false);
  k1.run({20, 100, 0});
  k2.run({20, 100, 0});
  ASSERT_EQ(p1.history.size(), 20u);
  EXPECT_EQ(p1.history, p2.history);
  // Hand-computed: (1,100) -> (101,2) -> (3,202) -> (203,6)
  EXPECT_EQ(p1.history[0], std::make_pair(std::uint64_t{1}, std::uint64_t{100}));
  EXPECT_EQ(p1.history[1], std::make_pair(std::uint64_t{101}, std::uint64_t{2}));
  EXPECT_EQ(p1.history[2], std::make_pair(std::uint64_t{3}, std::uint64_t{202}));
  EXPECT_EQ(p1.history[3], std::make_pair(std::uint64_t{203}, std::uint64_t{6}));
}

TEST(Kernel, EmptyFirmwareFinishesAtCycleZero) {
  Kernel k;
  k.spawn_firmware([] { return 0; });
  const auto r = k.run({100, 10, 0});
  EXPECT_EQ(r.outcome, Outcome::FirmwareDone);
  EXPECT_EQ(r.final_cycle, 0u);
  EXPECT_EQ(r.firmware_status, 0);
}

TEST(Kernel, FirmwareWaitFive) {
  Kernel k;
  k.spawn_firmware([&k] {
    k.firmware_wait(5);
    return 3;
  });
  const auto r = k.run({100, 10, 0});
  EXPECT_EQ(r.outcome, Outcome::FirmwareDone);
  EXPECT_EQ(r.final_cycle, 5u);
  EXPECT_EQ(r.firmware_status, 3);
}

TEST(Kernel, WaitZeroResumesSameCycle) {
  Kernel k;
  Cycle before = 99, after = 99;
  k.spawn_firmware([&] {
    before = k.now();
    k.firmware_wait(0);
    after = k.now();
    return 0;
  });
  k.run({10, 10, 0});
  EXPECT_EQ(before, 0u);
  EXPECT_EQ(after, 0u);
}

TEST(Kernel, FirmwareBlockingCallOutsideTaskThrows) {
  Kernel k;
  EXPECT_THROW(k.firmware_wait(1), Error);
  EXPECT_FALSE(k.in_firmware());
}

TEST(Kernel, FirmwareExceptionPropagates) {
  Kernel k;
  k.spawn_firmware([]() -> int { throw std::runtime_error("boom"); });
  EXPECT_THROW(k.run({10, 10, 0}), std::runtime_error);
}

TEST(Kernel, SecondFirmwareRejected) {
  Kernel k;
  k.spawn_firmware([] { return 0; });
  EXPECT_THROW(k.spawn_firmware([] { return 0; }), Error);
}

// The register file applies a hardware update during cycle 42. A read issued
// at cycle t runs its handler at t + 1 (latency 1) before that cycle's eval, so
// reads complete at 1, 2, ..., and the first to see the update is the one
// completing at 43. The firmware returns right there.
TEST(Kernel, PollingFirmwareSeesRegisterSetAtCycle42) {
  Kernel k;
  MemoryImage mem;
  RegisterBridge regs(k);
  auto dut = dut::build_register_file_dut(k, 4, 0x5000);
  dut->regs->hw_write_at(42, 2, 0x1);
  for (const auto& p : dut->register_ports) regs.add_port(p);
  FirmwareContext ctx(k, mem, regs);
  std::vector<Cycle> read_cycles;
  ctx.spawn([&](FirmwareContext& c) {
    while (fb_read_32(c, 0x5008) == 0) read_cycles.push_back(fb_cycle_count(c));
    return 0;
  });
  const auto r = k.run({1000, 100, 0});
  EXPECT_EQ(r.outcome, Outcome::FirmwareDone);
  EXPECT_EQ(r.final_cycle, 43u);
  ASSERT_EQ(read_cycles.size(), 42u);
  for (std::size_t i = 0; i < read_cycles.size(); ++i) EXPECT_EQ(read_cycles[i], i + 1);
}

TEST(Kernel, TimeAdvancesByOnePerStep) {
  Kernel k;
  std::vector<Cycle> seen;
  std::vector<Cycle> fw_seen;
  k.add_cycle_observer([&](Cycle c) { seen.push_back(c); });
  k.spawn_firmware([&] {
    for (int i = 0; i < 10; ++i) {
      fw_seen.push_back(k.now());
      k.firmware_wait(static_cast<Cycle>(i % 3));
    }
    return 0;
  });
  const auto r = k.run({1000, 100, 0});
  ASSERT_EQ(seen.size(), r.final_cycle);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i);
  EXPECT_TRUE(std::is_sorted(fw_seen.begin(), fw_seen.end()));
}

// A firmware task that only sleeps, with nothing moving in hardware, trips the
// watchdog once the sleep outlasts the window.
TEST(Kernel, LongIdleWaitIsReportedAsHang) {
  Kernel k;
  k.spawn_firmware([&k] {
    k.firmware_wait(500);
    return 0;
  });
  const auto r = k.run({10'000, 100, 0});
  EXPECT_EQ(r.outcome, Outcome::Hang);
  EXPECT_EQ(r.final_cycle, 100u);
}

TEST(Kernel, ProgressResetsWatchdog) {
  Kernel k;
  k.spawn_firmware([&k] {
    for (int i = 0; i < 10; ++i) {
      k.firmware_wait(50);
      k.note_progress();
    }
    return 0;
  });
  const auto r = k.run({10'000, 60, 0});
  EXPECT_EQ(r.outcome, Outcome::FirmwareDone);
  EXPECT_EQ(r.final_cycle, 500u);
}

TEST(Kernel, RaisedViolationStopsRun) {
  Kernel k;
  k.register_process("p", [&k](Cycle now) {
    if (now == 7) k.raise_violation("bad thing");
  });
  const auto r = k.run({100, 100, 0});
  EXPECT_EQ(r.outcome, Outcome::ProtocolViolation);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.diagnostics.front().find("bad thing"), std::string::npos);
}

// S2MM programmed for 64 bytes while its stream supplies only 48.
TEST(Kernel, UnderfedS2mmHangsAndNamesWriteChannel) {
  Kernel k;
  MemoryImage mem;
  Profiler prof;
  MemoryBridge bridge(k, mem, prof);
  RegisterBridge regs(k, &prof);
  auto& stream = dut::make_stream(k, "src.stream");
  dut::StreamSource src(k, "src", stream, 3, 1);
  dut::S2mmDma dma(k, "s2mm", stream);
  bridge.attach_manager_port(dma.port());
  regs.add_port(dma.register_port(0x3000));
  FirmwareContext ctx(k, mem, regs);
  ctx.spawn([](FirmwareContext& c) {
    fb_write_32(c, 0x3000 + dut::dma_reg::kAddrLo, 0x8000);
    fb_write_32(c, 0x3000 + dut::dma_reg::kLen, 64);
    fb_write_32(c, 0x3000 + dut::dma_reg::kCtrl, dut::dma_reg::kStart);
    while (!(fb_read_32(c, 0x3000 + dut::dma_reg::kStatus) & dut::dma_reg::kDone)) {
    }
    return 0;
  });
  const auto r = k.run({50'000, 1'000, 0});
  ASSERT_EQ(r.outcome, Outcome::Hang);
  EXPECT_LT(r.final_cycle, 50'000u);
  bool named = false;
  for (const auto& d : r.diagnostics) {
    named = named || (d.find("write-data channel 's2mm.w'") != std::string::npos &&
                      d.find("VALID deasserted upstream") != std::string::npos &&
                      d.find("48 of 64") != std::string::npos);
  }
  EXPECT_TRUE(named) << to_string(r);
  EXPECT_TRUE(dma.busy());
  EXPECT_EQ(dma.beats_accepted(), 3u);
}

// Hang soundness: the final watchdog_window cycles of a hung run carry no
// handshake on any channel and no firmware register write.
TEST(Kernel, HangWindowIsQuiet) {
  ScenarioConfig cfg;
  cfg.dut.rows = cfg.dut.cols = 4;
  cfg.firmware.builtin = "hang_reproducer";
  cfg.firmware.params = {{"m", 8}, {"r", 4}, {"c", 4}, {"deficit", 2}};
  cfg.watchdog_window = 500;
  cfg.max_cycles = 50'000;
  Scenario s(cfg);
  std::vector<Cycle> active;
  s.kernel().add_cycle_observer([&](Cycle now) {
    for (const auto* ch : s.kernel().channels()) {
      if (ch->fired()) {
        active.push_back(now);
        break;
      }
    }
  });
  const auto r = s.run();
  ASSERT_EQ(r.sim.outcome, Outcome::Hang);
  ASSERT_FALSE(active.empty());
  // Idle cycles are active.back()+1 .. final_cycle-1.
  EXPECT_EQ(active.back() + cfg.watchdog_window + 1, r.sim.final_cycle);
}

TEST(Kernel, DeterministicAcrossRuns) {
  auto once = [] {
    ScenarioConfig cfg;
    cfg.dut.rows = cfg.dut.cols = 6;
    cfg.firmware.builtin = "matmul";
    cfg.firmware.params = {{"m", 9}, {"r", 5}, {"c", 6}};
    cfg.seed = 11;
    cfg.congestion = CongestionProfile::uniform(0.3, 0, 4, 0);
    Scenario s(cfg, {std::nullopt, true});
    auto r = s.run();
    return std::make_pair(r.sim, axi::serialize(s.bridge().trace()));
  };
  const auto a = once();
  const auto b = once();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_EQ(a.first.outcome, Outcome::FirmwareDone);
}

}  // namespace
}  // namespace cosim
