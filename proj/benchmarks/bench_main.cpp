#include <benchmark/benchmark.h>

#include "cosim/builtin_firmware.hpp"
#include "cosim/dut/soc.hpp"
#include "cosim/scenario.hpp"

namespace {

using namespace cosim;

// Bare kernel cost per cycle with N trivial processes and channels.
void BM_KernelCycles(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Kernel k;
    for (int i = 0; i < n; ++i) {
      auto& ch = dut::make_stream(k, "s" + std::to_string(i));
      k.register_process("p" + std::to_string(i), [&ch](Cycle now) {
        ch.set_valid(now % 2);
        ch.set_ready(true);
      });
    }
    benchmark::DoNotOptimize(k.run({10'000, 100'000, 0}));
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_KernelCycles)->Arg(1)->Arg(16)->Arg(64);

// One MM2S engine streaming through the bridge into an always-ready sink.
void BM_BridgeThroughput(benchmark::State& state) {
  const auto bytes = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ScenarioConfig cfg;
    cfg.dut.kind = "dma-rig";
    cfg.firmware.builtin = "wait";
    Scenario s(cfg, {FirmwareEntry([bytes](FirmwareContext& c) {
                       fw::program_dma(c, dut::soc_map::kWeightsDma, 0x1000'0000, bytes);
                       fw::wait_dma_done(c, dut::soc_map::kWeightsDma);
                       return 0;
                     }),
                     false});
    benchmark::DoNotOptimize(s.run());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_BridgeThroughput)->Arg(64 << 10)->Arg(1 << 20);

// End-to-end matmul job on the systolic SoC, with and without congestion.
void BM_Matmul(benchmark::State& state) {
  const auto n = state.range(0);
  const double stall = static_cast<double>(state.range(1)) / 100.0;
  Cycle cycles = 0;
  for (auto _ : state) {
    ScenarioConfig cfg;
    cfg.firmware.builtin = "matmul";
    cfg.firmware.params = {{"m", n}, {"r", n}, {"c", n}};
    cfg.congestion = CongestionProfile::uniform(stall, 0, 4, 0);
    const auto r = run_scenario(cfg);
    cycles = r.sim.final_cycle;
    benchmark::DoNotOptimize(r);
  }
  state.counters["sim_cycles"] = static_cast<double>(cycles);
  state.counters["cycles_per_s"] =
      benchmark::Counter(static_cast<double>(cycles), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Matmul)->Args({4, 0})->Args({16, 0})->Args({16, 50})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
