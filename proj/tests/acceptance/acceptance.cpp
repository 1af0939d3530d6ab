// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cosim/builtin_firmware.hpp"
#include "cosim/protocol_checker.hpp"
#include "cosim/scenario.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

namespace {

using namespace cosim;
using Clock = std::chrono::steady_clock;

// Pinned limits.
constexpr double kMatmulBudgetSeconds = 60.0;
constexpr double kCongestionBudgetSeconds = 120.0;
constexpr Cycle kHangMaxCycles = 50'000;
constexpr unsigned kMatmulScenarios = 50;
constexpr unsigned kCongestionProfiles = 20;
constexpr unsigned kHangScenarios = 10;
constexpr unsigned kMinAlternatingBuckets = 6;

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct OracleRun {
  ScenarioResult result;
  std::vector<std::int32_t> out;
  std::uint64_t digest = 0;
  axi::BusTrace trace;
};

OracleRun run_matmul(const fw::MatmulProblem& pr, std::uint64_t seed, const CongestionProfile& congestion,
                     bool record_trace) {
  ScenarioConfig cfg;
  cfg.firmware.builtin = "wait";
  cfg.seed = seed;
  cfg.congestion = congestion;
  const fw::MatmulLayout layout;
  Scenario s(cfg, {FirmwareEntry([&](FirmwareContext& c) {
                     fw::store_operands(c, pr, layout);
                     fw::start_matmul(c, pr, layout, fw::result_bytes(pr.m, pr.c));
                     return (fw::wait_dma_done(c, dut::soc_map::kOutputDma) & dut::dma_reg::kErr) ? 2 : 0;
                   }),
                   record_trace});
  OracleRun run;
  run.result = s.run();
  run.out = fw::load_result(s.memory(), layout.output, pr.m, pr.c);
  run.digest = run.result.memory_digest;
  if (record_trace) run.trace = s.bridge().trace();
  return run;
}

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  SplitMix64 rng(2024);
  for (unsigned i = 0; i < kMatmulScenarios; ++i) {
    const auto m = static_cast<unsigned>(rng.next_in(1, 16));
    const auto r = static_cast<unsigned>(rng.next_in(1, 16));
    const auto c = static_cast<unsigned>(rng.next_in(1, 16));
    const auto pr = fw::make_matmul_problem(m, r, c, rng.next());
    const auto run = run_matmul(pr, i, {}, false);
    if (run.result.exit_code != ExitCode::Ok) {
      v.fail("scenario " + std::to_string(i) + ": " + describe(run.result));
    } else if (run.out != test::matmul_oracle(m, r, c, pr.a, pr.w, pr.p)) {
      v.fail("scenario " + std::to_string(i) + " differs from the oracle");
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kMatmulBudgetSeconds) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) v.detail = std::to_string(kMatmulScenarios) + " scenarios exact in " + std::to_string(secs) + " s";
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto pr = fw::make_matmul_problem(16, 16, 16, 99);
  const auto want = test::matmul_oracle(16, 16, 16, pr.a, pr.w, pr.p);
  const auto base = run_matmul(pr, 0, {}, true);
  std::uint64_t total_violations = axi::check_trace(base.trace).size();
  if (base.out != want || base.result.exit_code != ExitCode::Ok) v.fail("zero-congestion run incorrect");
  const double probs[] = {0.2, 0.5, 0.8};
  for (unsigned s = 1; s <= kCongestionProfiles; ++s) {
    const auto profile = CongestionProfile::uniform(probs[(s - 1) % 3], 0, 7, s);
    const auto run = run_matmul(pr, s, profile, true);
    const auto violations = axi::check_trace(run.trace);
    total_violations += violations.size();
    if (run.result.exit_code != ExitCode::Ok) v.fail("seed " + std::to_string(s) + ": " + describe(run.result));
    if (run.digest != base.digest) v.fail("seed " + std::to_string(s) + ": DDR digest differs");
    if (run.out != want) v.fail("seed " + std::to_string(s) + ": output differs from the oracle");
    if (!violations.empty()) v.fail("seed " + std::to_string(s) + ": " + axi::to_string(violations[0]));
  }
  const double secs = seconds_since(t0);
  if (secs >= kCongestionBudgetSeconds) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = "21 runs, identical DDR, " + std::to_string(total_violations) + " violations, " +
               std::to_string(secs) + " s";
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  const auto root = test::scratch_dir("acceptance_determinism");
  std::vector<std::map<std::string, std::string>> files(2);
  for (int i = 0; i < 2; ++i) {
    ScenarioConfig cfg;
    cfg.firmware.builtin = "matmul";
    cfg.firmware.params = {{"m", 12}, {"r", 10}, {"c", 9}};
    cfg.seed = 31337;
    cfg.congestion = CongestionProfile::uniform(0.5, 0, 7, 0);
    const auto dir = root / ("run" + std::to_string(i));
    cfg.report.dir = dir.string();
    cfg.report.options.window_cycles = 32;
    cfg.vcd = (dir / "wave.vcd").string();
    const auto r = run_scenario(cfg);
    if (r.exit_code != ExitCode::Ok) v.fail(describe(r));
    for (const char* f : {"wave.vcd", "bandwidth.csv", "stalls.csv", "heatmap.csv"}) files[i][f] = test::slurp(dir / f);
  }
  for (const auto& [name, text] : files[0]) {
    if (text.empty()) v.fail(name + " is empty");
    if (text != files[1].at(name)) v.fail(name + " differs between runs");
  }
  if (v.pass) v.detail = "VCD (" + std::to_string(files[0]["wave.vcd"].size()) + " bytes) and 3 CSVs identical";
  return v;
}

Verdict criterion4() {
  Verdict v;
  SplitMix64 rng(404);
  Cycle latest = 0;
  for (unsigned i = 0; i < kHangScenarios; ++i) {
    ScenarioConfig cfg;
    cfg.firmware.builtin = "hang_reproducer";
    cfg.firmware.params = {{"m", static_cast<std::int64_t>(rng.next_in(1, 16))},
                           {"r", static_cast<std::int64_t>(rng.next_in(1, 16))},
                           {"c", static_cast<std::int64_t>(rng.next_in(1, 16))},
                           {"deficit", static_cast<std::int64_t>(rng.next_in(1, 300))}};
    cfg.seed = rng.next();
    cfg.max_cycles = kHangMaxCycles;
    if (i % 2) cfg.congestion = CongestionProfile::uniform(0.5, 0, 7, 0);
    const auto r = run_scenario(cfg);
    const auto text = describe(r);
    if (r.exit_code != ExitCode::Hang) {
      v.fail("scenario " + std::to_string(i) + " ended with " + std::string(outcome_name(r.sim.outcome)));
    } else if (text.find("'output.w'") == std::string::npos) {
      v.fail("scenario " + std::to_string(i) + " does not name output.w: " + text);
    }
    latest = std::max(latest, r.sim.final_cycle);
  }
  if (v.pass) v.detail = "10 hangs naming output.w, latest at cycle " + std::to_string(latest);
  return v;
}

// The scenario suite used for criteria 5 and 6: every example config plus
// congested variants of each DUT kind.
std::vector<std::pair<std::string, ScenarioConfig>> scenario_suite() {
  std::vector<std::pair<std::string, ScenarioConfig>> suite;
  for (const auto& e : std::filesystem::directory_iterator(COSIM_EXAMPLES_DIR)) {
    if (e.path().extension() != ".json") continue;
    auto cfg = load_config(e.path());
    cfg.report.dir.clear();
    suite.emplace_back(e.path().filename().string(), cfg);
  }
  std::sort(suite.begin(), suite.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (unsigned s = 1; s <= 4; ++s) {
    ScenarioConfig m;
    m.firmware.builtin = "matmul";
    m.firmware.params = {{"m", 16}, {"r", 8 + s}, {"c", 16 - s}};
    m.seed = s;
    m.congestion = CongestionProfile::uniform(0.25 * s - 0.05, 0, 2 * s, 0);
    suite.emplace_back("matmul-congested-" + std::to_string(s), m);

    ScenarioConfig rig;
    rig.dut.kind = "dma-rig";
    rig.dut.sink_ready_prob = 0.2 * s;
    rig.firmware.builtin = "contention";
    rig.firmware.params = {{"bytes", 4096}};
    rig.seed = s;
    rig.congestion = CongestionProfile::uniform(0.1 * s, 0, s, 0);
    suite.emplace_back("contention-" + std::to_string(s), rig);

    ScenarioConfig hang = m;
    hang.firmware.builtin = "hang_reproducer";
    hang.firmware.params["deficit"] = s;
    hang.watchdog_window = 2000;
    suite.emplace_back("hang-" + std::to_string(s), hang);
  }
  return suite;
}

Verdict criterion5() {
  Verdict v;
  struct Mutation {
    BridgeFault fault;
    axi::Rule rule;
    const char* name;
  };
  const Mutation mutations[] = {
      {BridgeFault::RetractValid, axi::Rule::ValidStability, "valid retraction"},
      {BridgeFault::ChangePayloadWhileStalled, axi::Rule::ValidStability, "payload change"},
      {BridgeFault::WrongLast, axi::Rule::Last, "wrong last"},
  };
  std::string counts;
  for (const auto& mut : mutations) {
    // The weights engine alone reads at bus rate into a sink taking 30% of
    // beats, so its FIFO fills and R beats stall at the bridge.
    ScenarioConfig cfg;
    cfg.dut.kind = "dma-rig";
    cfg.dut.sink_ready_prob = 0.3;
    cfg.firmware.builtin = "wait";
    cfg.max_cycles = 100'000;
    Scenario s(cfg, {FirmwareEntry([](FirmwareContext& c) {
                       fw::program_dma(c, dut::soc_map::kWeightsDma, 0x1000'0000, 4096);
                       fw::wait_dma_done(c, dut::soc_map::kWeightsDma);
                       return 0;
                     }),
                     false});
    s.bridge().inject_fault("weights", mut.fault);
    const auto r = s.run();
    std::size_t hits = 0;
    for (const auto& viol : r.violations) hits += viol.rule == mut.rule && viol.port == "weights";
    if (hits == 0) v.fail(std::string(mut.name) + ": no " + std::string(axi::rule_name(mut.rule)) + " violation");
    counts += std::string(counts.empty() ? "" : ", ") + mut.name + " " + std::to_string(hits);
  }
  std::size_t clean = 0, total = 0;
  for (const auto& [name, cfg] : scenario_suite()) {
    Scenario s(cfg, {std::nullopt, true});
    const auto r = s.run();
    const auto offline = axi::check_trace(s.bridge().trace());
    total += r.violations.size() + offline.size();
    if (!r.violations.empty() || !offline.empty()) v.fail(name + " reports violations on the clean bridge");
    ++clean;
  }
  if (v.pass) v.detail = counts + "; clean suite of " + std::to_string(clean) + " with " + std::to_string(total) + " violations";
  return v;
}

Verdict criterion6() {
  Verdict v;
  std::size_t n = 0;
  for (const auto& [name, cfg] : scenario_suite()) {
    Scenario s(cfg);
    const auto r = s.run();
    const std::uint64_t records = r.record_bytes_read + r.record_bytes_written;
    const std::uint64_t memory =
        (r.memory_bytes_read - r.in_flight_read_bytes) + (r.memory_bytes_written + r.uncommitted_write_bytes);
    if (r.window_bytes != records || records != memory) {
      v.fail(name + ": windows " + std::to_string(r.window_bytes) + ", records " + std::to_string(records) +
             ", memory " + std::to_string(memory));
    }
    for (const auto& port : s.profiler().bandwidth(cfg.report.options.window_cycles).windows) {
      for (const auto& w : port) {
        if (!(w.utilization >= 0.0 && w.utilization <= 1.0)) v.fail(name + ": utilization out of range");
      }
    }
    ++n;
  }

  // One MM2S engine alone, sink always ready: the port streams at bus rate.
  ScenarioConfig cfg;
  cfg.dut.kind = "dma-rig";
  cfg.firmware.builtin = "wait";
  Scenario s(cfg, {FirmwareEntry([](FirmwareContext& c) {
                     fw::program_dma(c, dut::soc_map::kWeightsDma, 0x1000'0000, 16 * 4096);
                     fw::wait_dma_done(c, dut::soc_map::kWeightsDma);
                     return 0;
                   }),
                   false});
  s.run();
  const auto bw = s.profiler().bandwidth(64);
  const auto port = *s.profiler().find_port("weights");
  double peak = 0.0;
  for (const auto& w : bw.windows[port]) peak = std::max(peak, w.utilization);
  if (peak != 1.0) v.fail("full-rate port peaks at " + std::to_string(peak));
  if (v.pass) v.detail = std::to_string(n) + " scenarios conserve bytes; full-rate port at utilization 1.0";
  return v;
}

Verdict criterion7() {
  Verdict v;
  ScenarioConfig cfg;
  cfg.dut.kind = "dma-rig";
  cfg.firmware.builtin = "contention";
  cfg.firmware.params = {{"bytes", 8192}};
  cfg.arbitration = ArbitrationPolicy::fixed({"input", "weights", "psum", "output"});
  Scenario s(cfg);
  const auto r = s.run();
  if (r.exit_code != ExitCode::Ok) v.fail(describe(r));
  const auto& p = s.profiler();
  const auto weights = p.stalls(*p.find_port("weights"));
  const auto input = p.stalls(*p.find_port("input"));
  if (weights < input) v.fail("weights " + std::to_string(weights) + " < input " + std::to_string(input));
  if (v.pass) v.detail = "stalls weights " + std::to_string(weights) + " >= input " + std::to_string(input);
  return v;
}

Verdict criterion8() {
  Verdict v;
  constexpr std::uint64_t kAddrBucket = 4096;
  constexpr Cycle kTimeBucket = 1024;
  constexpr Addr kBuffers[2] = {0x1000'0000, 0x1000'1000};
  ScenarioConfig cfg;
  cfg.firmware.builtin = "pingpong";
  cfg.firmware.params = {{"layers", 8},
                         {"period", static_cast<std::int64_t>(kTimeBucket)},
                         {"buffer0", static_cast<std::int64_t>(kBuffers[0])},
                         {"buffer1", static_cast<std::int64_t>(kBuffers[1])}};
  Scenario s(cfg);
  const auto r = s.run();
  if (r.exit_code != ExitCode::Ok) v.fail(describe(r));
  const auto heat = s.profiler().heatmap(kAddrBucket, kTimeBucket);
  const std::uint64_t rows[2] = {kBuffers[0] / kAddrBucket, kBuffers[1] / kAddrBucket};
  auto active = [&](std::uint64_t row, std::uint64_t t) {
    auto it = heat.bins.find({row, t});
    return it != heat.bins.end() && it->second.reads + it->second.writes > 0;
  };
  unsigned run = 0;
  std::string pattern;
  for (std::uint64_t t = 0; t * kTimeBucket < r.sim.final_cycle; ++t) {
    const bool a = active(rows[0], t), b = active(rows[1], t);
    pattern += a && b ? 'X' : a ? '0' : b ? '1' : '.';
    const bool expected_a = t % 2 == 0;
    if (a == expected_a && b == !expected_a) ++run;
    else break;
  }
  if (run < kMinAlternatingBuckets) v.fail("alternation held for " + std::to_string(run) + " buckets: " + pattern);
  if (v.pass) v.detail = "buffers alternate over " + std::to_string(run) + " time buckets (" + pattern + ")";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"golden-model equivalence", criterion1}, {"congestion invariance", criterion2},
      {"determinism", criterion3},              {"hang detection", criterion4},
      {"protocol checker sensitivity", criterion5}, {"profiler conservation", criterion6},
      {"arbitration stall ordering", criterion7}, {"ping-pong heatmap alternation", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
