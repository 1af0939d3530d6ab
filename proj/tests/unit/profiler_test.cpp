#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "cosim/profiler.hpp"
#include "cosim/scenario.hpp"
#include "helpers.hpp"

namespace cosim {
namespace {

BeatRecord beat(Cycle c, PortId p, std::uint32_t bytes, Addr addr = 0,
                Direction d = Direction::Read) {
  return BeatRecord{c, p, d, bytes, false, addr};
}
BeatRecord stall(Cycle c, PortId p) { return BeatRecord{c, p, Direction::Read, 0, true, 0}; }

TEST(Profiler, SingleBeat) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  p.observe(beat(0, a, 16));
  p.finish(1);
  const auto bw = p.bandwidth(1);
  ASSERT_EQ(bw.windows[0].size(), 1u);
  EXPECT_EQ(bw.windows[0][0].bytes, 16u);
  EXPECT_DOUBLE_EQ(bw.windows[0][0].utilization, 1.0);
  EXPECT_EQ(p.total_bytes(), 16u);
}

TEST(Profiler, StallsCountOncePerCycle) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  p.observe(stall(3, a));
  p.observe(stall(3, a));
  p.observe(stall(4, a));
  EXPECT_EQ(p.stalls(a), 2u);
  EXPECT_EQ(p.total_bytes(), 0u);
}

TEST(Profiler, RejectsBadRecords) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  p.observe(beat(5, a, 16));
  EXPECT_THROW(p.observe(beat(4, a, 16)), Error);
  EXPECT_THROW(p.observe(BeatRecord{6, a, Direction::Read, 4, true, 0}), Error);
  EXPECT_THROW(p.observe(beat(6, a, 17)), Error);
  EXPECT_THROW(p.observe(beat(6, 7, 1)), Error);
  EXPECT_THROW(p.add_port("a", 16), Error);
  EXPECT_THROW(p.add_port("b", 0), Error);
  EXPECT_THROW(p.bandwidth(0), Error);
  EXPECT_THROW(p.heatmap(0, 1), Error);
}

TEST(Profiler, WindowUtilization) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  for (Cycle c = 0; c < 8; ++c) p.observe(beat(c, a, 16));  // saturated window 0
  p.observe(beat(9, a, 16));                                 // 1 of 8 cycles in window 1
  p.finish(16);
  const auto bw = p.bandwidth(8);
  ASSERT_EQ(bw.windows[0].size(), 2u);
  EXPECT_DOUBLE_EQ(bw.windows[0][0].utilization, 1.0);
  EXPECT_DOUBLE_EQ(bw.windows[0][1].utilization, 0.125);
}

TEST(Profiler, TrailingPartialWindow) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  p.observe(beat(8, a, 16));
  p.observe(beat(9, a, 8));
  p.finish(10);
  const auto bw = p.bandwidth(8);
  ASSERT_EQ(bw.windows[0].size(), 2u);
  EXPECT_EQ(bw.windows[0][1].length, 2u);
  EXPECT_DOUBLE_EQ(bw.windows[0][1].utilization, 24.0 / 32.0);
  EXPECT_EQ(format_utilization(0.75), "0.750000");
}

// Random record streams: window bytes, heatmap bins and totals against a
// brute-force recount of the same records.
TEST(Profiler, AggregatesMatchBruteForce) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SplitMix64 rng(seed);
    Profiler p;
    const std::vector<unsigned> widths{16, 8, 4};
    for (unsigned i = 0; i < widths.size(); ++i) p.add_port("p" + std::to_string(i), widths[i]);
    std::vector<BeatRecord> all;
    for (Cycle c = 0; c < 500; ++c) {
      for (PortId port = 0; port < 3; ++port) {
        const auto roll = rng.next_in(0, 3);
        if (roll == 0) continue;
        BeatRecord r;
        r.cycle = c;
        r.port = port;
        if (roll == 1) {
          r.stalled = true;
        } else {
          r.bytes = static_cast<std::uint32_t>(rng.next_in(1, widths[port]));
          r.addr = rng.next_in(0, 0xFFFF);
          r.direction = roll == 2 ? Direction::Read : Direction::Write;
        }
        p.observe(r);
        all.push_back(r);
      }
    }
    p.finish(500);

    const Cycle window = 1 + rng.next_in(0, 63);
    const auto bw = p.bandwidth(window);
    std::map<std::pair<PortId, Cycle>, std::uint64_t> want_bytes;
    std::map<std::pair<std::uint64_t, std::uint64_t>, HeatBin> want_heat;
    std::vector<std::uint64_t> want_stalls(3, 0);
    std::uint64_t total = 0;
    for (const auto& r : all) {
      if (r.stalled) {
        ++want_stalls[r.port];
        continue;
      }
      want_bytes[{r.port, r.cycle / window}] += r.bytes;
      auto& bin = want_heat[{r.addr / 256, r.cycle / 32}];
      (r.direction == Direction::Read ? bin.reads : bin.writes)++;
      total += r.bytes;
    }
    std::uint64_t window_total = 0;
    for (PortId port = 0; port < 3; ++port) {
      EXPECT_EQ(p.stalls(port), want_stalls[port]);
      for (std::size_t k = 0; k < bw.windows[port].size(); ++k) {
        const auto& w = bw.windows[port][k];
        EXPECT_EQ(w.bytes, (want_bytes[{port, k}]));
        EXPECT_GE(w.utilization, 0.0);
        EXPECT_LE(w.utilization, 1.0);
        window_total += w.bytes;
      }
    }
    EXPECT_EQ(window_total, total);
    EXPECT_EQ(p.total_bytes(), total);
    EXPECT_EQ(p.heatmap(256, 32).bins, want_heat);
  }
}

TEST(Profiler, HeatmapFiltersByPort) {
  Profiler p;
  const auto a = p.add_port("a", 16);
  const auto b = p.add_port("b", 16);
  p.observe(beat(0, a, 16, 0x1000));
  p.observe(beat(0, b, 16, 0x2000, Direction::Write));
  const auto only_b = p.heatmap(0x1000, 10, b);
  ASSERT_EQ(only_b.bins.size(), 1u);
  EXPECT_EQ(only_b.bins.begin()->first, (std::pair<std::uint64_t, std::uint64_t>{2, 0}));
  EXPECT_EQ(only_b.bins.begin()->second.writes, 1u);
  EXPECT_EQ(p.heatmap(0x1000, 10).total(), 2u);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Profiler sample_profiler() {
  Profiler p;
  const auto a = p.add_port("weights", 16);
  const auto b = p.add_port("output", 16);
  for (Cycle c = 0; c < 300; ++c) {
    if (c % 3) p.observe(beat(c, a, 16, 0x1000'0000 + 16 * c));
    else p.observe(stall(c, a));
    if (c % 5 == 0) p.observe(beat(c, b, 16, 0x1003'0000 + 16 * c, Direction::Write));
  }
  p.finish(300);
  return p;
}

TEST(ProfilerExport, CsvRoundTrip) {
  const auto p = sample_profiler();
  const ReportOptions opt{64, 4096, 128};
  const auto dir = test::scratch_dir("profiler_csv");
  export_report(p, ReportFormat::Csv, opt, dir);
  const auto tables = make_tables(p, opt);

  const auto bw = read_csv(dir / "bandwidth.csv");
  ASSERT_EQ(bw.size(), tables.bandwidth.size() + 1);
  EXPECT_EQ(bw[0], (std::vector<std::string>{"window_start_cycle", "port", "bytes", "utilization"}));
  std::uint64_t bytes = 0;
  for (std::size_t i = 1; i < bw.size(); ++i) {
    const auto& want = tables.bandwidth[i - 1];
    EXPECT_EQ(std::stoull(bw[i][0]), want.window_start);
    EXPECT_EQ(bw[i][1], want.port);
    EXPECT_EQ(std::stoull(bw[i][2]), want.bytes);
    EXPECT_EQ(bw[i][3], want.utilization);
    bytes += std::stoull(bw[i][2]);
  }
  EXPECT_EQ(bytes, p.total_bytes());

  const auto st = read_csv(dir / "stalls.csv");
  ASSERT_EQ(st.size(), 3u);
  EXPECT_EQ(st[1], (std::vector<std::string>{"weights", "100"}));
  EXPECT_EQ(st[2], (std::vector<std::string>{"output", "0"}));

  const auto hm = read_csv(dir / "heatmap.csv");
  ASSERT_EQ(hm.size(), tables.heatmap.size() + 1);
  std::uint64_t accesses = 0;
  for (std::size_t i = 1; i < hm.size(); ++i) accesses += std::stoull(hm[i][2]) + std::stoull(hm[i][3]);
  EXPECT_EQ(accesses, p.data_beats());
}

TEST(ProfilerExport, JsonMatchesTables) {
  const auto p = sample_profiler();
  const ReportOptions opt{100, 65536, 50};
  const auto path = test::scratch_dir("profiler_json") / "report.json";
  export_report(p, ReportFormat::Json, opt, path);
  const auto text = test::slurp(path);
  EXPECT_NE(text.find("\"window_cycles\": 100"), std::string::npos);
  EXPECT_NE(text.find("\"stall_cycles\": 100"), std::string::npos);
  // Three windows for each of the two ports.
  std::size_t n = 0;
  for (auto pos = text.find("window_start_cycle"); pos != std::string::npos;
       pos = text.find("window_start_cycle", pos + 1)) {
    ++n;
  }
  EXPECT_EQ(n, 6u);
}

TEST(ProfilerExport, EmptyProfilerWritesHeadersOnly) {
  Profiler p;
  const auto dir = test::scratch_dir("profiler_empty");
  export_report(p, ReportFormat::Csv, {}, dir);
  EXPECT_EQ(test::slurp(dir / "bandwidth.csv"), "window_start_cycle,port,bytes,utilization\n");
  EXPECT_EQ(test::slurp(dir / "stalls.csv"), "port,stall_cycles\n");
  EXPECT_EQ(test::slurp(dir / "heatmap.csv"), "addr_bucket,time_bucket,reads,writes\n");
}

TEST(ProfilerExport, RepeatedExportIsByteIdentical) {
  const auto p = sample_profiler();
  const auto d1 = test::scratch_dir("profiler_rep1");
  const auto d2 = test::scratch_dir("profiler_rep2");
  export_report(p, ReportFormat::Csv, {}, d1);
  export_report(p, ReportFormat::Csv, {}, d2);
  for (const char* f : {"bandwidth.csv", "stalls.csv", "heatmap.csv"}) {
    EXPECT_EQ(test::slurp(d1 / f), test::slurp(d2 / f)) << f;
  }
}

TEST(ProfilerExport, UnwritablePathThrows) {
  const auto p = sample_profiler();
  const auto file = test::scratch_dir("profiler_blocked") / "plain";
  std::ofstream(file) << "x";
  EXPECT_THROW(export_report(p, ReportFormat::Csv, {}, file), Error);
  EXPECT_THROW(export_report(p, ReportFormat::Json, {}, file / "r.json"), Error);
}

// Bytes seen by the profiler equal bytes moved by the bridge equal bytes the
// DMAs were programmed for, under congestion.
TEST(ProfilerScenario, ThreeWayConservation) {
  ScenarioConfig cfg;
  cfg.firmware.builtin = "matmul";
  cfg.firmware.params = {{"m", 20}, {"r", 12}, {"c", 10}};
  cfg.congestion = CongestionProfile::uniform(0.4, 0, 5, 0);
  cfg.seed = 3;
  Scenario s(cfg);
  const auto res = s.run();
  ASSERT_EQ(res.exit_code, ExitCode::Ok) << describe(res);
  const std::uint64_t programmed =
      fw::weights_bytes(12) + fw::input_bytes(20) + 2 * fw::result_bytes(20, 10);
  EXPECT_EQ(s.profiler().total_bytes(Direction::Read), s.memory().bus_bytes_read());
  EXPECT_EQ(s.profiler().total_bytes(Direction::Write), s.memory().bus_bytes_written());
  // Firmware's direct operand stores do not cross the bus.
  EXPECT_EQ(s.profiler().total_bytes(), programmed);
}

}  // namespace
}  // namespace cosim
