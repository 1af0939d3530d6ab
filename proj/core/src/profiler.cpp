#include "cosim/profiler.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace cosim {

std::uint64_t Heatmap::total() const {
  std::uint64_t n = 0;
  for (const auto& [key, bin] : bins) n += bin.reads + bin.writes;
  return n;
}

PortId Profiler::add_port(std::string name, unsigned bus_bytes) {
  if (find_port(name)) throw Error("profiler: duplicate port '" + name + "'");
  if (bus_bytes == 0) throw Error("profiler: bus width must be >= 1");
  ports_.push_back(PortInfo{std::move(name), bus_bytes, std::nullopt, std::nullopt, 0});
  return static_cast<PortId>(ports_.size() - 1);
}

std::optional<PortId> Profiler::find_port(const std::string& name) const {
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].name == name) return static_cast<PortId>(i);
  }
  return std::nullopt;
}

void Profiler::observe(const BeatRecord& record) {
  if (record.port >= ports_.size()) throw Error("profiler: unknown port id");
  PortInfo& port = ports_[record.port];
  if (port.last_cycle && record.cycle < *port.last_cycle) {
    throw Error("profiler: out-of-order record for port '" + port.name + "' (cycle " +
                std::to_string(record.cycle) + " after " + std::to_string(*port.last_cycle) + ")");
  }
  if (record.bytes > port.bus_bytes) throw Error("profiler: beat larger than bus width");
  if (record.stalled && record.bytes != 0) throw Error("profiler: stalled record carries bytes");

  if (record.stalled) {
    // At most one stalled cycle per port per cycle, whatever the channel.
    if (port.last_stall_cycle == record.cycle) return;
    port.last_stall_cycle = record.cycle;
    ++port.stall_cycles;
  } else {
    ++data_beats_;
  }
  port.last_cycle = record.cycle;
  records_.push_back(record);
}

void Profiler::finish(Cycle end_cycle) { end_cycle_ = std::max(end_cycle_, end_cycle); }

Cycle Profiler::end_cycle() const {
  Cycle end = end_cycle_;
  for (const auto& r : records_) end = std::max(end, r.cycle + 1);
  return end;
}

BandwidthSeries Profiler::bandwidth(Cycle window_cycles) const {
  if (window_cycles < 1) throw Error("bandwidth: window must be >= 1 cycle");
  BandwidthSeries series;
  series.window_cycles = window_cycles;
  const Cycle end = end_cycle();
  const std::size_t n_windows = static_cast<std::size_t>((end + window_cycles - 1) / window_cycles);
  for (const auto& p : ports_) {
    series.ports.push_back(p.name);
    series.bus_bytes.push_back(p.bus_bytes);
    std::vector<BandwidthWindow> windows(n_windows);
    for (std::size_t k = 0; k < n_windows; ++k) {
      windows[k].start = k * window_cycles;
      windows[k].length = std::min<Cycle>(window_cycles, end - windows[k].start);
    }
    series.windows.push_back(std::move(windows));
  }
  for (const auto& r : records_) {
    if (r.stalled) continue;
    series.windows[r.port][r.cycle / window_cycles].bytes += r.bytes;
  }
  for (std::size_t p = 0; p < ports_.size(); ++p) {
    for (auto& w : series.windows[p]) {
      w.utilization = static_cast<double>(w.bytes) /
                      (static_cast<double>(ports_[p].bus_bytes) * static_cast<double>(w.length));
    }
  }
  return series;
}

std::vector<StallCount> Profiler::stalls() const {
  std::vector<StallCount> out;
  for (const auto& p : ports_) out.push_back(StallCount{p.name, p.stall_cycles});
  return out;
}

Heatmap Profiler::heatmap(std::uint64_t addr_bucket_bytes, Cycle time_bucket_cycles,
                          std::optional<PortId> only_port) const {
  if (addr_bucket_bytes < 1 || time_bucket_cycles < 1) throw Error("heatmap: buckets must be >= 1");
  Heatmap map;
  map.addr_bucket_bytes = addr_bucket_bytes;
  map.time_bucket_cycles = time_bucket_cycles;
  for (const auto& r : records_) {
    if (r.stalled || (only_port && r.port != *only_port)) continue;
    HeatBin& bin = map.bins[{r.addr / addr_bucket_bytes, r.cycle / time_bucket_cycles}];
    (r.direction == Direction::Read ? bin.reads : bin.writes) += 1;
  }
  return map;
}

std::uint64_t Profiler::total_bytes() const {
  return total_bytes(Direction::Read) + total_bytes(Direction::Write);
}

std::uint64_t Profiler::total_bytes(Direction direction) const {
  std::uint64_t n = 0;
  for (const auto& r : records_) {
    if (!r.stalled && r.direction == direction) n += r.bytes;
  }
  return n;
}

std::string format_utilization(double u) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", u);
  return buf;
}

ReportTables make_tables(const Profiler& profiler, const ReportOptions& options) {
  ReportTables t;
  const auto series = profiler.bandwidth(options.window_cycles);
  const std::size_t n_windows = series.windows.empty() ? 0 : series.windows.front().size();
  for (std::size_t k = 0; k < n_windows; ++k) {
    for (std::size_t p = 0; p < series.ports.size(); ++p) {
      const auto& w = series.windows[p][k];
      t.bandwidth.push_back({w.start, series.ports[p], w.bytes, format_utilization(w.utilization)});
    }
  }
  t.stalls = profiler.stalls();
  const auto heat = profiler.heatmap(options.addr_bucket_bytes, options.time_bucket_cycles);
  for (const auto& [key, bin] : heat.bins) {
    t.heatmap.push_back({key.first, key.second, bin.reads, bin.writes});
  }
  return t;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report '" + path.string() + "'");
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("I/O error writing report '" + path.string() + "'");
}

}  // namespace

void export_report(const Profiler& profiler, ReportFormat format, const ReportOptions& options,
                   const std::filesystem::path& path) {
  const ReportTables t = make_tables(profiler, options);
  if (format == ReportFormat::Csv) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create report directory '" + path.string() + "': " + ec.message());

    const auto bw_path = path / "bandwidth.csv";
    auto bw = open_for_write(bw_path);
    bw << "window_start_cycle,port,bytes,utilization\n";
    for (const auto& r : t.bandwidth) {
      bw << r.window_start << ',' << r.port << ',' << r.bytes << ',' << r.utilization << '\n';
    }
    check_written(bw, bw_path);

    const auto st_path = path / "stalls.csv";
    auto st = open_for_write(st_path);
    st << "port,stall_cycles\n";
    for (const auto& s : t.stalls) st << s.port << ',' << s.stall_cycles << '\n';
    check_written(st, st_path);

    const auto hm_path = path / "heatmap.csv";
    auto hm = open_for_write(hm_path);
    hm << "addr_bucket,time_bucket,reads,writes\n";
    for (const auto& h : t.heatmap) {
      hm << h.addr_bucket << ',' << h.time_bucket << ',' << h.reads << ',' << h.writes << '\n';
    }
    check_written(hm, hm_path);
    return;
  }

  nlohmann::ordered_json j;
  j["window_cycles"] = options.window_cycles;
  j["addr_bucket_bytes"] = options.addr_bucket_bytes;
  j["time_bucket_cycles"] = options.time_bucket_cycles;
  j["bandwidth"] = nlohmann::ordered_json::array();
  for (const auto& r : t.bandwidth) {
    j["bandwidth"].push_back({{"window_start_cycle", r.window_start},
                              {"port", r.port},
                              {"bytes", r.bytes},
                              {"utilization", r.utilization}});
  }
  j["stalls"] = nlohmann::ordered_json::array();
  for (const auto& s : t.stalls) {
    j["stalls"].push_back({{"port", s.port}, {"stall_cycles", s.stall_cycles}});
  }
  j["heatmap"] = nlohmann::ordered_json::array();
  for (const auto& h : t.heatmap) {
    j["heatmap"].push_back({{"addr_bucket", h.addr_bucket},
                            {"time_bucket", h.time_bucket},
                            {"reads", h.reads},
                            {"writes", h.writes}});
  }
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  check_written(out, path);
}

}  // namespace cosim
