#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosim/types.hpp"

namespace cosim {

enum class Direction : std::uint8_t { Read, Write };

using PortId = std::uint32_t;

/// One data beat (or one stalled cycle) observed on a bridged port.
struct BeatRecord {
  Cycle cycle = 0;
  PortId port = 0;
  Direction direction = Direction::Read;
  std::uint32_t bytes = 0;  // 0 for stalled cycles
  bool stalled = false;
  Addr addr = 0;  // first byte touched (data beats only)
  friend bool operator==(const BeatRecord&, const BeatRecord&) = default;
};

struct BandwidthWindow {
  Cycle start = 0;
  Cycle length = 0;  // shorter than window_cycles only for the trailing window
  std::uint64_t bytes = 0;
  double utilization = 0.0;  // bytes / (bus_bytes * length)
  friend bool operator==(const BandwidthWindow&, const BandwidthWindow&) = default;
};

struct BandwidthSeries {
  Cycle window_cycles = 1;
  std::vector<std::string> ports;
  std::vector<unsigned> bus_bytes;
  std::vector<std::vector<BandwidthWindow>> windows;  // [port][window]
};

struct HeatBin {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  friend bool operator==(const HeatBin&, const HeatBin&) = default;
};

struct Heatmap {
  std::uint64_t addr_bucket_bytes = 1;
  Cycle time_bucket_cycles = 1;
  /// (addr bucket, time bucket) -> counts
  std::map<std::pair<std::uint64_t, std::uint64_t>, HeatBin> bins;

  std::uint64_t total() const;
};

struct StallCount {
  std::string port;
  std::uint64_t stall_cycles = 0;
  friend bool operator==(const StallCount&, const StallCount&) = default;
};

/// Records every beat crossing the memory bridge and derives bandwidth,
/// stall and access-pattern views from them.
class Profiler {
 public:
  PortId add_port(std::string name, unsigned bus_bytes);
  std::optional<PortId> find_port(const std::string& name) const;
  const std::string& port_name(PortId id) const { return ports_.at(id).name; }
  std::size_t port_count() const { return ports_.size(); }

  /// Records must arrive in non-decreasing cycle order per port.
  void observe(const BeatRecord& record);
  /// Marks the end of the observed time span (exclusive).
  void finish(Cycle end_cycle);
  Cycle end_cycle() const;

  BandwidthSeries bandwidth(Cycle window_cycles) const;
  std::vector<StallCount> stalls() const;
  std::uint64_t stalls(PortId port) const { return ports_.at(port).stall_cycles; }
  Heatmap heatmap(std::uint64_t addr_bucket_bytes, Cycle time_bucket_cycles,
                  std::optional<PortId> only_port = std::nullopt) const;

  std::uint64_t total_bytes() const;
  std::uint64_t total_bytes(Direction direction) const;
  std::uint64_t data_beats() const { return data_beats_; }
  const std::vector<BeatRecord>& records() const { return records_; }

  void count_register_access() { ++register_accesses_; }
  std::uint64_t register_accesses() const { return register_accesses_; }

 private:
  struct PortInfo {
    std::string name;
    unsigned bus_bytes = 16;
    std::optional<Cycle> last_cycle;
    std::optional<Cycle> last_stall_cycle;
    std::uint64_t stall_cycles = 0;
  };

  std::vector<PortInfo> ports_;
  std::vector<BeatRecord> records_;
  std::uint64_t data_beats_ = 0;
  std::uint64_t register_accesses_ = 0;
  Cycle end_cycle_ = 0;
};

enum class ReportFormat { Csv, Json };

struct ReportOptions {
  Cycle window_cycles = 256;
  std::uint64_t addr_bucket_bytes = 4096;
  Cycle time_bucket_cycles = 1024;
  friend bool operator==(const ReportOptions&, const ReportOptions&) = default;
};

/// CSV: `path` is a directory receiving bandwidth.csv, stalls.csv and heatmap.csv.
///   bandwidth.csv  window_start_cycle,port,bytes,utilization
///   stalls.csv     port,stall_cycles
///   heatmap.csv    addr_bucket,time_bucket,reads,writes
/// JSON: `path` is a file holding the same three tables.
void export_report(const Profiler& profiler, ReportFormat format, const ReportOptions& options,
                   const std::filesystem::path& path);

/// Aggregates as written to disk; used to verify exports.
struct ReportTables {
  struct BandwidthRow {
    Cycle window_start = 0;
    std::string port;
    std::uint64_t bytes = 0;
    std::string utilization;
    friend bool operator==(const BandwidthRow&, const BandwidthRow&) = default;
  };
  struct HeatRow {
    std::uint64_t addr_bucket = 0;
    std::uint64_t time_bucket = 0;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    friend bool operator==(const HeatRow&, const HeatRow&) = default;
  };
  std::vector<BandwidthRow> bandwidth;
  std::vector<StallCount> stalls;
  std::vector<HeatRow> heatmap;
  friend bool operator==(const ReportTables&, const ReportTables&) = default;
};

ReportTables make_tables(const Profiler& profiler, const ReportOptions& options);
std::string format_utilization(double u);

}  // namespace cosim
