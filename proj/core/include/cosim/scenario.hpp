#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cosim/bridge.hpp"
#include "cosim/builtin_firmware.hpp"
#include "cosim/congestion.hpp"
#include "cosim/dut/soc.hpp"
#include "cosim/firmware.hpp"
#include "cosim/kernel.hpp"
#include "cosim/memory.hpp"
#include "cosim/profiler.hpp"
#include "cosim/vcd.hpp"

namespace cosim {

struct DutSpec {
  std::string kind = "systolic-soc";  // systolic-soc | register-file | dma-rig
  unsigned rows = 16;                 // systolic-soc: physical array size
  unsigned cols = 16;
  unsigned registers = 16;            // register-file
  Addr base = dut::soc_map::kRegisterFile;
  double sink_ready_prob = 1.0;       // dma-rig
  friend bool operator==(const DutSpec&, const DutSpec&) = default;
};

struct FirmwareSpec {
  std::string builtin;  // or empty when `library` is used
  fw::Params params;
  std::string library;  // shared object exporting `int entry(void)`
  std::string entry = "fb_main";
  friend bool operator==(const FirmwareSpec&, const FirmwareSpec&) = default;
};

struct ReportSpec {
  std::string dir;  // empty: no report files
  std::vector<ReportFormat> formats{ReportFormat::Csv};
  ReportOptions options;
  friend bool operator==(const ReportSpec&, const ReportSpec&) = default;
};

struct PreloadSpec {
  std::string file;
  Addr base = 0;
  friend bool operator==(const PreloadSpec&, const PreloadSpec&) = default;
};

/// Everything needed to reproduce one run. Congestion draws, sink behaviour
/// and (unless overridden by data_seed) firmware data all derive from `seed`.
struct ScenarioConfig {
  DutSpec dut;
  FirmwareSpec firmware;
  std::uint64_t seed = 0;
  Cycle max_cycles = 1'000'000;
  Cycle watchdog_window = 10'000;
  bool strict = false;
  ArbitrationPolicy arbitration;
  CongestionProfile congestion;  // default for every port; its seed field is ignored
  std::map<std::string, CongestionProfile> port_congestion;
  ReportSpec report;
  std::string vcd;
  std::vector<WatchRegion> watch;
  std::vector<PreloadSpec> preload;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses the JSON scenario format. Relative paths are resolved against
/// `base_dir`; referenced input files must exist. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& file);
std::string serialize_config(const ScenarioConfig& config);

/// Process exit codes of the `run` subcommand.
enum class ExitCode : int {
  Ok = 0,
  VerificationMismatch = 1,
  Hang = 2,
  ProtocolViolation = 3,
  ConfigError = 4,
  MaxCycles = 5,
};

struct ScenarioResult {
  SimResult sim;
  std::vector<axi::ProtocolViolation> violations;
  ExitCode exit_code = ExitCode::Ok;
  std::uint64_t memory_digest = 0;

  // Conservation terms.
  std::uint64_t record_bytes_read = 0;
  std::uint64_t record_bytes_written = 0;
  std::uint64_t window_bytes = 0;
  std::uint64_t memory_bytes_read = 0;
  std::uint64_t memory_bytes_written = 0;
  std::uint64_t in_flight_read_bytes = 0;
  std::uint64_t uncommitted_write_bytes = 0;

  std::vector<AccessEvent> watch_events;
};

ExitCode exit_code_for(const SimResult& sim, bool violations_recorded);

/// An assembled, runnable scenario. Internals are exposed so tests can arm
/// faults or swap firmware before run().
class Scenario {
 public:
  struct Overrides {
    std::optional<FirmwareEntry> firmware;
    bool record_trace = false;
  };

  explicit Scenario(ScenarioConfig config) : Scenario(std::move(config), Overrides{}) {}
  Scenario(ScenarioConfig config, Overrides overrides);
  ~Scenario();
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  ScenarioResult run();
  /// Writes report files and the VCD named in the config.
  void write_outputs(const ScenarioResult& result) const;

  const ScenarioConfig& config() const { return config_; }
  Kernel& kernel() { return *kernel_; }
  MemoryImage& memory() { return *memory_; }
  Profiler& profiler() { return *profiler_; }
  MemoryBridge& bridge() { return *bridge_; }
  RegisterBridge& registers() { return *registers_; }
  dut::Assembly& assembly() { return *assembly_; }
  /// Non-null for the matching DUT kinds.
  dut::SystolicSoc* soc();
  dut::RegisterFileDut* register_file();
  dut::DmaRig* dma_rig();
  const VcdWriter* waveform() const;

 private:
  ScenarioConfig config_;
  std::unique_ptr<Kernel> kernel_;
  std::unique_ptr<MemoryImage> memory_;
  std::unique_ptr<Profiler> profiler_;
  std::unique_ptr<MemoryBridge> bridge_;
  std::unique_ptr<RegisterBridge> registers_;
  std::unique_ptr<dut::Assembly> assembly_;
  std::unique_ptr<FirmwareContext> firmware_;
  std::unique_ptr<WaveformTracer> tracer_;
  void* library_ = nullptr;
  bool ran_ = false;
};

/// Convenience: assemble, run, write outputs.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Text written to the diagnostics stream for a finished run.
std::string describe(const ScenarioResult& result);

}  // namespace cosim
