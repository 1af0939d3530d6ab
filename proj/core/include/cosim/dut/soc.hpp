#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cosim/axi.hpp"
#include "cosim/bridge.hpp"
#include "cosim/congestion.hpp"
#include "cosim/dut/dma.hpp"
#include "cosim/dut/register_file.hpp"
#include "cosim/dut/synthetic.hpp"
#include "cosim/dut/systolic.hpp"
#include "cosim/kernel.hpp"

namespace cosim::dut {

/// Register map shared with firmware.
namespace soc_map {
inline constexpr Addr kWeightsDma = 0x0000;
inline constexpr Addr kInputDma = 0x1000;
inline constexpr Addr kPsumDma = 0x2000;
inline constexpr Addr kOutputDma = 0x3000;
inline constexpr Addr kController = 0x4000;
inline constexpr Addr kRegisterFile = 0x5000;
}  // namespace soc_map

/// A set of DUT processes plus the ports they expose. Owns the processes,
/// which register themselves with the kernel on construction.
struct Assembly {
  std::vector<std::unique_ptr<Process>> processes;
  std::vector<axi::AxiPort> manager_ports;
  std::vector<RegisterPort> register_ports;

  using CongestionFor = std::function<CongestionProfile(const std::string& port)>;
  /// Attaches every manager port and register port.
  void attach(MemoryBridge& memory, RegisterBridge& registers,
              const CongestionFor& congestion = {}) const;

  virtual ~Assembly() = default;
};

/// Four DMAs around a systolic array:
///   weights MM2S + input MM2S -> array -> adder <- psum MM2S
///   adder -> output S2MM
struct SystolicSoc : Assembly {
  Mm2sDma* weights = nullptr;
  Mm2sDma* input = nullptr;
  Mm2sDma* psum = nullptr;
  S2mmDma* output = nullptr;
  SystolicArray* array = nullptr;
  PsumAdder* adder = nullptr;
};

std::unique_ptr<SystolicSoc> build_systolic_soc(Kernel& kernel, unsigned max_rows = kMaxArrayDim,
                                                unsigned max_cols = kMaxArrayDim);

struct RegisterFileDut : Assembly {
  RegisterFile* regs = nullptr;
};

std::unique_ptr<RegisterFileDut> build_register_file_dut(Kernel& kernel, unsigned n_regs,
                                                         Addr base = soc_map::kRegisterFile);

/// The SoC's four DMAs at their usual addresses, with the array replaced by
/// synthetic endpoints: the three MM2S engines feed sinks and the S2MM engine
/// drains an unlimited source. Used to study interconnect contention.
struct DmaRig : Assembly {
  Mm2sDma* weights = nullptr;
  Mm2sDma* input = nullptr;
  Mm2sDma* psum = nullptr;
  S2mmDma* output = nullptr;
  StreamSink* weights_sink = nullptr;
  StreamSink* input_sink = nullptr;
  StreamSink* psum_sink = nullptr;
  StreamSource* output_source = nullptr;
};

std::unique_ptr<DmaRig> build_dma_rig(Kernel& kernel, double sink_ready_prob = 1.0,
                                      std::uint64_t seed = 0);

/// Human-readable description of a DUT kind and its register blocks.
struct RegisterInfo {
  std::string name;
  std::uint32_t offset = 0;
  std::string access;
  std::string description;
};

struct RegisterBlockInfo {
  std::string name;
  Addr base = 0;
  std::uint64_t length = 0;
  Cycle latency = 0;
  std::vector<RegisterInfo> registers;
};

struct DutInfo {
  std::string kind;
  std::string description;
  std::vector<std::string> manager_ports;
  std::vector<RegisterBlockInfo> blocks;
};

std::vector<DutInfo> dut_catalog();

}  // namespace cosim::dut
