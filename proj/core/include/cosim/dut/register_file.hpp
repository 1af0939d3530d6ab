#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cosim/bridge.hpp"
#include "cosim/kernel.hpp"

namespace cosim::dut {

/// Scratch registers for smoke tests: 32-bit read/write words, 1-cycle access.
class RegisterFile final : public Process {
 public:
  static constexpr Cycle kLatency = 1;

  RegisterFile(std::string name, unsigned n_regs);

  std::string_view name() const override { return name_; }
  void eval(Cycle now) override;
  void debug_signals(std::vector<DebugSignal>& out) override;

  RegisterPort register_port(Addr base);

  /// Hardware-side update of register `index` during cycle `at`; firmware
  /// reads observe it from cycle at + 1.
  void hw_write_at(Cycle at, unsigned index, std::uint32_t value);

  std::uint32_t value(unsigned index) const { return regs_.at(index); }
  unsigned size() const { return static_cast<unsigned>(regs_.size()); }

 private:
  std::string name_;
  std::vector<std::uint32_t> regs_;
  std::multimap<Cycle, std::pair<unsigned, std::uint32_t>> scheduled_;
};

}  // namespace cosim::dut
