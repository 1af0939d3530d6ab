#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cosim/bridge.hpp"
#include "cosim/kernel.hpp"
#include "cosim/memory.hpp"

namespace cosim {

class FirmwareContext;

/// Firmware program; returns 0 when its own checks pass.
using FirmwareEntry = std::function<int(FirmwareContext&)>;

/// What a firmware program can touch: registers (cost simulated time), DDR
/// (free) and the cycle counter. Valid only inside the firmware task.
class FirmwareContext {
 public:
  FirmwareContext(Kernel& kernel, MemoryImage& memory, RegisterBridge& registers);

  /// Starts `entry` as the kernel's firmware task, bound to this context.
  FirmwareHandle spawn(FirmwareEntry entry);

  /// Context of the firmware task currently executing, or nullptr outside it.
  static FirmwareContext* current();

  Kernel& kernel() { return kernel_; }
  MemoryImage& memory() { return memory_; }
  RegisterBridge& registers() { return registers_; }

  /// Status of the most recent register access.
  FbStatus last_status() const { return last_status_; }
  void set_last_status(FbStatus status) { last_status_ = status; }

 private:
  Kernel& kernel_;
  MemoryImage& memory_;
  RegisterBridge& registers_;
  FbStatus last_status_ = FbStatus::Ok;
};

FbStatus fb_write_32(FirmwareContext& ctx, Addr addr, std::uint32_t value);
/// Unmapped addresses read as kDecodeErrorValue; see ctx.last_status().
std::uint32_t fb_read_32(FirmwareContext& ctx, Addr addr);

void fb_mem_write(FirmwareContext& ctx, Addr addr, std::span<const std::uint8_t> data);
std::vector<std::uint8_t> fb_mem_read(FirmwareContext& ctx, Addr addr, std::size_t length);
void fb_mem_read_into(FirmwareContext& ctx, Addr addr, std::span<std::uint8_t> out);

void fb_wait_cycles(FirmwareContext& ctx, Cycle cycles);
Cycle fb_cycle_count(FirmwareContext& ctx);

}  // namespace cosim
