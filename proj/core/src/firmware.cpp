#include "cosim/firmware.hpp"

namespace cosim {

namespace {

FirmwareContext* g_current = nullptr;

class CurrentGuard {
 public:
  explicit CurrentGuard(FirmwareContext* ctx) : prev_(g_current) { g_current = ctx; }
  ~CurrentGuard() { g_current = prev_; }
  CurrentGuard(const CurrentGuard&) = delete;
  CurrentGuard& operator=(const CurrentGuard&) = delete;

 private:
  FirmwareContext* prev_;
};

void require_firmware(FirmwareContext& ctx, const char* op) {
  if (!ctx.kernel().in_firmware()) {
    throw Error(std::string(op) + " called outside the firmware task");
  }
}

}  // namespace

FirmwareContext::FirmwareContext(Kernel& kernel, MemoryImage& memory, RegisterBridge& registers)
    : kernel_(kernel), memory_(memory), registers_(registers) {}

FirmwareHandle FirmwareContext::spawn(FirmwareEntry entry) {
  return kernel_.spawn_firmware([this, entry = std::move(entry)] {
    CurrentGuard guard(this);
    return entry(*this);
  });
}

FirmwareContext* FirmwareContext::current() {
  if (g_current && g_current->kernel().in_firmware()) return g_current;
  return nullptr;
}

FbStatus fb_write_32(FirmwareContext& ctx, Addr addr, std::uint32_t value) {
  require_firmware(ctx, "fb_write_32");
  const auto result = ctx.registers().access(AccessKind::Write, addr, value);
  ctx.set_last_status(result.status);
  return result.status;
}

std::uint32_t fb_read_32(FirmwareContext& ctx, Addr addr) {
  require_firmware(ctx, "fb_read_32");
  const auto result = ctx.registers().access(AccessKind::Read, addr);
  ctx.set_last_status(result.status);
  return result.value;
}

void fb_mem_write(FirmwareContext& ctx, Addr addr, std::span<const std::uint8_t> data) {
  require_firmware(ctx, "fb_mem_write");
  ctx.memory().write_bytes(addr, data, Origin::from_firmware());
}

std::vector<std::uint8_t> fb_mem_read(FirmwareContext& ctx, Addr addr, std::size_t length) {
  std::vector<std::uint8_t> out(length);
  fb_mem_read_into(ctx, addr, out);
  return out;
}

void fb_mem_read_into(FirmwareContext& ctx, Addr addr, std::span<std::uint8_t> out) {
  require_firmware(ctx, "fb_mem_read");
  ctx.memory().read_into(addr, out, Origin::from_firmware());
}

void fb_wait_cycles(FirmwareContext& ctx, Cycle cycles) {
  require_firmware(ctx, "fb_wait_cycles");
  ctx.kernel().firmware_wait(cycles);
}

Cycle fb_cycle_count(FirmwareContext& ctx) {
  require_firmware(ctx, "fb_cycle_count");
  return ctx.kernel().now();
}

}  // namespace cosim
