#include "cosim/bridge.hpp"

namespace cosim {

std::string_view status_name(FbStatus status) {
  switch (status) {
    case FbStatus::Ok: return "ok";
    case FbStatus::DecodeError: return "decode-error";
    case FbStatus::Misaligned: return "misaligned";
  }
  return "?";
}

RegisterBridge::RegisterBridge(Kernel& kernel, Profiler* profiler, bool strict)
    : kernel_(kernel), profiler_(profiler), strict_(strict) {}

void RegisterBridge::add_port(RegisterPort port) {
  if (kernel_.started()) throw Error("simulation already started");
  if (port.length < 4 || port.length % 4 != 0 || port.base % 4 != 0) {
    throw ConfigError("register port '" + port.name + "' must be 4-byte aligned and sized");
  }
  if (!port.read || !port.write) throw ConfigError("register port '" + port.name + "' lacks handlers");
  for (const auto& other : ports_) {
    const bool disjoint = port.base + port.length <= other.base ||
                          other.base + other.length <= port.base;
    if (!disjoint) {
      throw ConfigError("register port '" + port.name + "' overlaps '" + other.name + "'");
    }
  }
  ports_.push_back(std::move(port));
}

const RegisterPort* RegisterBridge::find(Addr addr) const {
  for (const auto& p : ports_) {
    if (addr >= p.base && addr - p.base < p.length) return &p;
  }
  return nullptr;
}

RegisterAccessResult RegisterBridge::access(AccessKind kind, Addr addr, std::uint32_t value) {
  if (!kernel_.in_firmware()) throw Error("register access outside the firmware task");
  const char* verb = kind == AccessKind::Read ? "read" : "write";
  if (addr % 4 != 0) {
    if (strict_) kernel_.raise_violation(std::string("misaligned register ") + verb + " at " + hex(addr));
    return {FbStatus::Misaligned, 0};
  }
  ++accesses_;
  if (profiler_) profiler_->count_register_access();

  const RegisterPort* port = find(addr);
  kernel_.set_firmware_note(std::string("register ") + verb + " " + hex(addr) +
                            (port ? " (" + port->name + ")" : ""));
  if (!port) {
    kernel_.firmware_wait(1);
    decode_errors_.push_back({kernel_.now(), kind, addr});
    if (strict_) kernel_.raise_violation(std::string("unmapped register ") + verb + " at " + hex(addr));
    return {FbStatus::DecodeError, kind == AccessKind::Read ? kDecodeErrorValue : 0};
  }
  kernel_.firmware_wait(port->latency);
  const auto offset = static_cast<std::uint32_t>(addr - port->base);
  if (kind == AccessKind::Read) return {FbStatus::Ok, port->read(offset)};
  port->write(offset, value);
  kernel_.note_progress();
  return {FbStatus::Ok, 0};
}

}  // namespace cosim
