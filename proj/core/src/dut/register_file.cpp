#include "cosim/dut/register_file.hpp"

namespace cosim::dut {

RegisterFile::RegisterFile(std::string name, unsigned n_regs) : name_(std::move(name)) {
  if (n_regs < 1) throw ConfigError("register file needs at least one register");
  regs_.assign(n_regs, 0);
}

void RegisterFile::eval(Cycle now) {
  auto [first, last] = scheduled_.equal_range(now);
  for (auto it = first; it != last; ++it) regs_.at(it->second.first) = it->second.second;
  scheduled_.erase(first, last);
}

void RegisterFile::debug_signals(std::vector<DebugSignal>& out) {
  for (unsigned i = 0; i < regs_.size() && i < 8; ++i) {
    out.push_back({"reg" + std::to_string(i), 32, [this, i] { return regs_[i]; }});
  }
}

RegisterPort RegisterFile::register_port(Addr base) {
  RegisterPort port;
  port.name = name_;
  port.base = base;
  port.length = regs_.size() * 4;
  port.latency = kLatency;
  port.read = [this](std::uint32_t offset) { return regs_.at(offset / 4); };
  port.write = [this](std::uint32_t offset, std::uint32_t value) { regs_.at(offset / 4) = value; };
  return port;
}

void RegisterFile::hw_write_at(Cycle at, unsigned index, std::uint32_t value) {
  if (index >= regs_.size()) throw Error("register index out of range");
  scheduled_.emplace(at, std::make_pair(index, value));
}

}  // namespace cosim::dut
