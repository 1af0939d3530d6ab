#include "cosim/axi.hpp"

#include <bit>

namespace cosim::axi {

bool crosses_4k(const AddrBeat& beat) {
  const Addr first = beat.addr;
  const Addr last = beat_address(beat.addr, beat.size_log2, beat.len_m1) + beat.beat_bytes() - 1;
  return first / kBoundaryBytes != last / kBoundaryBytes;
}

std::vector<std::string> burst_issues(const AddrBeat& beat, unsigned bus_bytes) {
  std::vector<std::string> issues;
  if (beat.burst != BurstType::Incr) issues.emplace_back("only INCR bursts are supported");
  if (beat.beat_bytes() > bus_bytes) {
    issues.push_back("beat size " + std::to_string(beat.beat_bytes()) + " exceeds bus width " +
                     std::to_string(bus_bytes));
  }
  if (beat.addr % beat.beat_bytes() != 0) issues.emplace_back("address not aligned to beat size");
  if (crosses_4k(beat)) issues.push_back("burst at " + hex(beat.addr) + " crosses a 4 KiB boundary");
  return issues;
}

AxiPort make_axi_port(Kernel& kernel, const std::string& name, unsigned bus_bytes) {
  if (bus_bytes == 0 || bus_bytes > kMaxBusBytes || !std::has_single_bit(bus_bytes)) {
    throw ConfigError("bus width must be a power of two in [1, 64] bytes");
  }
  AxiPort port;
  port.name = name;
  port.bus_bytes = bus_bytes;
  port.ar = &kernel.make_channel<AddrBeat>(name + ".ar", bus_bytes);
  port.r = &kernel.make_channel<ReadBeat>(name + ".r", bus_bytes);
  port.aw = &kernel.make_channel<AddrBeat>(name + ".aw", bus_bytes);
  port.w = &kernel.make_channel<WriteBeat>(name + ".w", bus_bytes);
  port.b = &kernel.make_channel<RespBeat>(name + ".b", bus_bytes);
  return port;
}

}  // namespace cosim::axi

namespace cosim {

using namespace axi;

void PayloadTrace<AddrBeat>::describe(std::vector<TraceField>& out, unsigned) {
  out.push_back({"id", 16});
  out.push_back({"addr", 64});
  out.push_back({"len", 8});
  out.push_back({"size", 3});
  out.push_back({"burst", 2});
}

void PayloadTrace<AddrBeat>::sample(const AddrBeat& p, std::vector<BitValue>& out, unsigned) {
  out.emplace_back(16, p.id);
  out.emplace_back(64, p.addr);
  out.emplace_back(8, p.len_m1);
  out.emplace_back(3, p.size_log2);
  out.emplace_back(2, static_cast<std::uint64_t>(p.burst));
}

void PayloadTrace<ReadBeat>::describe(std::vector<TraceField>& out, unsigned data_bytes) {
  out.push_back({"data", data_bytes * 8});
  out.push_back({"id", 16});
  out.push_back({"last", 1});
  out.push_back({"resp", 2});
}

void PayloadTrace<ReadBeat>::sample(const ReadBeat& p, std::vector<BitValue>& out,
                                    unsigned data_bytes) {
  out.push_back(BitValue::from_bytes(data_bytes * 8, p.data));
  out.emplace_back(16, p.id);
  out.emplace_back(1, p.last);
  out.emplace_back(2, static_cast<std::uint64_t>(p.resp));
}

void PayloadTrace<WriteBeat>::describe(std::vector<TraceField>& out, unsigned data_bytes) {
  out.push_back({"data", data_bytes * 8});
  out.push_back({"strb", data_bytes});
  out.push_back({"last", 1});
}

void PayloadTrace<WriteBeat>::sample(const WriteBeat& p, std::vector<BitValue>& out,
                                     unsigned data_bytes) {
  out.push_back(BitValue::from_bytes(data_bytes * 8, p.data));
  out.emplace_back(data_bytes, p.strb);
  out.emplace_back(1, p.last);
}

void PayloadTrace<RespBeat>::describe(std::vector<TraceField>& out, unsigned) {
  out.push_back({"id", 16});
  out.push_back({"resp", 2});
}

void PayloadTrace<RespBeat>::sample(const RespBeat& p, std::vector<BitValue>& out, unsigned) {
  out.emplace_back(16, p.id);
  out.emplace_back(2, static_cast<std::uint64_t>(p.resp));
}

}  // namespace cosim
