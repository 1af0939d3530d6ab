#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cosim/kernel.hpp"
#include "cosim/signal.hpp"
#include "cosim/types.hpp"

namespace cosim::axi {

inline constexpr unsigned kMaxBusBytes = 64;
/// 128-bit high-performance ports.
inline constexpr unsigned kDefaultBusBytes = 16;
inline constexpr unsigned kMaxBurstBeats = 256;
inline constexpr Addr kBoundaryBytes = 4096;

using DataBytes = std::array<std::uint8_t, kMaxBusBytes>;

enum class BurstType : std::uint8_t { Fixed = 0, Incr = 1, Wrap = 2 };
enum class Resp : std::uint8_t { Okay = 0, SlvErr = 2 };

/// AR / AW payload.
struct AddrBeat {
  std::uint16_t id = 0;
  Addr addr = 0;
  std::uint8_t len_m1 = 0;
  std::uint8_t size_log2 = 4;
  BurstType burst = BurstType::Incr;

  unsigned beats() const { return unsigned{len_m1} + 1; }
  unsigned beat_bytes() const { return 1u << size_log2; }
  friend bool operator==(const AddrBeat&, const AddrBeat&) = default;
};

/// R payload.
struct ReadBeat {
  DataBytes data{};
  std::uint16_t id = 0;
  bool last = false;
  Resp resp = Resp::Okay;
  friend bool operator==(const ReadBeat&, const ReadBeat&) = default;
};

/// W payload. strb bit i enables byte lane i.
struct WriteBeat {
  DataBytes data{};
  std::uint64_t strb = 0;
  bool last = false;
  friend bool operator==(const WriteBeat&, const WriteBeat&) = default;
};

/// B payload.
struct RespBeat {
  std::uint16_t id = 0;
  Resp resp = Resp::Okay;
  friend bool operator==(const RespBeat&, const RespBeat&) = default;
};

/// Address of beat `n` of an INCR burst.
constexpr Addr beat_address(Addr start, unsigned size_log2, unsigned n) {
  return start + (Addr{n} << size_log2);
}

constexpr bool handshake_fired(bool valid, bool ready) { return valid && ready; }

bool crosses_4k(const AddrBeat& beat);

/// Issue-time legality problems for a burst (empty when legal).
std::vector<std::string> burst_issues(const AddrBeat& beat, unsigned bus_bytes);

/// Strobe mask with every lane of a `bus_bytes`-wide bus enabled.
constexpr std::uint64_t full_strobe(unsigned bus_bytes) {
  return bus_bytes >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bus_bytes) - 1);
}

/// Byte lane of the first byte of a beat at `addr` on a `bus_bytes`-wide bus.
constexpr unsigned lane_offset(Addr addr, unsigned bus_bytes) {
  return static_cast<unsigned>(addr % bus_bytes);
}

/// The five channels of one manager port. Channels are owned by the kernel.
struct AxiPort {
  std::string name;
  unsigned bus_bytes = kDefaultBusBytes;
  Channel<AddrBeat>* ar = nullptr;
  Channel<ReadBeat>* r = nullptr;
  Channel<AddrBeat>* aw = nullptr;
  Channel<WriteBeat>* w = nullptr;
  Channel<RespBeat>* b = nullptr;
};

AxiPort make_axi_port(Kernel& kernel, const std::string& name,
                      unsigned bus_bytes = kDefaultBusBytes);

}  // namespace cosim::axi

namespace cosim {

template <>
struct PayloadTrace<axi::AddrBeat> {
  static void describe(std::vector<TraceField>& out, unsigned data_bytes);
  static void sample(const axi::AddrBeat& p, std::vector<BitValue>& out, unsigned data_bytes);
};
template <>
struct PayloadTrace<axi::ReadBeat> {
  static void describe(std::vector<TraceField>& out, unsigned data_bytes);
  static void sample(const axi::ReadBeat& p, std::vector<BitValue>& out, unsigned data_bytes);
};
template <>
struct PayloadTrace<axi::WriteBeat> {
  static void describe(std::vector<TraceField>& out, unsigned data_bytes);
  static void sample(const axi::WriteBeat& p, std::vector<BitValue>& out, unsigned data_bytes);
};
template <>
struct PayloadTrace<axi::RespBeat> {
  static void describe(std::vector<TraceField>& out, unsigned data_bytes);
  static void sample(const axi::RespBeat& p, std::vector<BitValue>& out, unsigned data_bytes);
};

}  // namespace cosim
