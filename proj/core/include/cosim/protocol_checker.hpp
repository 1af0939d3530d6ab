#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosim/axi.hpp"

namespace cosim::axi {

/// Conformance rules checked on every manager port.
///   VS   valid retracted, or payload changed, before the handshake
///   LAST last flag inconsistent with the burst length
///   CNT  data-beat count differs from len_m1 + 1
///   B1   not exactly one write response per write burst
///   4KB  burst crosses a 4 KiB boundary
enum class Rule { ValidStability, Last, Count, SingleResponse, Boundary4K };

std::string_view rule_name(Rule rule);

struct ProtocolViolation {
  Cycle cycle = 0;
  std::string port;
  std::string channel;
  Rule rule = Rule::ValidStability;
  std::string description;

  friend bool operator==(const ProtocolViolation&, const ProtocolViolation&) = default;
};

std::string to_string(const ProtocolViolation& v);

template <class P>
struct ChannelSample {
  bool valid = false;
  bool ready = false;
  P payload{};
  bool fired() const { return valid && ready; }
  friend bool operator==(const ChannelSample&, const ChannelSample&) = default;
};

/// Values of all five channels of one port at one clock edge.
struct PortSample {
  ChannelSample<AddrBeat> ar;
  ChannelSample<ReadBeat> r;
  ChannelSample<AddrBeat> aw;
  ChannelSample<WriteBeat> w;
  ChannelSample<RespBeat> b;
  friend bool operator==(const PortSample&, const PortSample&) = default;
};

PortSample sample_port(const AxiPort& port);

/// Per-cycle samples of one port, contiguous from start_cycle.
struct PortTrace {
  std::string port;
  unsigned bus_bytes = kDefaultBusBytes;
  Cycle start_cycle = 0;
  std::vector<PortSample> cycles;
  friend bool operator==(const PortTrace&, const PortTrace&) = default;
};

using BusTrace = std::vector<PortTrace>;

/// Canonical text rendering; identical traces render identically.
std::string serialize(const BusTrace& trace);

/// Incremental checker for one port. Feed samples in cycle order.
class ProtocolMonitor {
 public:
  explicit ProtocolMonitor(std::string port);

  void observe(Cycle cycle, const PortSample& sample, std::vector<ProtocolViolation>& out);

 private:
  template <class P>
  void check_stability(Cycle cycle, const char* channel, const ChannelSample<P>& now,
                       const std::optional<ChannelSample<P>>& prev,
                       std::vector<ProtocolViolation>& out);
  void report(std::vector<ProtocolViolation>& out, Cycle cycle, const char* channel, Rule rule,
              std::string description);
  void close_write_burst(Cycle cycle, unsigned beats, bool last_seen, unsigned expected,
                         std::vector<ProtocolViolation>& out);

  std::string port_;
  std::optional<PortSample> prev_;

  struct ReadBurst {
    unsigned expected = 0;
    unsigned seen = 0;
  };
  std::map<std::uint16_t, std::deque<ReadBurst>> reads_;

  // Write bursts are matched to AW beats in order; W may run ahead of AW.
  std::deque<unsigned> aw_lengths_;    // AW lengths not yet matched to a W burst
  std::deque<unsigned> early_w_;       // W bursts (beat counts) closed before their AW arrived
  unsigned w_beats_ = 0;               // beats of the W burst in progress
  std::uint64_t awaiting_response_ = 0;
};

/// Pure: the same trace always yields the same violations.
std::vector<ProtocolViolation> check_trace(const PortTrace& trace);
std::vector<ProtocolViolation> check_trace(const BusTrace& trace);

}  // namespace cosim::axi
