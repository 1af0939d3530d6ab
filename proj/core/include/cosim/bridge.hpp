#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosim/axi.hpp"
#include "cosim/congestion.hpp"
#include "cosim/kernel.hpp"
#include "cosim/memory.hpp"
#include "cosim/profiler.hpp"
#include "cosim/protocol_checker.hpp"

namespace cosim {

struct ArbitrationPolicy {
  enum class Kind { FixedPriority, RoundRobin };
  Kind kind = Kind::RoundRobin;
  /// Fixed priority only: port names, highest priority first.
  std::vector<std::string> priority;

  static ArbitrationPolicy round_robin() { return {Kind::RoundRobin, {}}; }
  static ArbitrationPolicy fixed(std::vector<std::string> order) {
    return {Kind::FixedPriority, std::move(order)};
  }
  friend bool operator==(const ArbitrationPolicy&, const ArbitrationPolicy&) = default;
};

/// Grants the single memory-side slot among requesting ports.
class Arbiter {
 public:
  /// `ports` in attach order. A fixed-priority list must name every port exactly once.
  Arbiter(const ArbitrationPolicy& policy, const std::vector<std::string>& ports);

  /// `requests` holds port indices (attach order) and must be non-empty.
  /// Round-robin grants the first requester after the previous grant, wrapping.
  std::size_t arbitrate(std::span<const std::size_t> requests);

  std::optional<std::size_t> last_grant() const { return last_; }
  void set_last_grant(std::optional<std::size_t> port) { last_ = port; }

 private:
  ArbitrationPolicy::Kind kind_;
  std::vector<std::size_t> rank_;  // fixed priority: rank_[port] (0 = highest)
  std::size_t n_ports_;
  std::optional<std::size_t> last_;
};

/// Deliberate bridge bugs used to demonstrate checker sensitivity. Each one
/// fires once, at its first opportunity.
enum class BridgeFault {
  None,
  RetractValid,               // drop R VALID while the beat is stalled
  ChangePayloadWhileStalled,  // alter R data while the beat is stalled
  WrongLast,                  // raise R LAST on the first beat of a multi-beat burst
};

struct BridgeOptions {
  ArbitrationPolicy arbitration;
  unsigned max_outstanding = 4;  // per port and direction
  /// Protocol violations stop the run instead of only being recorded.
  bool strict = false;
  /// Keep per-cycle samples of every port for check_trace / diffing.
  bool record_trace = false;
};

/// Connects DUT manager ports to a MemoryImage through one arbitrated slot.
///
/// Timing at zero congestion: the first R beat is valid 2 cycles after the AR
/// handshake and later beats follow back to back; B is valid 1 cycle after
/// the final W handshake. Write data reaches memory when B is accepted.
class MemoryBridge final : public Process {
 public:
  MemoryBridge(Kernel& kernel, MemoryImage& memory, Profiler& profiler, BridgeOptions options = {});
  ~MemoryBridge() override;

  void attach_manager_port(const axi::AxiPort& port, const CongestionProfile& congestion = {});
  /// Arms a fault on one port (testing only).
  void inject_fault(const std::string& port, BridgeFault fault);

  std::string_view name() const override { return "bridge"; }
  void eval(Cycle now) override;
  void diagnose(std::vector<std::string>& out) const override;

  /// Throws if the arbitration policy does not match the attached ports.
  void validate() const;

  const std::vector<axi::ProtocolViolation>& violations() const { return violations_; }
  axi::BusTrace trace() const;
  /// Bytes read from memory whose R beat has not been accepted yet.
  std::uint64_t in_flight_read_bytes() const;
  /// Bytes accepted on W whose burst has not been committed yet.
  std::uint64_t uncommitted_write_bytes() const;
  /// Slot grants per port (attach order).
  std::vector<std::uint64_t> grant_counts() const;
  std::size_t port_count() const { return ports_.size(); }
  const std::string& port_name(std::size_t i) const;

 private:
  struct PortState;

  void service_port(PortState& p, Cycle now);
  void launch_read(PortState& p, Cycle now);
  void drive_responses(PortState& p, Cycle now);

  Kernel& kernel_;
  MemoryImage& memory_;
  Profiler& profiler_;
  BridgeOptions options_;
  std::vector<std::unique_ptr<PortState>> ports_;
  std::unique_ptr<Arbiter> arbiter_;
  std::vector<axi::ProtocolViolation> violations_;
};

/// Outcome of a firmware register access.
enum class FbStatus : int { Ok = 0, DecodeError = 1, Misaligned = 2 };

std::string_view status_name(FbStatus status);

/// Value returned by reads of unmapped register addresses.
inline constexpr std::uint32_t kDecodeErrorValue = 0xDEADDEAD;

/// Memory-mapped register window of a DUT subordinate port.
struct RegisterPort {
  std::string name;
  Addr base = 0;
  std::uint64_t length = 4;
  /// Cycles the firmware is blocked per access; the handler runs when they elapse.
  Cycle latency = 1;
  /// Handlers receive the byte offset from `base` (always 4-byte aligned).
  std::function<std::uint32_t(std::uint32_t offset)> read;
  std::function<void(std::uint32_t offset, std::uint32_t value)> write;
};

struct DecodeErrorRecord {
  Cycle cycle = 0;
  AccessKind kind = AccessKind::Read;
  Addr addr = 0;
  friend bool operator==(const DecodeErrorRecord&, const DecodeErrorRecord&) = default;
};

struct RegisterAccessResult {
  FbStatus status = FbStatus::Ok;
  std::uint32_t value = 0;
};

/// Carries firmware register accesses to DUT register ports.
class RegisterBridge {
 public:
  explicit RegisterBridge(Kernel& kernel, Profiler* profiler = nullptr, bool strict = false);

  void add_port(RegisterPort port);
  const RegisterPort* find(Addr addr) const;
  const std::vector<RegisterPort>& ports() const { return ports_; }

  /// Blocks the calling firmware task for the port latency, then runs the
  /// handler. Unmapped addresses cost one cycle; misaligned ones are rejected
  /// without consuming time.
  RegisterAccessResult access(AccessKind kind, Addr addr, std::uint32_t value = 0);

  const std::vector<DecodeErrorRecord>& decode_errors() const { return decode_errors_; }
  std::uint64_t access_count() const { return accesses_; }

 private:
  Kernel& kernel_;
  Profiler* profiler_;
  bool strict_;
  std::vector<RegisterPort> ports_;
  std::vector<DecodeErrorRecord> decode_errors_;
  std::uint64_t accesses_ = 0;
};

}  // namespace cosim
