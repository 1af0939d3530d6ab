#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "cosim/axi.hpp"
#include "cosim/bridge.hpp"
#include "cosim/dut/stream.hpp"
#include "cosim/kernel.hpp"

namespace cosim::dut {

/// DMA register block, offsets from the DMA base address.
namespace dma_reg {
inline constexpr std::uint32_t kCtrl = 0x00;    // bit0 START (write 1)
inline constexpr std::uint32_t kStatus = 0x04;  // BUSY, DONE (write 1 to clear), ERR
inline constexpr std::uint32_t kAddrLo = 0x08;
inline constexpr std::uint32_t kAddrHi = 0x0C;
inline constexpr std::uint32_t kLen = 0x10;  // bytes, multiple of the bus width

inline constexpr std::uint32_t kStart = 1u << 0;
inline constexpr std::uint32_t kBusy = 1u << 0;
inline constexpr std::uint32_t kDone = 1u << 1;
inline constexpr std::uint32_t kErr = 1u << 2;

inline constexpr std::uint64_t kWindow = 0x100;
inline constexpr Cycle kLatency = 2;
}  // namespace dma_reg

/// Register file and start/stop bookkeeping shared by both DMA directions.
///
/// START while BUSY is ignored. START with LEN or ADDR not a multiple of the
/// bus width sets ERR and does nothing else. START with LEN 0 sets DONE at
/// once. A valid START clears DONE and ERR and sets BUSY.
class DmaEngine : public Process {
 public:
  static constexpr unsigned kMaxOutstanding = 4;

  DmaEngine(Kernel& kernel, std::string name, unsigned bus_bytes);

  std::string_view name() const override { return name_; }
  void debug_signals(std::vector<DebugSignal>& out) override;

  const axi::AxiPort& port() const { return port_; }
  RegisterPort register_port(Addr base);

  bool busy() const { return status_ & dma_reg::kBusy; }
  std::uint32_t status() const { return status_; }
  std::uint64_t length() const { return len_; }
  Addr address() const { return (Addr{addr_hi_} << 32) | addr_lo_; }

 protected:
  /// Called from eval() on the cycle after a valid START was written.
  virtual void on_start() = 0;
  /// Returns true on the START cycle (consumes the request).
  bool take_start();
  void finish();

  /// Largest legal burst from `addr` with `left` bytes remaining.
  axi::AddrBeat next_burst(Addr addr, std::uint64_t left) const;

  std::string name_;
  axi::AxiPort port_;
  unsigned bus_bytes_;

 private:
  std::uint32_t read_reg(std::uint32_t offset) const;
  void write_reg(std::uint32_t offset, std::uint32_t value);

  std::uint32_t status_ = 0;
  std::uint32_t addr_lo_ = 0;
  std::uint32_t addr_hi_ = 0;
  std::uint32_t len_ = 0;
  bool start_pending_ = false;
};

/// Memory-mapped to stream: reads LEN bytes from ADDR as maximal INCR bursts
/// and emits them as stream beats, LAST on the final beat. DONE is set when
/// the final stream beat is accepted downstream.
class Mm2sDma final : public DmaEngine {
 public:
  static constexpr std::size_t kFifoDepth = 8;

  Mm2sDma(Kernel& kernel, std::string name, StreamChannel& out,
          unsigned bus_bytes = axi::kDefaultBusBytes);

  void eval(Cycle now) override;
  void diagnose(std::vector<std::string>& out) const override;
  void debug_signals(std::vector<DebugSignal>& out) override;

  std::uint64_t beats_emitted() const { return beats_emitted_; }

 private:
  void on_start() override;

  StreamTx tx_;
  Addr issue_addr_ = 0;
  std::uint64_t issue_left_ = 0;
  std::uint64_t received_ = 0;
  unsigned outstanding_ = 0;
  std::uint64_t beats_emitted_ = 0;
};

/// Stream to memory-mapped: accepts exactly LEN bytes of stream data and
/// writes them from ADDR as maximal INCR bursts. AW is issued ahead of data;
/// W only follows its AW. DONE is set when the final burst's B is accepted.
/// A stream that under-delivers leaves the engine waiting forever.
class S2mmDma final : public DmaEngine {
 public:
  static constexpr std::size_t kFifoDepth = 8;

  S2mmDma(Kernel& kernel, std::string name, StreamChannel& in,
          unsigned bus_bytes = axi::kDefaultBusBytes);

  void eval(Cycle now) override;
  void diagnose(std::vector<std::string>& out) const override;
  void debug_signals(std::vector<DebugSignal>& out) override;

  std::uint64_t beats_accepted() const { return accepted_beats_; }

 private:
  void on_start() override;

  StreamRx rx_;
  Addr issue_addr_ = 0;
  std::uint64_t issue_left_ = 0;
  std::uint64_t total_beats_ = 0;
  std::uint64_t accepted_beats_ = 0;
  unsigned bursts_issued_ = 0;
  unsigned bursts_done_ = 0;
  unsigned bursts_total_ = 0;
  std::deque<unsigned> w_bursts_;  // beat counts of bursts whose AW has fired
  unsigned w_sent_ = 0;            // beats sent of w_bursts_.front()
};

}  // namespace cosim::dut
