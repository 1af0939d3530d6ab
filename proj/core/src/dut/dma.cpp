#include "cosim/dut/dma.hpp"

#include <algorithm>
#include <bit>

namespace cosim::dut {

using namespace dma_reg;

DmaEngine::DmaEngine(Kernel& kernel, std::string name, unsigned bus_bytes)
    : name_(std::move(name)), port_(axi::make_axi_port(kernel, name_, bus_bytes)),
      bus_bytes_(bus_bytes) {
  kernel.register_process(*this);
}

RegisterPort DmaEngine::register_port(Addr base) {
  RegisterPort port;
  port.name = name_;
  port.base = base;
  port.length = kWindow;
  port.latency = kLatency;
  port.read = [this](std::uint32_t offset) { return read_reg(offset); };
  port.write = [this](std::uint32_t offset, std::uint32_t value) { write_reg(offset, value); };
  return port;
}

std::uint32_t DmaEngine::read_reg(std::uint32_t offset) const {
  switch (offset) {
    case kCtrl: return 0;
    case kStatus: return status_;
    case kAddrLo: return addr_lo_;
    case kAddrHi: return addr_hi_;
    case kLen: return len_;
    default: return 0;
  }
}

void DmaEngine::write_reg(std::uint32_t offset, std::uint32_t value) {
  switch (offset) {
    case kCtrl:
      if (!(value & kStart) || busy()) return;
      if (len_ % bus_bytes_ != 0 || address() % bus_bytes_ != 0) {
        status_ |= kErr;
        return;
      }
      status_ &= ~(kDone | kErr);
      if (len_ == 0) {
        status_ |= kDone;
        return;
      }
      status_ |= kBusy;
      start_pending_ = true;
      return;
    case kStatus:
      status_ &= ~(value & kDone);
      return;
    case kAddrLo:
      if (!busy()) addr_lo_ = value;
      return;
    case kAddrHi:
      if (!busy()) addr_hi_ = value;
      return;
    case kLen:
      if (!busy()) len_ = value;
      return;
    default:
      return;
  }
}

bool DmaEngine::take_start() {
  if (!start_pending_) return false;
  start_pending_ = false;
  return true;
}

void DmaEngine::finish() {
  status_ &= ~kBusy;
  status_ |= kDone;
}

axi::AddrBeat DmaEngine::next_burst(Addr addr, std::uint64_t left) const {
  const std::uint64_t to_boundary = axi::kBoundaryBytes - addr % axi::kBoundaryBytes;
  const std::uint64_t beats =
      std::min<std::uint64_t>({axi::kMaxBurstBeats, left / bus_bytes_, to_boundary / bus_bytes_});
  axi::AddrBeat beat;
  beat.addr = addr;
  beat.len_m1 = static_cast<std::uint8_t>(beats - 1);
  beat.size_log2 = static_cast<std::uint8_t>(std::countr_zero(bus_bytes_));
  return beat;
}

void DmaEngine::debug_signals(std::vector<DebugSignal>& out) {
  out.push_back({"status", 3, [this] { return std::uint64_t{status_}; }});
}

Mm2sDma::Mm2sDma(Kernel& kernel, std::string name, StreamChannel& out, unsigned bus_bytes)
    : DmaEngine(kernel, std::move(name), bus_bytes), tx_(out) {}

void Mm2sDma::on_start() {
  issue_addr_ = address();
  issue_left_ = length();
  received_ = 0;
  outstanding_ = 0;
}

void Mm2sDma::eval(Cycle) {
  const bool final_taken = tx_.channel().fired() && tx_.channel().payload().last;
  if (tx_.begin()) ++beats_emitted_;
  if (final_taken) finish();

  if (port_.r->fired()) {
    const auto& r = port_.r->payload();
    StreamBeat beat;
    std::copy_n(r.data.begin(), bus_bytes_, beat.data.begin());
    received_ += bus_bytes_;
    beat.last = received_ == length();
    tx_.push(beat);
    if (r.last) --outstanding_;
  }
  if (port_.ar->fired()) {
    const auto& ar = port_.ar->payload();
    const std::uint64_t bytes = std::uint64_t{ar.beats()} * bus_bytes_;
    issue_addr_ += bytes;
    issue_left_ -= bytes;
    ++outstanding_;
  }
  if (take_start()) on_start();

  const bool issue = busy() && issue_left_ > 0 && outstanding_ < kMaxOutstanding;
  port_.ar->drive(issue, issue ? next_burst(issue_addr_, issue_left_) : axi::AddrBeat{});
  port_.r->set_ready(busy() && tx_.size() < kFifoDepth);
  port_.aw->set_valid(false);
  port_.w->set_valid(false);
  port_.b->set_ready(false);
  tx_.end();
}

void Mm2sDma::diagnose(std::vector<std::string>& out) const {
  if (!busy()) return;
  std::string s = "mm2s '" + name_ + "': busy, received " + std::to_string(received_) + " of " +
                  std::to_string(length()) + " bytes, " + std::to_string(outstanding_) +
                  " bursts outstanding";
  if (!tx_.empty() && !tx_.channel().ready()) s += "; stream output stalled, READY deasserted downstream";
  out.push_back(std::move(s));
}

void Mm2sDma::debug_signals(std::vector<DebugSignal>& out) {
  DmaEngine::debug_signals(out);
  out.push_back({"fifo_level", 8, [this] { return std::uint64_t{tx_.size()}; }});
  out.push_back({"outstanding", 4, [this] { return std::uint64_t{outstanding_}; }});
}

S2mmDma::S2mmDma(Kernel& kernel, std::string name, StreamChannel& in, unsigned bus_bytes)
    : DmaEngine(kernel, std::move(name), bus_bytes), rx_(in, kFifoDepth) {}

void S2mmDma::on_start() {
  issue_addr_ = address();
  issue_left_ = length();
  total_beats_ = length() / bus_bytes_;
  accepted_beats_ = 0;
  bursts_issued_ = 0;
  bursts_done_ = 0;
  w_bursts_.clear();
  w_sent_ = 0;
  bursts_total_ = 0;
  for (Addr a = issue_addr_, left = issue_left_; left > 0;) {
    const auto burst = next_burst(a, left);
    const std::uint64_t bytes = std::uint64_t{burst.beats()} * bus_bytes_;
    a += bytes;
    left -= bytes;
    ++bursts_total_;
  }
}

void S2mmDma::eval(Cycle) {
  if (rx_.begin()) ++accepted_beats_;
  if (port_.b->fired()) {
    if (++bursts_done_ == bursts_total_) finish();
  }
  if (port_.w->fired()) {
    rx_.pop();
    if (++w_sent_ == w_bursts_.front()) {
      w_bursts_.pop_front();
      w_sent_ = 0;
    }
  }
  if (port_.aw->fired()) {
    const auto& aw = port_.aw->payload();
    const std::uint64_t bytes = std::uint64_t{aw.beats()} * bus_bytes_;
    issue_addr_ += bytes;
    issue_left_ -= bytes;
    ++bursts_issued_;
    w_bursts_.push_back(aw.beats());
  }
  if (take_start()) on_start();

  const bool issue =
      busy() && issue_left_ > 0 && bursts_issued_ - bursts_done_ < kMaxOutstanding;
  port_.aw->drive(issue, issue ? next_burst(issue_addr_, issue_left_) : axi::AddrBeat{});

  const bool send = busy() && !w_bursts_.empty() && !rx_.empty();
  axi::WriteBeat w;
  if (send) {
    std::copy_n(rx_.front().data.begin(), bus_bytes_, w.data.begin());
    w.strb = axi::full_strobe(bus_bytes_);
    w.last = w_sent_ + 1 == w_bursts_.front();
  }
  port_.w->drive(send, w);
  port_.b->set_ready(busy());
  port_.ar->set_valid(false);
  port_.r->set_ready(false);
  rx_.end(busy() && accepted_beats_ < total_beats_);
}

void S2mmDma::diagnose(std::vector<std::string>& out) const {
  if (!busy()) return;
  const std::uint64_t delivered = accepted_beats_ * bus_bytes_;
  const bool waiting_on_data = !w_bursts_.empty() && rx_.empty() && !rx_.channel().valid();
  if (waiting_on_data) {
    out.push_back("s2mm '" + name_ + "': write-data channel '" + port_.w->name() +
                  "' (port '" + name_ + "', channel W) stuck: VALID deasserted upstream, stream delivered " +
                  std::to_string(delivered) + " of " + std::to_string(length()) + " bytes");
  } else {
    out.push_back("s2mm '" + name_ + "': busy, stream delivered " + std::to_string(delivered) +
                  " of " + std::to_string(length()) + " bytes, " + std::to_string(bursts_done_) +
                  "/" + std::to_string(bursts_total_) + " bursts acknowledged");
  }
}

void S2mmDma::debug_signals(std::vector<DebugSignal>& out) {
  DmaEngine::debug_signals(out);
  out.push_back({"fifo_level", 8, [this] { return std::uint64_t{rx_.size()}; }});
  out.push_back({"beats_accepted", 32, [this] { return accepted_beats_; }});
}

}  // namespace cosim::dut
