#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "cosim/axi.hpp"
#include "cosim/kernel.hpp"
#include "cosim/signal.hpp"

namespace cosim::dut {

/// One AXI-Stream style transfer; `data` is little-endian lane-packed.
struct StreamBeat {
  axi::DataBytes data{};
  bool last = false;
  friend bool operator==(const StreamBeat&, const StreamBeat&) = default;
};

using StreamChannel = Channel<StreamBeat>;

inline StreamChannel& make_stream(Kernel& kernel, std::string name,
                                  unsigned width = axi::kDefaultBusBytes) {
  return kernel.make_channel<StreamBeat>(std::move(name), width);
}

/// Producer side of a stream: a queue whose front is presented until accepted.
/// Call begin() at the start of eval and end() after pushing new beats.
class StreamTx {
 public:
  explicit StreamTx(StreamChannel& channel) : ch_(&channel) {}

  /// Drops the beat accepted at this clock edge; returns true when one was.
  bool begin() {
    if (!ch_->fired()) return false;
    q_.pop_front();
    return true;
  }
  void push(const StreamBeat& beat) { q_.push_back(beat); }
  void end() {
    if (q_.empty()) {
      ch_->set_valid(false);
    } else {
      ch_->drive(true, q_.front());
    }
  }

  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }
  void clear() { q_.clear(); }
  const StreamChannel& channel() const { return *ch_; }

 private:
  StreamChannel* ch_;
  std::deque<StreamBeat> q_;
};

/// Consumer side of a stream with a bounded FIFO. READY is registered, so it
/// is asserted only while a beat arriving next cycle is guaranteed room.
class StreamRx {
 public:
  StreamRx(StreamChannel& channel, std::size_t capacity) : ch_(&channel), cap_(capacity) {}

  /// Captures the beat accepted at this clock edge; returns true when one was.
  bool begin() {
    if (!ch_->fired()) return false;
    fifo_.push_back(ch_->payload());
    return true;
  }
  /// `accept` lets the owner refuse data regardless of FIFO room.
  void end(bool accept = true) { ch_->set_ready(accept && fifo_.size() < cap_); }

  bool empty() const { return fifo_.empty(); }
  std::size_t size() const { return fifo_.size(); }
  const StreamBeat& front() const { return fifo_.front(); }
  StreamBeat pop() {
    StreamBeat b = fifo_.front();
    fifo_.pop_front();
    return b;
  }
  void clear() { fifo_.clear(); }
  const StreamChannel& channel() const { return *ch_; }

 private:
  StreamChannel* ch_;
  std::size_t cap_;
  std::deque<StreamBeat> fifo_;
};

std::int32_t lane_i32(const StreamBeat& beat, unsigned lane);
void set_lane_i32(StreamBeat& beat, unsigned lane, std::int32_t value);
inline std::int8_t lane_i8(const StreamBeat& beat, unsigned lane) {
  return static_cast<std::int8_t>(beat.data[lane]);
}

}  // namespace cosim::dut

namespace cosim {

template <>
struct PayloadTrace<dut::StreamBeat> {
  static void describe(std::vector<TraceField>& out, unsigned data_bytes);
  static void sample(const dut::StreamBeat& p, std::vector<BitValue>& out, unsigned data_bytes);
};

}  // namespace cosim
