#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosim/congestion.hpp"
#include "cosim/dut/stream.hpp"
#include "cosim/kernel.hpp"

namespace cosim::dut {

/// Stream consumer asserting READY with a fixed probability per cycle.
class StreamSink final : public Process {
 public:
  StreamSink(Kernel& kernel, std::string name, StreamChannel& in, double ready_prob = 1.0,
             std::uint64_t seed = 0, bool capture = false);

  std::string_view name() const override { return name_; }
  void eval(Cycle now) override;

  std::uint64_t beats() const { return beats_; }
  std::uint64_t last_count() const { return lasts_; }
  const std::vector<StreamBeat>& captured() const { return captured_; }

 private:
  std::string name_;
  StreamChannel& in_;
  double ready_prob_;
  SplitMix64 rng_;
  bool capture_;
  std::uint64_t beats_ = 0;
  std::uint64_t lasts_ = 0;
  std::vector<StreamBeat> captured_;
};

/// Stream producer presenting a beat every cycle it can. Payload of beat n is
/// a pure function of (seed, n).
class StreamSource final : public Process {
 public:
  /// `beats` unset means unlimited.
  StreamSource(Kernel& kernel, std::string name, StreamChannel& out,
               std::optional<std::uint64_t> beats, std::uint64_t seed = 0,
               unsigned width = axi::kDefaultBusBytes);

  std::string_view name() const override { return name_; }
  void eval(Cycle now) override;

  std::uint64_t beats_sent() const { return sent_; }
  static StreamBeat pattern(std::uint64_t seed, std::uint64_t n, unsigned width);

 private:
  std::string name_;
  StreamChannel& out_;
  std::optional<std::uint64_t> limit_;
  std::uint64_t seed_;
  unsigned width_;
  std::uint64_t sent_ = 0;
};

}  // namespace cosim::dut
