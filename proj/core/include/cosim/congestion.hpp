#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "cosim/types.hpp"

namespace cosim {

enum class ChannelClass : std::uint8_t { AR = 0, R = 1, AW = 2, W = 3, B = 4 };
inline constexpr std::size_t kChannelClasses = 5;

std::string_view channel_class_name(ChannelClass c);

/// Backpressure knobs for one channel class.
///
/// On request channels (AR, AW, W) the bridge drives READY: each cycle READY is
/// withheld with probability `ready_stall_prob`. On response channels (R, B)
/// the bridge drives VALID: each beat is held back for a uniform delay in
/// [valid_delay_min, valid_delay_max] cycles, after which VALID is asserted on
/// any cycle whose stall draw (same probability) passes. Once asserted, VALID
/// stays up until the handshake.
struct ChannelCongestion {
  double ready_stall_prob = 0.0;
  Cycle valid_delay_min = 0;
  Cycle valid_delay_max = 0;
  friend bool operator==(const ChannelCongestion&, const ChannelCongestion&) = default;
};

struct CongestionProfile {
  std::array<ChannelCongestion, kChannelClasses> channels{};
  std::uint64_t seed = 0;

  ChannelCongestion& operator[](ChannelClass c) { return channels[static_cast<std::size_t>(c)]; }
  const ChannelCongestion& operator[](ChannelClass c) const {
    return channels[static_cast<std::size_t>(c)];
  }

  /// Same knobs on every channel class.
  static CongestionProfile uniform(double stall_prob, Cycle delay_min, Cycle delay_max,
                                   std::uint64_t seed);
  bool is_zero() const;
  void validate() const;

  friend bool operator==(const CongestionProfile&, const CongestionProfile&) = default;
};

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit();
  /// Uniform integer in [lo, hi].
  std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi);

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

/// FNV-1a 64-bit; used to fold port names into stream seeds.
std::uint64_t fnv1a64(std::string_view text);

/// Initial PRNG state of the stream owned by (port, channel):
///   mix(seed ^ mix(fnv1a64(port) + 0x9E3779B97F4A7C15 * (ordinal + 1)))
std::uint64_t stream_seed(std::uint64_t seed, std::string_view port, ChannelClass channel);

/// Per-port randomized backpressure. Every (port, channel) pair owns an
/// independent stream, so attaching another port never shifts this port's draws.
class CongestionEmulator {
 public:
  CongestionEmulator(const CongestionProfile& profile, std::string_view port);

  /// True when READY may be asserted this cycle. Call once per cycle per request channel.
  bool gate_ready(ChannelClass channel);
  /// True when VALID may be asserted this cycle. Call once per cycle per response channel.
  bool gate_valid(ChannelClass channel) { return gate_ready(channel); }
  /// Cycles to withhold VALID for a payload that just became available.
  Cycle draw_valid_delay(ChannelClass channel);

  const CongestionProfile& profile() const { return profile_; }

 private:
  CongestionProfile profile_;
  std::array<SplitMix64, kChannelClasses> streams_;
};

}  // namespace cosim
