#include "cosim/congestion.hpp"

namespace cosim {

std::string_view channel_class_name(ChannelClass c) {
  switch (c) {
    case ChannelClass::AR: return "ar";
    case ChannelClass::R: return "r";
    case ChannelClass::AW: return "aw";
    case ChannelClass::W: return "w";
    case ChannelClass::B: return "b";
  }
  return "?";
}

CongestionProfile CongestionProfile::uniform(double stall_prob, Cycle delay_min, Cycle delay_max,
                                             std::uint64_t seed) {
  CongestionProfile p;
  for (auto& c : p.channels) c = ChannelCongestion{stall_prob, delay_min, delay_max};
  p.seed = seed;
  return p;
}

bool CongestionProfile::is_zero() const {
  for (const auto& c : channels) {
    if (c.ready_stall_prob != 0.0 || c.valid_delay_max != 0) return false;
  }
  return true;
}

void CongestionProfile::validate() const {
  for (std::size_t i = 0; i < kChannelClasses; ++i) {
    const auto& c = channels[i];
    const auto name = std::string(channel_class_name(static_cast<ChannelClass>(i)));
    if (!(c.ready_stall_prob >= 0.0 && c.ready_stall_prob <= 1.0)) {
      throw ConfigError("congestion: stall probability for " + name + " must be in [0, 1]");
    }
    if (c.valid_delay_min > c.valid_delay_max) {
      throw ConfigError("congestion: valid delay min > max for " + name);
    }
  }
}

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

double SplitMix64::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SplitMix64::next_in(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next();  // full 64-bit range
  // Lemire multiply-shift; the residual bias is below 2^-64 * span.
  return lo + static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * span) >> 64);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view port, ChannelClass channel) {
  const std::uint64_t ordinal = static_cast<std::uint64_t>(channel) + 1;
  return SplitMix64::mix(seed ^ SplitMix64::mix(fnv1a64(port) + 0x9E3779B97F4A7C15ULL * ordinal));
}

namespace {

std::array<SplitMix64, kChannelClasses> make_streams(std::uint64_t seed, std::string_view port) {
  return {SplitMix64(stream_seed(seed, port, ChannelClass::AR)),
          SplitMix64(stream_seed(seed, port, ChannelClass::R)),
          SplitMix64(stream_seed(seed, port, ChannelClass::AW)),
          SplitMix64(stream_seed(seed, port, ChannelClass::W)),
          SplitMix64(stream_seed(seed, port, ChannelClass::B))};
}

}  // namespace

CongestionEmulator::CongestionEmulator(const CongestionProfile& profile, std::string_view port)
    : profile_(profile), streams_(make_streams(profile.seed, port)) {
  profile_.validate();
}

bool CongestionEmulator::gate_ready(ChannelClass channel) {
  const double p = profile_[channel].ready_stall_prob;
  auto& stream = streams_[static_cast<std::size_t>(channel)];
  const double u = stream.next_unit();
  return !(u < p);
}

Cycle CongestionEmulator::draw_valid_delay(ChannelClass channel) {
  const auto& c = profile_[channel];
  auto& stream = streams_[static_cast<std::size_t>(channel)];
  if (c.valid_delay_min == c.valid_delay_max) {
    stream.next();  // keep the draw count independent of the bounds
    return c.valid_delay_min;
  }
  return stream.next_in(c.valid_delay_min, c.valid_delay_max);
}

}  // namespace cosim
