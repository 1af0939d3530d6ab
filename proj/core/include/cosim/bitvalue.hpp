#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace cosim {

/// Fixed-capacity bit vector used for waveform samples (up to 512 bits).
class BitValue {
 public:
  static constexpr unsigned kMaxBits = 512;

  BitValue() = default;
  BitValue(unsigned width, std::uint64_t value);

  static BitValue from_bytes(unsigned width, std::span<const std::uint8_t> bytes);

  unsigned width() const { return width_; }
  bool bit(unsigned i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  std::uint64_t word(unsigned i) const { return words_[i]; }

  /// Binary digits, most significant first, leading zeros stripped (at least one digit).
  std::string to_binary() const;

  friend bool operator==(const BitValue&, const BitValue&) = default;

 private:
  unsigned width_ = 1;
  std::array<std::uint64_t, kMaxBits / 64> words_{};
};

}  // namespace cosim
