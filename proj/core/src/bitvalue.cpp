#include "cosim/bitvalue.hpp"

#include <algorithm>

#include "cosim/types.hpp"

namespace cosim {

BitValue::BitValue(unsigned width, std::uint64_t value) : width_(width) {
  if (width == 0 || width > kMaxBits) throw Error("bit width out of range");
  words_[0] = width >= 64 ? value : (value & ((std::uint64_t{1} << width) - 1));
}

BitValue BitValue::from_bytes(unsigned width, std::span<const std::uint8_t> bytes) {
  BitValue v(width, 0);
  const std::size_t n = std::min<std::size_t>(bytes.size(), (width + 7) / 8);
  for (std::size_t i = 0; i < n; ++i) {
    v.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  }
  if (width % 64 != 0) v.words_[width / 64] &= (std::uint64_t{1} << (width % 64)) - 1;
  return v;
}

std::string BitValue::to_binary() const {
  std::string out;
  out.reserve(width_);
  bool seen_one = false;
  for (unsigned i = width_; i-- > 0;) {
    const bool b = bit(i);
    if (b) seen_one = true;
    if (seen_one) out.push_back(b ? '1' : '0');
  }
  if (out.empty()) out.push_back('0');
  return out;
}

}  // namespace cosim
