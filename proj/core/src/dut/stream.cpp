#include "cosim/dut/stream.hpp"

#include <cstring>

namespace cosim::dut {

std::int32_t lane_i32(const StreamBeat& beat, unsigned lane) {
  std::uint32_t v = 0;
  for (unsigned k = 0; k < 4; ++k) v |= std::uint32_t{beat.data[lane * 4 + k]} << (8 * k);
  return static_cast<std::int32_t>(v);
}

void set_lane_i32(StreamBeat& beat, unsigned lane, std::int32_t value) {
  const auto v = static_cast<std::uint32_t>(value);
  for (unsigned k = 0; k < 4; ++k) beat.data[lane * 4 + k] = static_cast<std::uint8_t>(v >> (8 * k));
}

}  // namespace cosim::dut

namespace cosim {

void PayloadTrace<dut::StreamBeat>::describe(std::vector<TraceField>& out, unsigned data_bytes) {
  out.push_back({"data", data_bytes * 8});
  out.push_back({"last", 1});
}

void PayloadTrace<dut::StreamBeat>::sample(const dut::StreamBeat& p, std::vector<BitValue>& out,
                                           unsigned data_bytes) {
  out.push_back(BitValue::from_bytes(data_bytes * 8, p.data));
  out.emplace_back(1, p.last);
}

}  // namespace cosim
