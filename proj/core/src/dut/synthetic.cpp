#include "cosim/dut/synthetic.hpp"

namespace cosim::dut {

StreamSink::StreamSink(Kernel& kernel, std::string name, StreamChannel& in, double ready_prob,
                       std::uint64_t seed, bool capture)
    : name_(std::move(name)), in_(in), ready_prob_(ready_prob),
      rng_(SplitMix64::mix(seed ^ fnv1a64(name_))), capture_(capture) {
  if (!(ready_prob >= 0.0 && ready_prob <= 1.0)) {
    throw ConfigError("sink ready probability must be in [0, 1]");
  }
  kernel.register_process(*this);
}

void StreamSink::eval(Cycle) {
  if (in_.fired()) {
    ++beats_;
    if (in_.payload().last) ++lasts_;
    if (capture_) captured_.push_back(in_.payload());
  }
  in_.set_ready(rng_.next_unit() < ready_prob_);
}

StreamSource::StreamSource(Kernel& kernel, std::string name, StreamChannel& out,
                           std::optional<std::uint64_t> beats, std::uint64_t seed, unsigned width)
    : name_(std::move(name)), out_(out), limit_(beats), seed_(seed), width_(width) {
  kernel.register_process(*this);
}

StreamBeat StreamSource::pattern(std::uint64_t seed, std::uint64_t n, unsigned width) {
  StreamBeat beat;
  SplitMix64 rng(SplitMix64::mix(seed + n));
  for (unsigned k = 0; k < width; k += 8) {
    const std::uint64_t v = rng.next();
    for (unsigned j = 0; j < 8 && k + j < width; ++j) beat.data[k + j] = static_cast<std::uint8_t>(v >> (8 * j));
  }
  return beat;
}

void StreamSource::eval(Cycle) {
  if (out_.fired()) ++sent_;
  const bool more = !limit_ || sent_ < *limit_;
  if (more) {
    StreamBeat beat = pattern(seed_, sent_, width_);
    beat.last = limit_ && sent_ + 1 == *limit_;
    out_.drive(true, beat);
  } else {
    out_.set_valid(false);
  }
}

}  // namespace cosim::dut
