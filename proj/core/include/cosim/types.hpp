#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cosim {

/// Elapsed clock cycles. A single clock domain drives everything.
using Cycle = std::uint64_t;

/// Flat 64-bit byte address.
using Addr = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed scenario input (bad ranges, unknown names, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string hex(std::uint64_t value);

}  // namespace cosim
