#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cosim/bitvalue.hpp"
#include "cosim/kernel.hpp"

namespace cosim {

/// Value-change-dump writer. One VCD time unit is one clock cycle.
///
/// Declare every signal first, then call sample_cycle() once per cycle with a
/// value for every declared signal (in declaration order). Only values that
/// changed since the previous sample are written.
class VcdWriter {
 public:
  using SignalId = std::size_t;

  struct Options {
    /// Written verbatim into $date; fixed by default so output is byte-stable.
    std::string date = "1970-01-01 00:00:00";
    std::string version = "cosim vcd writer";
    std::string timescale = "1ns";
  };

  VcdWriter() : VcdWriter(Options{}) {}
  explicit VcdWriter(Options options);

  /// `scope` is a dot-separated hierarchy path (may be empty).
  SignalId declare(const std::string& scope, const std::string& name, unsigned width);
  void sample_cycle(Cycle cycle, std::span<const BitValue> values);

  std::size_t signal_count() const { return signals_.size(); }
  /// Complete VCD text so far.
  std::string str() const;
  void finalize(const std::filesystem::path& path) const;

  /// Identifier code of the n-th declared signal: base-94 over '!'..'~'.
  static std::string identifier(std::size_t n);

 private:
  struct Signal {
    std::string scope;
    std::string name;
    unsigned width;
    std::string id;
  };

  void write_header(std::ostream& out) const;

  Options options_;
  std::vector<Signal> signals_;
  std::vector<BitValue> last_;
  std::ostringstream body_;
  std::optional<Cycle> last_cycle_;
};

/// Samples every kernel channel (valid, ready, payload fields) and every
/// process debug signal once per cycle into a VcdWriter.
class WaveformTracer {
 public:
  /// Must be attached before the kernel starts running.
  WaveformTracer(Kernel& kernel, VcdWriter::Options options = {});

  const VcdWriter& writer() const { return writer_; }
  void finalize(const std::filesystem::path& path) const { writer_.finalize(path); }

 private:
  void declare_all();
  void sample(Cycle cycle);

  Kernel& kernel_;
  VcdWriter writer_;
  std::vector<DebugSignal> debug_;
  std::vector<BitValue> values_;
  bool declared_ = false;
};

}  // namespace cosim
