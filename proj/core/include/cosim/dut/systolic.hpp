#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "cosim/bridge.hpp"
#include "cosim/dut/stream.hpp"
#include "cosim/kernel.hpp"

namespace cosim::dut {

/// Controller register block, offsets from the controller base address.
namespace ctrl_reg {
inline constexpr std::uint32_t kGo = 0x00;      // bit0: start a job
inline constexpr std::uint32_t kDimsRC = 0x04;  // R in [15:0], C in [31:16]
inline constexpr std::uint32_t kDimsM = 0x08;
inline constexpr std::uint32_t kStatus = 0x0C;  // BUSY, DONE (write 1 to clear), ERR

inline constexpr std::uint32_t kBusy = 1u << 0;
inline constexpr std::uint32_t kDone = 1u << 1;
inline constexpr std::uint32_t kErr = 1u << 2;

inline constexpr std::uint64_t kWindow = 0x100;
inline constexpr Cycle kLatency = 2;
}  // namespace ctrl_reg

inline constexpr unsigned kMaxArrayDim = 16;

/// Beats per output (or partial-sum) row: four int32 lanes per 16-byte beat.
constexpr unsigned row_beats(unsigned cols) { return (cols + 3) / 4; }

/// Weight-stationary R x C grid of int8 multipliers with int32 wrapping
/// accumulators, plus its job controller.
///
/// A job first takes R weight beats (beat r carries row r, C int8 lanes),
/// then M input beats (beat m carries row m, R int8 lanes). Input row r is
/// skewed by r cycles on its way into the grid, activations move right,
/// partial sums move down, and column c is deskewed by C-1-c cycles, so the
/// first output beat of row m is valid R + C cycles after its input
/// handshake. Each output row leaves as row_beats(C) beats of int32 lanes.
/// Input is accepted only while the output side has room for every row in
/// flight, so backpressure never drops data.
class SystolicArray final : public Process {
 public:
  SystolicArray(Kernel& kernel, std::string name, unsigned max_rows, unsigned max_cols,
                StreamChannel& weights, StreamChannel& input, StreamChannel& out);

  std::string_view name() const override { return name_; }
  void eval(Cycle now) override;
  void diagnose(std::vector<std::string>& out) const override;
  void debug_signals(std::vector<DebugSignal>& out) override;

  RegisterPort register_port(Addr base);

  unsigned rows() const { return rows_; }
  unsigned cols() const { return cols_; }
  std::uint32_t status() const { return status_; }
  /// Rows that may be inside the array (pipeline plus output buffer) at once.
  unsigned row_capacity() const { return rows_ + cols_ + 2; }

  /// Cycle of each input-row handshake and of each row's first output beat becoming valid.
  const std::vector<Cycle>& input_cycles() const { return input_cycles_; }
  const std::vector<Cycle>& output_cycles() const { return output_cycles_; }

 private:
  enum class Phase : std::uint8_t { Idle, LoadWeights, Stream };
  using Row = std::vector<std::int8_t>;

  std::uint32_t read_reg(std::uint32_t offset) const;
  void write_reg(std::uint32_t offset, std::uint32_t value);
  void start_job();
  void step_grid();

  std::string name_;
  unsigned max_rows_;
  unsigned max_cols_;
  StreamChannel& weights_;
  StreamChannel& input_;
  StreamTx out_;

  std::uint32_t status_ = 0;
  std::uint32_t dims_rc_ = 0;
  std::uint32_t dims_m_ = 0;
  bool go_pending_ = false;

  Phase phase_ = Phase::Idle;
  unsigned rows_ = 0;
  unsigned cols_ = 0;
  std::uint32_t m_total_ = 0;
  unsigned weights_loaded_ = 0;
  std::uint32_t rows_accepted_ = 0;
  std::uint32_t rows_emitted_ = 0;
  std::uint32_t rows_aligned_ = 0;
  unsigned beats_of_row_emitted_ = 0;

  std::vector<std::int8_t> w_;      // rows_ x cols_
  std::vector<std::int8_t> a_reg_;  // activation leaving PE(r, c)
  std::vector<std::uint32_t> p_reg_;  // partial sum leaving PE(r, c)
  std::deque<std::optional<Row>> injected_;         // [k] = row injected k cycles ago
  std::deque<std::vector<std::uint32_t>> bottom_;  // [k] = bottom PE outputs k cycles ago
  std::optional<std::vector<std::uint32_t>> aligned_;  // deskewed row, enters output next cycle
  bool aligned_is_final_ = false;

  std::vector<Cycle> input_cycles_;
  std::vector<Cycle> output_cycles_;
  Cycle now_ = 0;
};

/// Adds the partial-sum stream to the array output lane by lane (int32,
/// wrapping). One cycle from both operands present to the sum being valid.
class PsumAdder final : public Process {
 public:
  static constexpr std::size_t kFifoDepth = 4;

  PsumAdder(Kernel& kernel, std::string name, StreamChannel& array_out, StreamChannel& psum,
            StreamChannel& out);

  std::string_view name() const override { return name_; }
  void eval(Cycle now) override;
  void diagnose(std::vector<std::string>& out) const override;

  std::uint64_t beats_out() const { return beats_out_; }

 private:
  std::string name_;
  StreamRx a_;
  StreamRx p_;
  StreamTx out_;
  std::uint64_t beats_out_ = 0;
};

}  // namespace cosim::dut
