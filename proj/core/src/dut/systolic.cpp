#include "cosim/dut/systolic.hpp"

namespace cosim::dut {

using namespace ctrl_reg;

SystolicArray::SystolicArray(Kernel& kernel, std::string name, unsigned max_rows,
                             unsigned max_cols, StreamChannel& weights, StreamChannel& input,
                             StreamChannel& out)
    : name_(std::move(name)), max_rows_(max_rows), max_cols_(max_cols), weights_(weights),
      input_(input), out_(out) {
  if (max_rows < 1 || max_rows > kMaxArrayDim || max_cols < 1 || max_cols > kMaxArrayDim) {
    throw ConfigError("systolic array dimensions must be in [1, 16]");
  }
  kernel.register_process(*this);
}

RegisterPort SystolicArray::register_port(Addr base) {
  RegisterPort port;
  port.name = name_;
  port.base = base;
  port.length = kWindow;
  port.latency = kLatency;
  port.read = [this](std::uint32_t offset) { return read_reg(offset); };
  port.write = [this](std::uint32_t offset, std::uint32_t value) { write_reg(offset, value); };
  return port;
}

std::uint32_t SystolicArray::read_reg(std::uint32_t offset) const {
  switch (offset) {
    case kDimsRC: return dims_rc_;
    case kDimsM: return dims_m_;
    case kStatus: return status_;
    default: return 0;
  }
}

void SystolicArray::write_reg(std::uint32_t offset, std::uint32_t value) {
  const bool busy = status_ & kBusy;
  switch (offset) {
    case kGo: {
      if (!(value & 1u) || busy) return;
      const unsigned r = dims_rc_ & 0xFFFF;
      const unsigned c = dims_rc_ >> 16;
      if (r < 1 || r > max_rows_ || c < 1 || c > max_cols_ || dims_m_ < 1) {
        status_ |= kErr;
        return;
      }
      status_ = kBusy;
      go_pending_ = true;
      return;
    }
    case kDimsRC:
      if (!busy) dims_rc_ = value;
      return;
    case kDimsM:
      if (!busy) dims_m_ = value;
      return;
    case kStatus:
      status_ &= ~(value & kDone);
      return;
    default:
      return;
  }
}

void SystolicArray::start_job() {
  rows_ = dims_rc_ & 0xFFFF;
  cols_ = dims_rc_ >> 16;
  m_total_ = dims_m_;
  weights_loaded_ = 0;
  rows_accepted_ = 0;
  rows_emitted_ = 0;
  rows_aligned_ = 0;
  beats_of_row_emitted_ = 0;
  w_.assign(std::size_t{rows_} * cols_, 0);
  a_reg_.assign(std::size_t{rows_} * cols_, 0);
  p_reg_.assign(std::size_t{rows_} * cols_, 0);
  injected_.assign(rows_ + cols_ - 1, std::nullopt);
  bottom_.assign(cols_, std::vector<std::uint32_t>(cols_, 0));
  aligned_.reset();
  input_cycles_.clear();
  output_cycles_.clear();
  phase_ = Phase::LoadWeights;
}

void SystolicArray::step_grid() {
  // Descending order reads each neighbour's register before it is overwritten.
  for (unsigned r = rows_; r-- > 0;) {
    const auto& skewed = injected_[r];
    for (unsigned c = cols_; c-- > 0;) {
      const std::size_t at = std::size_t{r} * cols_ + c;
      const std::int8_t a = c == 0 ? (skewed ? (*skewed)[r] : std::int8_t{0}) : a_reg_[at - 1];
      const std::uint32_t above = r == 0 ? 0u : p_reg_[at - cols_];
      a_reg_[at] = a;
      p_reg_[at] = above + static_cast<std::uint32_t>(std::int32_t{a} * std::int32_t{w_[at]});
    }
  }
  bottom_.pop_back();
  bottom_.emplace_front(p_reg_.begin() + std::ptrdiff_t{rows_ - 1} * cols_, p_reg_.end());
}

void SystolicArray::eval(Cycle now) {
  now_ = now;
  if (out_.begin()) {
    if (++beats_of_row_emitted_ == row_beats(cols_)) {
      beats_of_row_emitted_ = 0;
      ++rows_emitted_;
      if (rows_emitted_ == m_total_) {
        status_ = (status_ & ~kBusy) | kDone;
        phase_ = Phase::Idle;
      }
    }
    if (beats_of_row_emitted_ == 0 && !out_.empty()) output_cycles_.push_back(now + 1);
  }
  if (go_pending_) {
    go_pending_ = false;
    start_job();
  }

  if (phase_ == Phase::LoadWeights && weights_.fired()) {
    const auto& beat = weights_.payload();
    for (unsigned c = 0; c < cols_; ++c) {
      w_[std::size_t{weights_loaded_} * cols_ + c] = lane_i8(beat, c);
    }
    if (++weights_loaded_ == rows_) phase_ = Phase::Stream;
  }

  if (phase_ == Phase::Stream) {
    std::optional<Row> row;
    if (phase_ == Phase::Stream && input_.fired()) {
      const auto& beat = input_.payload();
      row.emplace(rows_);
      for (unsigned r = 0; r < rows_; ++r) (*row)[r] = lane_i8(beat, r);
      ++rows_accepted_;
      input_cycles_.push_back(now);
    }
    injected_.pop_back();
    injected_.push_front(std::move(row));

    if (aligned_) {
      const bool was_empty = out_.empty();
      const unsigned beats = row_beats(cols_);
      for (unsigned b = 0; b < beats; ++b) {
        StreamBeat beat;
        for (unsigned lane = 0; lane < 4 && b * 4 + lane < cols_; ++lane) {
          set_lane_i32(beat, lane, static_cast<std::int32_t>((*aligned_)[b * 4 + lane]));
        }
        beat.last = aligned_is_final_ && b + 1 == beats;
        out_.push(beat);
      }
      if (was_empty) output_cycles_.push_back(now + 1);
      aligned_.reset();
    }

    step_grid();
    if (injected_.back()) {
      std::vector<std::uint32_t> result(cols_);
      for (unsigned c = 0; c < cols_; ++c) result[c] = bottom_[cols_ - 1 - c][c];
      aligned_ = std::move(result);
      aligned_is_final_ = ++rows_aligned_ == m_total_;
    }
  }

  const std::uint32_t in_array = rows_accepted_ - rows_emitted_;
  weights_.set_ready(phase_ == Phase::LoadWeights && weights_loaded_ < rows_);
  input_.set_ready(phase_ == Phase::Stream && rows_accepted_ < m_total_ &&
                   in_array < row_capacity());
  out_.end();
}

void SystolicArray::diagnose(std::vector<std::string>& out) const {
  if (!(status_ & kBusy)) return;
  std::string s = "array '" + name_ + "': ";
  if (phase_ == Phase::LoadWeights) {
    s += "waiting for weights, " + std::to_string(weights_loaded_) + " of " +
         std::to_string(rows_) + " rows loaded";
  } else {
    s += std::to_string(rows_accepted_) + " of " + std::to_string(m_total_) +
         " input rows accepted, " + std::to_string(rows_emitted_) + " rows emitted";
  }
  out.push_back(std::move(s));
}

void SystolicArray::debug_signals(std::vector<DebugSignal>& out) {
  out.push_back({"phase", 2, [this] { return static_cast<std::uint64_t>(phase_); }});
  out.push_back({"rows_accepted", 32, [this] { return std::uint64_t{rows_accepted_}; }});
  out.push_back({"rows_emitted", 32, [this] { return std::uint64_t{rows_emitted_}; }});
}

PsumAdder::PsumAdder(Kernel& kernel, std::string name, StreamChannel& array_out,
                     StreamChannel& psum, StreamChannel& out)
    : name_(std::move(name)), a_(array_out, kFifoDepth), p_(psum, kFifoDepth), out_(out) {
  kernel.register_process(*this);
}

void PsumAdder::eval(Cycle) {
  if (out_.begin()) ++beats_out_;
  a_.begin();
  p_.begin();
  if (!a_.empty() && !p_.empty() && out_.size() < 2) {
    const StreamBeat a = a_.pop();
    const StreamBeat p = p_.pop();
    StreamBeat sum;
    for (unsigned lane = 0; lane < 4; ++lane) {
      const auto s = static_cast<std::uint32_t>(lane_i32(a, lane)) +
                     static_cast<std::uint32_t>(lane_i32(p, lane));
      set_lane_i32(sum, lane, static_cast<std::int32_t>(s));
    }
    sum.last = a.last;
    out_.push(sum);
  }
  a_.end();
  p_.end();
  out_.end();
}

void PsumAdder::diagnose(std::vector<std::string>& out) const {
  if (a_.empty() == p_.empty()) return;
  out.push_back("adder '" + name_ + "': waiting for the " +
                std::string(a_.empty() ? "array output" : "partial-sum") + " stream");
}

}  // namespace cosim::dut
