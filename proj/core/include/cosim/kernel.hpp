#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosim/signal.hpp"
#include "cosim/types.hpp"

namespace cosim {

/// Probe for a DUT-internal debug value that should appear in waveforms.
struct DebugSignal {
  std::string name;
  unsigned width = 1;
  std::function<std::uint64_t()> probe;
};

/// A hardware block stepped once per cycle.
///
/// eval() reads only committed signal values (the state at the current clock
/// edge) and writes next-cycle values; the kernel commits every signal after
/// all processes have been evaluated, so evaluation order never matters.
class Process {
 public:
  virtual ~Process() = default;
  virtual std::string_view name() const = 0;
  virtual void eval(Cycle now) = 0;
  /// Appends human-readable descriptions of anything this block is stuck on.
  virtual void diagnose(std::vector<std::string>& /*out*/) const {}
  virtual void debug_signals(std::vector<DebugSignal>& /*out*/) {}
};

struct ProcessHandle {
  std::size_t index = 0;
};

struct FirmwareHandle {
  std::size_t index = 0;
};

struct KernelConfig {
  Cycle max_cycles = 1'000'000;
  /// Cycles of global inactivity (no handshake, no firmware progress) while
  /// firmware is blocked before the run is declared hung.
  Cycle watchdog_window = 10'000;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Outcome { FirmwareDone, MaxCyclesReached, Hang, ProtocolViolation };

std::string_view outcome_name(Outcome outcome);

struct SimResult {
  Outcome outcome = Outcome::MaxCyclesReached;
  Cycle final_cycle = 0;
  std::vector<std::string> diagnostics;
  /// Return value of the firmware entry (FirmwareDone only).
  std::optional<int> firmware_status;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

std::string to_string(const SimResult& result);

/// Deterministic cycle-stepped scheduler for hardware processes and one
/// cooperative firmware task.
///
/// Cycle t proceeds as: resume firmware if it is due at t (it runs in zero
/// simulated time until its next blocking call), evaluate every process,
/// notify observers, commit all signals. Firmware that finishes during the
/// firmware phase of cycle t ends the run with final_cycle t.
class Kernel {
 public:
  Kernel();
  ~Kernel();
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  /// The kernel does not take ownership; `process` must outlive the kernel run.
  ProcessHandle register_process(Process& process);
  /// Convenience overload for lambda-style processes (owned by the kernel).
  ProcessHandle register_process(std::string name, std::function<void(Cycle)> step);

  template <class T>
  Wire<T>& make_wire(T init = T{}) {
    if (started_) throw Error("simulation already started");
    auto wire = std::make_unique<Wire<T>>(std::move(init));
    auto& ref = *wire;
    signals_.push_back(std::move(wire));
    return ref;
  }

  template <class P>
  Channel<P>& make_channel(std::string name, unsigned data_bytes) {
    if (started_) throw Error("simulation already started");
    auto channel = std::make_unique<Channel<P>>(std::move(name), data_bytes);
    auto& ref = *channel;
    channels_.push_back(&ref);
    signals_.push_back(std::move(channel));
    return ref;
  }

  /// Entry returns 0 when its own self-checks pass.
  FirmwareHandle spawn_firmware(std::function<int()> entry);

  SimResult run(const KernelConfig& config);

  Cycle now() const { return now_; }
  bool started() const { return started_; }
  bool firmware_active() const;

  /// Suspends the calling firmware task for `cycles` cycles (0 returns at once).
  /// Only valid from inside the firmware task.
  void firmware_wait(Cycle cycles);
  bool in_firmware() const;

  /// Firmware made observable progress this cycle (resets the watchdog).
  void note_progress() { progress_ = true; }
  /// Records a strict-mode protocol violation; the run stops at the end of the cycle.
  void raise_violation(std::string description);
  /// Short note on what the firmware is currently blocked on, for hang reports.
  void set_firmware_note(std::string note) { firmware_note_ = std::move(note); }

  /// Called once per cycle after every process evaluated and before commit.
  void add_cycle_observer(std::function<void(Cycle)> observer);

  const std::vector<ChannelBase*>& channels() const { return channels_; }
  const std::vector<Process*>& processes() const { return processes_; }

 private:
  class FirmwareTask;

  std::vector<std::string> collect_diagnostics() const;

  std::vector<std::unique_ptr<Committable>> signals_;
  std::vector<ChannelBase*> channels_;
  std::vector<Process*> processes_;
  std::vector<std::unique_ptr<Process>> owned_processes_;
  std::vector<std::function<void(Cycle)>> observers_;
  std::unique_ptr<FirmwareTask> firmware_;
  std::vector<std::string> violations_;
  std::string firmware_note_;
  Cycle now_ = 0;
  bool started_ = false;
  bool progress_ = false;
};

}  // namespace cosim
