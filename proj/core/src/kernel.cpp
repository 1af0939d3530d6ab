#include "cosim/kernel.hpp"

#include <boost/context/fiber.hpp>
#include <boost/context/fixedsize_stack.hpp>

#include <cstdio>
#include <exception>
#include <sstream>

namespace cosim {

namespace bctx = boost::context;

std::string hex(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(value));
  return buf;
}

void KernelConfig::validate() const {
  if (max_cycles < 1) throw ConfigError("max_cycles must be >= 1");
  if (watchdog_window < 1) throw ConfigError("watchdog_window must be >= 1");
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::FirmwareDone: return "FirmwareDone";
    case Outcome::MaxCyclesReached: return "MaxCyclesReached";
    case Outcome::Hang: return "Hang";
    case Outcome::ProtocolViolation: return "ProtocolViolation";
  }
  return "?";
}

std::string to_string(const SimResult& result) {
  std::ostringstream os;
  os << outcome_name(result.outcome) << " @" << result.final_cycle;
  if (result.firmware_status) os << " status=" << *result.firmware_status;
  for (const auto& d : result.diagnostics) os << "\n  " << d;
  return os.str();
}

namespace {

class FunctionProcess final : public Process {
 public:
  FunctionProcess(std::string name, std::function<void(Cycle)> step)
      : name_(std::move(name)), step_(std::move(step)) {}
  std::string_view name() const override { return name_; }
  void eval(Cycle now) override { step_(now); }

 private:
  std::string name_;
  std::function<void(Cycle)> step_;
};

constexpr std::size_t kFirmwareStackBytes = 1u << 20;

}  // namespace

// Stackful coroutine hosting the firmware entry. Blocking calls switch back to
// the kernel; destroying a suspended task unwinds the firmware stack.
class Kernel::FirmwareTask {
 public:
  explicit FirmwareTask(std::function<int()> entry) : entry_(std::move(entry)) {
    fiber_ = bctx::fiber(std::allocator_arg, bctx::fixedsize_stack(kFirmwareStackBytes),
                         [this](bctx::fiber&& kernel_side) {
                           kernel_side_ = std::move(kernel_side);
                           try {
                             status_ = entry_();
                           } catch (const bctx::detail::forced_unwind&) {
                             throw;
                           } catch (...) {
                             error_ = std::current_exception();
                           }
                           done_ = true;
                           return std::move(kernel_side_);
                         });
  }

  void resume() {
    running_ = true;
    fiber_ = std::move(fiber_).resume();
    running_ = false;
    if (error_) std::rethrow_exception(error_);
  }

  void yield() { kernel_side_ = std::move(kernel_side_).resume(); }

  bool done() const { return done_; }
  bool running() const { return running_; }
  int status() const { return status_; }

  Cycle wake_at = 0;

 private:
  std::function<int()> entry_;
  bctx::fiber fiber_;
  bctx::fiber kernel_side_;
  std::exception_ptr error_;
  int status_ = 0;
  bool done_ = false;
  bool running_ = false;
};

Kernel::Kernel() = default;
Kernel::~Kernel() = default;

ProcessHandle Kernel::register_process(Process& process) {
  if (started_) throw Error("simulation already started");
  processes_.push_back(&process);
  return ProcessHandle{processes_.size() - 1};
}

ProcessHandle Kernel::register_process(std::string name, std::function<void(Cycle)> step) {
  if (started_) throw Error("simulation already started");
  owned_processes_.push_back(std::make_unique<FunctionProcess>(std::move(name), std::move(step)));
  return register_process(*owned_processes_.back());
}

FirmwareHandle Kernel::spawn_firmware(std::function<int()> entry) {
  if (firmware_) throw Error("firmware task already spawned");
  if (started_) throw Error("simulation already started");
  firmware_ = std::make_unique<FirmwareTask>(std::move(entry));
  return FirmwareHandle{0};
}

bool Kernel::firmware_active() const { return firmware_ && !firmware_->done(); }

bool Kernel::in_firmware() const { return firmware_ && firmware_->running(); }

void Kernel::firmware_wait(Cycle cycles) {
  if (!in_firmware()) throw Error("blocking call outside the firmware task");
  if (cycles == 0) return;
  firmware_->wake_at = now_ + cycles;
  firmware_->yield();
}

void Kernel::raise_violation(std::string description) {
  violations_.push_back(std::move(description));
}

void Kernel::add_cycle_observer(std::function<void(Cycle)> observer) {
  if (started_) throw Error("simulation already started");
  observers_.push_back(std::move(observer));
}

std::vector<std::string> Kernel::collect_diagnostics() const {
  std::vector<std::string> out;
  for (const Process* p : processes_) p->diagnose(out);
  for (const ChannelBase* ch : channels_) {
    if (ch->valid() && !ch->ready())
      out.push_back("channel '" + ch->name() + "' stuck: VALID asserted, READY deasserted");
  }
  if (out.empty()) out.push_back("no stuck channel identified");
  if (!firmware_note_.empty()) out.push_back("firmware blocked: " + firmware_note_);
  return out;
}

SimResult Kernel::run(const KernelConfig& config) {
  config.validate();
  if (started_) throw Error("simulation already started");
  started_ = true;

  Cycle idle = 0;
  for (now_ = 0;; ++now_) {
    progress_ = false;
    if (firmware_ && !firmware_->done() && firmware_->wake_at <= now_) firmware_->resume();

    if (firmware_ && firmware_->done()) {
      return SimResult{Outcome::FirmwareDone, now_, {}, firmware_->status()};
    }
    if (!violations_.empty()) return SimResult{Outcome::ProtocolViolation, now_, violations_, {}};
    if (now_ >= config.max_cycles) return SimResult{Outcome::MaxCyclesReached, now_, {}, {}};

    for (Process* p : processes_) p->eval(now_);

    bool handshake = false;
    for (const ChannelBase* ch : channels_) {
      if (ch->fired()) {
        handshake = true;
        break;
      }
    }
    for (auto& observer : observers_) observer(now_);

    if (firmware_active() && !handshake && !progress_) {
      ++idle;
    } else {
      idle = 0;
    }
    // Diagnostics describe the state at the hang cycle, so collect before commit.
    if (idle >= config.watchdog_window) {
      auto diagnostics = collect_diagnostics();
      for (auto& s : signals_) s->commit();
      return SimResult{Outcome::Hang, now_ + 1, std::move(diagnostics), {}};
    }
    for (auto& s : signals_) s->commit();

    if (!violations_.empty()) {
      return SimResult{Outcome::ProtocolViolation, now_ + 1, violations_, {}};
    }
  }
}

}  // namespace cosim
