#include "cosim/bridge.hpp"

#include <algorithm>
#include <array>

namespace cosim {

using axi::AddrBeat;
using axi::ReadBeat;
using axi::RespBeat;
using axi::WriteBeat;

Arbiter::Arbiter(const ArbitrationPolicy& policy, const std::vector<std::string>& ports)
    : kind_(policy.kind), n_ports_(ports.size()) {
  if (kind_ != ArbitrationPolicy::Kind::FixedPriority) return;
  if (policy.priority.size() != ports.size()) {
    throw ConfigError("fixed-priority list must name each of the " +
                      std::to_string(ports.size()) + " attached ports exactly once");
  }
  rank_.assign(ports.size(), ports.size());
  for (std::size_t r = 0; r < policy.priority.size(); ++r) {
    auto it = std::find(ports.begin(), ports.end(), policy.priority[r]);
    if (it == ports.end()) {
      throw ConfigError("fixed-priority list names unknown port '" + policy.priority[r] + "'");
    }
    const auto index = static_cast<std::size_t>(it - ports.begin());
    if (rank_[index] != ports.size()) {
      throw ConfigError("fixed-priority list names port '" + policy.priority[r] + "' twice");
    }
    rank_[index] = r;
  }
}

std::size_t Arbiter::arbitrate(std::span<const std::size_t> requests) {
  if (requests.empty()) throw Error("arbitrate: no requests");
  std::size_t grant = requests.front();
  if (kind_ == ArbitrationPolicy::Kind::FixedPriority) {
    for (std::size_t p : requests) {
      if (rank_.at(p) < rank_.at(grant)) grant = p;
    }
  } else {
    // Distance after the previous grant, so the previous grant itself comes last.
    const std::size_t start = last_ ? (*last_ + 1) % n_ports_ : 0;
    auto distance = [&](std::size_t p) { return (p + n_ports_ - start) % n_ports_; };
    for (std::size_t p : requests) {
      if (distance(p) < distance(grant)) grant = p;
    }
  }
  last_ = grant;
  return grant;
}

namespace {

constexpr std::array<ChannelClass, kChannelClasses> kDrawOrder = {
    ChannelClass::AR, ChannelClass::R, ChannelClass::AW, ChannelClass::W, ChannelClass::B};

bool burst_serviceable(const AddrBeat& beat, unsigned bus_bytes) {
  return beat.burst == axi::BurstType::Incr && beat.beat_bytes() <= bus_bytes &&
         beat.addr % beat.beat_bytes() == 0;
}

template <class P>
struct ResponseStage {
  bool full = false;
  bool asserted = false;
  Cycle eligible_at = 0;
  P beat{};
};

}  // namespace

struct MemoryBridge::PortState {
  axi::AxiPort port;
  PortId profiler_id = 0;
  CongestionEmulator congestion;
  axi::ProtocolMonitor monitor;
  axi::PortTrace trace;
  BridgeFault fault = BridgeFault::None;
  bool fault_used = false;

  struct ReadBurst {
    AddrBeat ar;
    Cycle accepted_at = 0;
    unsigned launched = 0;
    unsigned delivered = 0;
    bool error = false;
  };
  std::deque<ReadBurst> reads;
  ResponseStage<ReadBeat> r_stage;
  std::uint32_t r_stage_bytes = 0;
  Addr r_stage_addr = 0;
  std::uint64_t in_flight_read = 0;

  struct WriteBurst {
    AddrBeat aw;
    unsigned received = 0;
    bool error = false;
    std::vector<std::uint8_t> data;
    std::vector<std::uint8_t> enable;
    std::uint64_t enabled_bytes = 0;
  };
  std::deque<WriteBurst> writes;  // accepted AW, oldest first, until B is accepted
  std::size_t responses_ready = 0;  // leading entries of `writes` with all W beats received
  ResponseStage<RespBeat> b_stage;
  std::uint64_t uncommitted_write = 0;

  std::array<bool, kChannelClasses> gate{};
  bool prefer_write = false;
  std::uint64_t grants = 0;

  PortState(const axi::AxiPort& p, PortId id, const CongestionProfile& profile)
      : port(p), profiler_id(id), congestion(profile, p.name), monitor(p.name) {
    trace.port = p.name;
    trace.bus_bytes = p.bus_bytes;
  }

  std::size_t open_write_index() const {
    for (std::size_t i = 0; i < writes.size(); ++i) {
      if (writes[i].received < writes[i].aw.beats()) return i;
    }
    return writes.size();
  }
  bool read_launchable(Cycle now) const {
    if (r_stage.full) return false;
    for (const auto& b : reads) {
      if (b.launched < b.ar.beats()) return now >= b.accepted_at + 1;
    }
    return false;
  }
};

MemoryBridge::MemoryBridge(Kernel& kernel, MemoryImage& memory, Profiler& profiler,
                           BridgeOptions options)
    : kernel_(kernel), memory_(memory), profiler_(profiler), options_(std::move(options)) {
  if (options_.max_outstanding < 1) throw ConfigError("max_outstanding must be >= 1");
  kernel_.register_process(*this);
}

MemoryBridge::~MemoryBridge() = default;

void MemoryBridge::attach_manager_port(const axi::AxiPort& port,
                                       const CongestionProfile& congestion) {
  if (kernel_.started()) throw Error("simulation already started");
  for (const auto& p : ports_) {
    if (p->port.name == port.name) throw ConfigError("duplicate port name '" + port.name + "'");
  }
  if (!port.ar || !port.r || !port.aw || !port.w || !port.b) {
    throw ConfigError("port '" + port.name + "' is missing channels");
  }
  const PortId id = profiler_.add_port(port.name, port.bus_bytes);
  ports_.push_back(std::make_unique<PortState>(port, id, congestion));
}

void MemoryBridge::inject_fault(const std::string& port, BridgeFault fault) {
  for (auto& p : ports_) {
    if (p->port.name == port) {
      p->fault = fault;
      p->fault_used = false;
      return;
    }
  }
  throw Error("inject_fault: unknown port '" + port + "'");
}

const std::string& MemoryBridge::port_name(std::size_t i) const { return ports_.at(i)->port.name; }

void MemoryBridge::validate() const {
  std::vector<std::string> names;
  for (const auto& p : ports_) names.push_back(p->port.name);
  Arbiter check(options_.arbitration, names);
}

axi::BusTrace MemoryBridge::trace() const {
  axi::BusTrace out;
  for (const auto& p : ports_) out.push_back(p->trace);
  return out;
}

std::uint64_t MemoryBridge::in_flight_read_bytes() const {
  std::uint64_t n = 0;
  for (const auto& p : ports_) n += p->in_flight_read;
  return n;
}

std::uint64_t MemoryBridge::uncommitted_write_bytes() const {
  std::uint64_t n = 0;
  for (const auto& p : ports_) n += p->uncommitted_write;
  return n;
}

std::vector<std::uint64_t> MemoryBridge::grant_counts() const {
  std::vector<std::uint64_t> out;
  for (const auto& p : ports_) out.push_back(p->grants);
  return out;
}

void MemoryBridge::eval(Cycle now) {
  if (!arbiter_) {
    std::vector<std::string> names;
    for (const auto& p : ports_) names.push_back(p->port.name);
    arbiter_ = std::make_unique<Arbiter>(options_.arbitration, names);
  }

  std::vector<std::size_t> requests;
  std::vector<bool> wants_read(ports_.size()), wants_write(ports_.size());
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    PortState& p = *ports_[i];
    service_port(p, now);

    const std::size_t open = p.open_write_index();
    std::uint64_t w_remaining = 0;
    for (std::size_t k = open; k < p.writes.size(); ++k) {
      w_remaining += p.writes[k].aw.beats() - p.writes[k].received;
    }
    wants_read[i] = p.read_launchable(now);
    // A beat is waiting, or one just fired and the producer is likely streaming.
    wants_write[i] = w_remaining > 0 && p.gate[static_cast<std::size_t>(ChannelClass::W)] &&
                     p.port.w->valid();
    if (wants_read[i] || wants_write[i]) requests.push_back(i);
  }

  std::optional<std::size_t> granted;
  if (!requests.empty()) granted = arbiter_->arbitrate(requests);

  for (std::size_t i = 0; i < ports_.size(); ++i) {
    PortState& p = *ports_[i];
    bool w_ready = false;
    bool read_denied = false;
    if (granted == i) {
      ++p.grants;
      bool take_write = wants_write[i] && (!wants_read[i] || p.prefer_write);
      if (take_write) {
        w_ready = true;
      } else {
        launch_read(p, now);
      }
      if (wants_read[i] && wants_write[i]) p.prefer_write = !take_write;
    } else {
      read_denied = wants_read[i];
    }
    p.port.w->set_ready(w_ready);
    drive_responses(p, now);

    const auto& ch = p.port;
    const bool read_stall = (ch.ar->valid() && !ch.ar->ready()) ||
                            (ch.r->valid() && !ch.r->ready()) || read_denied;
    const bool write_stall = (ch.aw->valid() && !ch.aw->ready()) ||
                             (ch.w->valid() && !ch.w->ready()) || (ch.b->valid() && !ch.b->ready());
    if (read_stall || write_stall) {
      profiler_.observe(BeatRecord{now, p.profiler_id, read_stall ? Direction::Read : Direction::Write,
                                   0, true, 0});
    }
  }
}

void MemoryBridge::service_port(PortState& p, Cycle now) {
  const auto& ch = p.port;
  const axi::PortSample sample = axi::sample_port(ch);
  if (options_.record_trace) p.trace.cycles.push_back(sample);
  const std::size_t before = violations_.size();
  p.monitor.observe(now, sample, violations_);
  if (options_.strict) {
    for (std::size_t k = before; k < violations_.size(); ++k) {
      kernel_.raise_violation(axi::to_string(violations_[k]));
    }
  }

  // Handshakes completed at this clock edge.
  if (ch.r->fired()) {
    profiler_.observe(BeatRecord{now, p.profiler_id, Direction::Read, p.r_stage_bytes, false,
                                 p.r_stage_addr});
    p.in_flight_read -= p.r_stage_bytes;
    p.r_stage = {};
    auto& front = p.reads.front();
    if (++front.delivered == front.ar.beats()) p.reads.pop_front();
  }
  if (ch.ar->fired()) {
    const AddrBeat& ar = ch.ar->payload();
    p.reads.push_back({ar, now, 0, 0, !burst_serviceable(ar, ch.bus_bytes)});
  }
  if (ch.b->fired()) {
    auto& burst = p.writes.front();
    if (!burst.error) memory_.write_masked(burst.aw.addr, burst.data, burst.enable,
                                           Origin::from_port(ch.name));
    p.uncommitted_write -= burst.enabled_bytes;
    p.writes.pop_front();
    --p.responses_ready;
    p.b_stage = {};
  }
  if (ch.aw->fired()) {
    const AddrBeat& aw = ch.aw->payload();
    PortState::WriteBurst burst;
    burst.aw = aw;
    burst.error = !burst_serviceable(aw, ch.bus_bytes);
    const std::size_t span = std::size_t{aw.beats()} * aw.beat_bytes();
    burst.data.assign(span, 0);
    burst.enable.assign(span, 0);
    p.writes.push_back(std::move(burst));
  }
  if (ch.w->fired()) {
    const std::size_t open = p.open_write_index();
    // W is only made ready while a burst is open, so `open` is valid here.
    auto& burst = p.writes.at(open);
    const WriteBeat& beat = ch.w->payload();
    const unsigned size = burst.aw.beat_bytes();
    const Addr addr = axi::beat_address(burst.aw.addr, burst.aw.size_log2, burst.received);
    std::uint32_t bytes = 0;
    if (!burst.error) {
      const unsigned lane = axi::lane_offset(addr, ch.bus_bytes);
      for (unsigned k = 0; k < size; ++k) {
        const std::size_t at = std::size_t{burst.received} * size + k;
        if ((beat.strb >> (lane + k)) & 1u) {
          burst.data[at] = beat.data[lane + k];
          burst.enable[at] = 1;
          ++bytes;
        }
      }
    }
    burst.enabled_bytes += bytes;
    p.uncommitted_write += bytes;
    profiler_.observe(BeatRecord{now, p.profiler_id, Direction::Write, bytes, false, addr});
    if (++burst.received == burst.aw.beats()) ++p.responses_ready;
  }

  for (ChannelClass c : kDrawOrder) {
    p.gate[static_cast<std::size_t>(c)] = p.congestion.gate_ready(c);
  }

  const bool ar_room = p.reads.size() < options_.max_outstanding;
  const bool aw_room = p.writes.size() < options_.max_outstanding;
  ch.ar->set_ready(ar_room && p.gate[static_cast<std::size_t>(ChannelClass::AR)]);
  ch.aw->set_ready(aw_room && p.gate[static_cast<std::size_t>(ChannelClass::AW)]);
}

void MemoryBridge::launch_read(PortState& p, Cycle now) {
  auto it = std::find_if(p.reads.begin(), p.reads.end(),
                         [](const auto& b) { return b.launched < b.ar.beats(); });
  auto& burst = *it;
  const unsigned size = burst.ar.beat_bytes();
  const Addr addr = axi::beat_address(burst.ar.addr, burst.ar.size_log2, burst.launched);

  ReadBeat beat;
  beat.id = burst.ar.id;
  beat.last = burst.launched + 1 == burst.ar.beats();
  std::uint32_t bytes = 0;
  if (burst.error) {
    beat.resp = axi::Resp::SlvErr;
  } else {
    const unsigned lane = axi::lane_offset(addr, p.port.bus_bytes);
    memory_.read_into(addr, std::span<std::uint8_t>(beat.data.data() + lane, size),
                      Origin::from_port(p.port.name));
    bytes = size;
  }
  if (p.fault == BridgeFault::WrongLast && !p.fault_used && burst.launched == 0 &&
      burst.ar.beats() > 1) {
    beat.last = true;
    p.fault_used = true;
  }
  ++burst.launched;

  p.r_stage.full = true;
  p.r_stage.asserted = false;
  p.r_stage.beat = beat;
  p.r_stage.eligible_at = now + p.congestion.draw_valid_delay(ChannelClass::R);
  p.r_stage_bytes = bytes;
  p.r_stage_addr = addr;
  p.in_flight_read += bytes;
}

void MemoryBridge::drive_responses(PortState& p, Cycle now) {
  auto& r = *p.port.r;
  auto& rs = p.r_stage;
  if (rs.full && rs.asserted && r.valid() && !r.ready() && !p.fault_used) {
    if (p.fault == BridgeFault::RetractValid) {
      rs.asserted = false;
      rs.eligible_at = now + 1;
      p.fault_used = true;
    } else if (p.fault == BridgeFault::ChangePayloadWhileStalled) {
      rs.beat.data[axi::lane_offset(p.r_stage_addr, p.port.bus_bytes)] ^= 0xFF;
      p.fault_used = true;
    }
  }
  if (rs.full && !rs.asserted && now >= rs.eligible_at &&
      p.gate[static_cast<std::size_t>(ChannelClass::R)]) {
    rs.asserted = true;
  }
  r.drive(rs.full && rs.asserted, rs.beat);

  auto& b = *p.port.b;
  auto& bs = p.b_stage;
  if (!bs.full && p.responses_ready > 0) {
    const auto& burst = p.writes.front();
    bs.full = true;
    bs.asserted = false;
    bs.beat = RespBeat{burst.aw.id, burst.error ? axi::Resp::SlvErr : axi::Resp::Okay};
    bs.eligible_at = now + p.congestion.draw_valid_delay(ChannelClass::B);
  }
  if (bs.full && !bs.asserted && now >= bs.eligible_at &&
      p.gate[static_cast<std::size_t>(ChannelClass::B)]) {
    bs.asserted = true;
  }
  b.drive(bs.full && bs.asserted, bs.beat);
}

void MemoryBridge::diagnose(std::vector<std::string>& out) const {
  for (const auto& p : ports_) {
    const auto& name = p->port.name;
    for (const auto& b : p->reads) {
      out.push_back("bridge port '" + name + "': read burst at " + hex(b.ar.addr) + " delivered " +
                    std::to_string(b.delivered) + "/" + std::to_string(b.ar.beats()) + " beats");
    }
    for (const auto& w : p->writes) {
      if (w.received < w.aw.beats()) {
        out.push_back("bridge port '" + name + "': write burst at " + hex(w.aw.addr) +
                      " waiting on W, received " + std::to_string(w.received) + "/" +
                      std::to_string(w.aw.beats()) + " beats");
      } else {
        out.push_back("bridge port '" + name + "': write burst at " + hex(w.aw.addr) +
                      " waiting on B acceptance");
      }
    }
  }
}

}  // namespace cosim
