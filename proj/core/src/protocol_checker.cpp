#include "cosim/protocol_checker.hpp"

#include <sstream>

namespace cosim::axi {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::ValidStability: return "VS";
    case Rule::Last: return "LAST";
    case Rule::Count: return "CNT";
    case Rule::SingleResponse: return "B1";
    case Rule::Boundary4K: return "4KB";
  }
  return "?";
}

std::string to_string(const ProtocolViolation& v) {
  std::ostringstream os;
  os << "[" << rule_name(v.rule) << "] cycle " << v.cycle << " " << v.port << "." << v.channel
     << ": " << v.description;
  return os.str();
}

PortSample sample_port(const AxiPort& port) {
  PortSample s;
  s.ar = {port.ar->valid(), port.ar->ready(), port.ar->payload()};
  s.r = {port.r->valid(), port.r->ready(), port.r->payload()};
  s.aw = {port.aw->valid(), port.aw->ready(), port.aw->payload()};
  s.w = {port.w->valid(), port.w->ready(), port.w->payload()};
  s.b = {port.b->valid(), port.b->ready(), port.b->payload()};
  return s;
}

namespace {

void put_data(std::ostream& os, const DataBytes& data, unsigned bytes) {
  static const char* digits = "0123456789abcdef";
  for (unsigned i = bytes; i-- > 0;) os << digits[data[i] >> 4] << digits[data[i] & 15];
}

void put_addr(std::ostream& os, const ChannelSample<AddrBeat>& c) {
  os << c.valid << c.ready << ':' << c.payload.id << ',' << c.payload.addr << ','
     << unsigned{c.payload.len_m1} << ',' << unsigned{c.payload.size_log2} << ','
     << static_cast<unsigned>(c.payload.burst);
}

}  // namespace

std::string serialize(const BusTrace& trace) {
  std::ostringstream os;
  for (const PortTrace& pt : trace) {
    os << "port " << pt.port << " width " << pt.bus_bytes << " start " << pt.start_cycle << '\n';
    for (const PortSample& s : pt.cycles) {
      put_addr(os, s.ar);
      os << " r" << s.r.valid << s.r.ready << ':';
      put_data(os, s.r.payload.data, pt.bus_bytes);
      os << ',' << s.r.payload.id << ',' << s.r.payload.last << ','
         << static_cast<unsigned>(s.r.payload.resp) << ' ';
      put_addr(os, s.aw);
      os << " w" << s.w.valid << s.w.ready << ':';
      put_data(os, s.w.payload.data, pt.bus_bytes);
      os << ',' << s.w.payload.strb << ',' << s.w.payload.last;
      os << " b" << s.b.valid << s.b.ready << ':' << s.b.payload.id << ','
         << static_cast<unsigned>(s.b.payload.resp) << '\n';
    }
  }
  return os.str();
}

ProtocolMonitor::ProtocolMonitor(std::string port) : port_(std::move(port)) {}

void ProtocolMonitor::report(std::vector<ProtocolViolation>& out, Cycle cycle, const char* channel,
                             Rule rule, std::string description) {
  out.push_back(ProtocolViolation{cycle, port_, channel, rule, std::move(description)});
}

template <class P>
void ProtocolMonitor::check_stability(Cycle cycle, const char* channel,
                                      const ChannelSample<P>& now,
                                      const std::optional<ChannelSample<P>>& prev,
                                      std::vector<ProtocolViolation>& out) {
  if (!prev || !prev->valid || prev->ready) return;
  if (!now.valid) {
    report(out, cycle, channel, Rule::ValidStability, "VALID retracted before handshake");
  } else if (!(now.payload == prev->payload)) {
    report(out, cycle, channel, Rule::ValidStability, "payload changed while stalled");
  }
}

void ProtocolMonitor::close_write_burst(Cycle cycle, unsigned beats, bool last_seen,
                                        unsigned expected, std::vector<ProtocolViolation>& out) {
  if (beats != expected) {
    if (last_seen) {
      report(out, cycle, "w", Rule::Last,
             "WLAST on beat " + std::to_string(beats) + " of " + std::to_string(expected));
    }
    report(out, cycle, "w", Rule::Count,
           "write burst carried " + std::to_string(beats) + " beats, expected " +
               std::to_string(expected));
  }
  ++awaiting_response_;
}

void ProtocolMonitor::observe(Cycle cycle, const PortSample& s,
                              std::vector<ProtocolViolation>& out) {
  auto opt = [&](auto member) {
    using S = std::remove_cvref_t<decltype(s.*member)>;
    return prev_ ? std::optional<S>((*prev_).*member) : std::nullopt;
  };
  check_stability(cycle, "ar", s.ar, opt(&PortSample::ar), out);
  check_stability(cycle, "r", s.r, opt(&PortSample::r), out);
  check_stability(cycle, "aw", s.aw, opt(&PortSample::aw), out);
  check_stability(cycle, "w", s.w, opt(&PortSample::w), out);
  check_stability(cycle, "b", s.b, opt(&PortSample::b), out);
  prev_ = s;

  if (s.ar.fired()) {
    if (crosses_4k(s.ar.payload)) {
      report(out, cycle, "ar", Rule::Boundary4K,
             "read burst at " + hex(s.ar.payload.addr) + " crosses 4 KiB boundary");
    }
    reads_[s.ar.payload.id].push_back(ReadBurst{s.ar.payload.beats(), 0});
  }

  if (s.r.fired()) {
    auto it = reads_.find(s.r.payload.id);
    if (it == reads_.end() || it->second.empty()) {
      report(out, cycle, "r", Rule::Count, "R beat with no outstanding read burst");
    } else {
      ReadBurst& burst = it->second.front();
      ++burst.seen;
      const bool final_beat = burst.seen == burst.expected;
      if (s.r.payload.last && !final_beat) {
        report(out, cycle, "r", Rule::Last,
               "RLAST on beat " + std::to_string(burst.seen) + " of " +
                   std::to_string(burst.expected));
        report(out, cycle, "r", Rule::Count,
               "read burst carried " + std::to_string(burst.seen) + " beats, expected " +
                   std::to_string(burst.expected));
        it->second.pop_front();
      } else if (final_beat) {
        if (!s.r.payload.last) {
          report(out, cycle, "r", Rule::Last,
                 "RLAST missing on final beat " + std::to_string(burst.expected));
        }
        it->second.pop_front();
      }
    }
  }

  if (s.aw.fired()) {
    if (crosses_4k(s.aw.payload)) {
      report(out, cycle, "aw", Rule::Boundary4K,
             "write burst at " + hex(s.aw.payload.addr) + " crosses 4 KiB boundary");
    }
    const unsigned expected = s.aw.payload.beats();
    if (!early_w_.empty()) {
      const unsigned beats = early_w_.front();
      early_w_.pop_front();
      close_write_burst(cycle, beats, true, expected, out);
    } else {
      aw_lengths_.push_back(expected);
    }
  }

  if (s.b.fired()) {
    if (awaiting_response_ == 0) {
      report(out, cycle, "b", Rule::SingleResponse, "write response without a completed write burst");
    } else {
      --awaiting_response_;
    }
  }

  if (s.w.fired()) {
    ++w_beats_;
    if (!aw_lengths_.empty()) {
      const unsigned expected = aw_lengths_.front();
      const bool final_beat = w_beats_ == expected;
      if (s.w.payload.last || final_beat) {
        if (final_beat && !s.w.payload.last) {
          report(out, cycle, "w", Rule::Last,
                 "WLAST missing on final beat " + std::to_string(expected));
        }
        close_write_burst(cycle, w_beats_, s.w.payload.last, expected, out);
        aw_lengths_.pop_front();
        w_beats_ = 0;
      }
    } else if (s.w.payload.last) {
      early_w_.push_back(w_beats_);
      w_beats_ = 0;
    }
  }
}

std::vector<ProtocolViolation> check_trace(const PortTrace& trace) {
  std::vector<ProtocolViolation> out;
  ProtocolMonitor monitor(trace.port);
  Cycle cycle = trace.start_cycle;
  for (const PortSample& s : trace.cycles) monitor.observe(cycle++, s, out);
  return out;
}

std::vector<ProtocolViolation> check_trace(const BusTrace& trace) {
  std::vector<ProtocolViolation> out;
  for (const PortTrace& pt : trace) {
    auto v = check_trace(pt);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace cosim::axi
