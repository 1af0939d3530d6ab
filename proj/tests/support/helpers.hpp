#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cosim/axi.hpp"
#include "cosim/kernel.hpp"

namespace cosim::test {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cosim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Manager that issues a queue of read bursts on one port, one AR at a time,
/// and records when each R beat fired.
class ScriptedReader final : public Process {
 public:
  ScriptedReader(Kernel& kernel, std::string name, std::vector<axi::AddrBeat> bursts,
                 unsigned bus_bytes = axi::kDefaultBusBytes)
      : name_(std::move(name)), port_(axi::make_axi_port(kernel, name_, bus_bytes)),
        bursts_(std::move(bursts)) {
    kernel.register_process(*this);
  }

  std::string_view name() const override { return name_; }
  const axi::AxiPort& port() const { return port_; }

  void eval(Cycle now) override {
    if (port_.ar->fired()) {
      ar_cycles.push_back(now);
      ++next_;
    }
    if (port_.r->fired()) {
      r_cycles.push_back(now);
      r_beats.push_back(port_.r->payload());
    }
    const bool issue = next_ < bursts_.size();
    port_.ar->drive(issue, issue ? bursts_[next_] : axi::AddrBeat{});
    port_.r->set_ready(r_ready);
    port_.aw->set_valid(false);
    port_.w->set_valid(false);
    port_.b->set_ready(false);
  }

  bool done() const { return next_ == bursts_.size(); }

  bool r_ready = true;
  std::vector<Cycle> ar_cycles;
  std::vector<Cycle> r_cycles;
  std::vector<axi::ReadBeat> r_beats;

 private:
  std::string name_;
  axi::AxiPort port_;
  std::vector<axi::AddrBeat> bursts_;
  std::size_t next_ = 0;
};

/// Manager that writes one burst: AW first, then W beats back to back.
class ScriptedWriter final : public Process {
 public:
  ScriptedWriter(Kernel& kernel, std::string name, axi::AddrBeat aw,
                 std::vector<axi::WriteBeat> beats, unsigned bus_bytes = axi::kDefaultBusBytes)
      : name_(std::move(name)), port_(axi::make_axi_port(kernel, name_, bus_bytes)), aw_(aw),
        beats_(std::move(beats)) {
    kernel.register_process(*this);
  }

  std::string_view name() const override { return name_; }
  const axi::AxiPort& port() const { return port_; }

  void eval(Cycle now) override {
    if (port_.aw->fired()) aw_sent_ = true;
    if (port_.w->fired()) {
      w_cycles.push_back(now);
      ++sent_;
    }
    if (port_.b->fired()) {
      b_cycles.push_back(now);
      b_resp.push_back(port_.b->payload().resp);
    }
    port_.aw->drive(!aw_sent_, aw_);
    const bool send = aw_sent_ && sent_ < beats_.size();
    port_.w->drive(send, send ? beats_[sent_] : axi::WriteBeat{});
    port_.b->set_ready(true);
    port_.ar->set_valid(false);
    port_.r->set_ready(false);
  }

  std::vector<Cycle> w_cycles;
  std::vector<Cycle> b_cycles;
  std::vector<axi::Resp> b_resp;

 private:
  std::string name_;
  axi::AxiPort port_;
  axi::AddrBeat aw_;
  std::vector<axi::WriteBeat> beats_;
  bool aw_sent_ = false;
  std::size_t sent_ = 0;
};

inline axi::AddrBeat burst(Addr addr, unsigned beats, unsigned size_log2 = 4) {
  axi::AddrBeat b;
  b.addr = addr;
  b.len_m1 = static_cast<std::uint8_t>(beats - 1);
  b.size_log2 = static_cast<std::uint8_t>(size_log2);
  return b;
}

}  // namespace cosim::test
