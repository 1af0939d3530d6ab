#include "cosim/vcd.hpp"

#include <fstream>
#include <map>

namespace cosim {

namespace {

std::vector<std::string> split_scope(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

void write_value(std::ostream& out, const BitValue& v, const std::string& id) {
  if (v.width() == 1) {
    out << (v.bit(0) ? '1' : '0') << id << '\n';
  } else {
    out << 'b' << v.to_binary() << ' ' << id << '\n';
  }
}

// Scope tree in first-declaration order.
struct ScopeNode {
  std::vector<std::string> child_order;
  std::map<std::string, ScopeNode> children;
  std::vector<std::size_t> signals;
};

}  // namespace

VcdWriter::VcdWriter(Options options) : options_(std::move(options)) {}

std::string VcdWriter::identifier(std::size_t n) {
  constexpr std::size_t kBase = '~' - '!' + 1;
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + n % kBase));
    n /= kBase;
  } while (n-- > 0);
  return id;
}

VcdWriter::SignalId VcdWriter::declare(const std::string& scope, const std::string& name,
                                       unsigned width) {
  if (last_cycle_) throw Error("vcd: declaration after sampling started ('" + name + "')");
  if (width < 1 || width > BitValue::kMaxBits) {
    throw Error("vcd: width of '" + name + "' must be in [1, 512]");
  }
  if (name.empty()) throw Error("vcd: empty signal name");
  for (const auto& s : signals_) {
    if (s.scope == scope && s.name == name) {
      throw Error("vcd: duplicate signal '" + scope + "." + name + "'");
    }
  }
  signals_.push_back(Signal{scope, name, width, identifier(signals_.size())});
  return signals_.size() - 1;
}

void VcdWriter::sample_cycle(Cycle cycle, std::span<const BitValue> values) {
  if (values.size() != signals_.size()) {
    throw Error("vcd: expected " + std::to_string(signals_.size()) + " values, got " +
                std::to_string(values.size()));
  }
  if (last_cycle_ && cycle <= *last_cycle_) throw Error("vcd: cycles must strictly increase");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].width() != signals_[i].width) {
      throw Error("vcd: width mismatch for '" + signals_[i].name + "'");
    }
  }

  if (!last_cycle_) {
    body_ << '#' << cycle << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) write_value(body_, values[i], signals_[i].id);
    last_.assign(values.begin(), values.end());
  } else {
    bool stamped = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == last_[i]) continue;
      if (!stamped) {
        body_ << '#' << cycle << '\n';
        stamped = true;
      }
      write_value(body_, values[i], signals_[i].id);
      last_[i] = values[i];
    }
  }
  last_cycle_ = cycle;
}

void VcdWriter::write_header(std::ostream& out) const {
  out << "$date\n  " << options_.date << "\n$end\n";
  out << "$version\n  " << options_.version << "\n$end\n";
  out << "$timescale " << options_.timescale << " $end\n";

  ScopeNode root;
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    ScopeNode* node = &root;
    for (const auto& part : split_scope(signals_[i].scope)) {
      auto [it, inserted] = node->children.try_emplace(part);
      if (inserted) node->child_order.push_back(part);
      node = &it->second;
    }
    node->signals.push_back(i);
  }

  auto emit = [&](auto& self, const ScopeNode& node) -> void {
    for (std::size_t i : node.signals) {
      const auto& s = signals_[i];
      out << "$var wire " << s.width << ' ' << s.id << ' ' << s.name;
      if (s.width > 1) out << " [" << s.width - 1 << ":0]";
      out << " $end\n";
    }
    for (const auto& name : node.child_order) {
      out << "$scope module " << name << " $end\n";
      self(self, node.children.at(name));
      out << "$upscope $end\n";
    }
  };
  emit(emit, root);
  out << "$enddefinitions $end\n";
}

std::string VcdWriter::str() const {
  std::ostringstream out;
  write_header(out);
  out << body_.str();
  return out.str();
}

void VcdWriter::finalize(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write VCD '" + path.string() + "'");
  out << str();
  out.flush();
  if (!out) throw Error("I/O error writing VCD '" + path.string() + "'");
}

WaveformTracer::WaveformTracer(Kernel& kernel, VcdWriter::Options options)
    : kernel_(kernel), writer_(std::move(options)) {
  kernel_.add_cycle_observer([this](Cycle now) { sample(now); });
}

void WaveformTracer::declare_all() {
  std::vector<TraceField> fields;
  for (const ChannelBase* ch : kernel_.channels()) {
    writer_.declare(ch->name(), "valid", 1);
    writer_.declare(ch->name(), "ready", 1);
    fields.clear();
    ch->describe_payload(fields);
    for (const auto& f : fields) writer_.declare(ch->name(), f.name, f.width);
  }
  for (Process* p : kernel_.processes()) {
    const std::size_t first = debug_.size();
    p->debug_signals(debug_);
    for (std::size_t i = first; i < debug_.size(); ++i) {
      writer_.declare(std::string(p->name()), debug_[i].name, debug_[i].width);
    }
  }
  declared_ = true;
}

void WaveformTracer::sample(Cycle cycle) {
  if (!declared_) declare_all();
  values_.clear();
  for (const ChannelBase* ch : kernel_.channels()) {
    values_.emplace_back(1, ch->valid());
    values_.emplace_back(1, ch->ready());
    ch->sample_payload(values_);
  }
  for (const auto& d : debug_) values_.emplace_back(d.width, d.probe());
  writer_.sample_cycle(cycle, values_);
}

}  // namespace cosim
