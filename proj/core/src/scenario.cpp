#include "cosim/scenario.hpp"

#include <dlfcn.h>

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cosim {

using json = nlohmann::ordered_json;

namespace {

// ---- parsing helpers -------------------------------------------------------

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

std::uint64_t get_u64(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ConfigError(where + ": must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const auto n = std::stoull(s, &used, 0);
      if (used == s.size() && !s.empty() && s[0] != '-') return n;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where + ": expected a non-negative integer (decimal or 0x-prefixed string)");
}

std::int64_t get_i64(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const auto n = std::stoll(s, &used, 0);
      if (used == s.size()) return n;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where + ": expected an integer");
}

double get_prob(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(where + ": must be in [0, 1]");
  return p;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

ChannelCongestion parse_channel(const json& j, const std::string& where) {
  check_keys(j, where, {"ready_stall_prob", "valid_delay"});
  ChannelCongestion c;
  if (j.contains("ready_stall_prob")) c.ready_stall_prob = get_prob(j["ready_stall_prob"], where + ".ready_stall_prob");
  if (j.contains("valid_delay")) {
    const auto& d = j["valid_delay"];
    if (!d.is_array() || d.size() != 2) throw ConfigError(where + ".valid_delay: expected [min, max]");
    c.valid_delay_min = get_u64(d[0], where + ".valid_delay[0]");
    c.valid_delay_max = get_u64(d[1], where + ".valid_delay[1]");
    if (c.valid_delay_min > c.valid_delay_max) throw ConfigError(where + ".valid_delay: min > max");
  }
  return c;
}

// Either one channel block applied to all classes, or per-class blocks.
CongestionProfile parse_profile(const json& j, const std::string& where) {
  CongestionProfile p;
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const bool per_class = j.contains("ar") || j.contains("r") || j.contains("aw") || j.contains("w") ||
                         j.contains("b");
  if (per_class) {
    check_keys(j, where, {"ar", "r", "aw", "w", "b"});
    for (std::size_t i = 0; i < kChannelClasses; ++i) {
      const std::string key(channel_class_name(static_cast<ChannelClass>(i)));
      if (j.contains(key)) p.channels[i] = parse_channel(j[key], where + "." + key);
    }
  } else {
    const auto c = parse_channel(j, where);
    for (auto& ch : p.channels) ch = c;
  }
  return p;
}

json profile_json(const CongestionProfile& p) {
  json j = json::object();
  for (std::size_t i = 0; i < kChannelClasses; ++i) {
    const auto& c = p.channels[i];
    j[std::string(channel_class_name(static_cast<ChannelClass>(i)))] = {
        {"ready_stall_prob", c.ready_stall_prob},
        {"valid_delay", {c.valid_delay_min, c.valid_delay_max}}};
  }
  return j;
}

std::string resolve(const std::string& path, const std::filesystem::path& base_dir) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal().string();
}

WatchMode parse_mode(const std::string& s, const std::string& where) {
  if (s == "read") return WatchMode::Read;
  if (s == "write") return WatchMode::Write;
  if (s == "both") return WatchMode::Both;
  throw ConfigError(where + ": mode must be read, write or both");
}

const char* mode_name(WatchMode m) {
  switch (m) {
    case WatchMode::Read: return "read";
    case WatchMode::Write: return "write";
    case WatchMode::Both: return "both";
  }
  return "both";
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"dut", "firmware", "seed", "max_cycles", "watchdog_window", "strict",
                           "arbitration", "congestion", "report", "vcd", "watch", "preload"});
  ScenarioConfig c;

  if (j.contains("dut")) {
    const auto& d = j["dut"];
    check_keys(d, "dut", {"kind", "rows", "cols", "registers", "base", "sink_ready_prob"});
    if (d.contains("kind")) c.dut.kind = get_string(d["kind"], "dut.kind");
    if (c.dut.kind != "systolic-soc" && c.dut.kind != "register-file" && c.dut.kind != "dma-rig") {
      throw ConfigError("dut.kind: unknown DUT '" + c.dut.kind + "'");
    }
    if (d.contains("rows")) c.dut.rows = static_cast<unsigned>(get_u64(d["rows"], "dut.rows"));
    if (d.contains("cols")) c.dut.cols = static_cast<unsigned>(get_u64(d["cols"], "dut.cols"));
    if (c.dut.rows < 1 || c.dut.rows > dut::kMaxArrayDim || c.dut.cols < 1 || c.dut.cols > dut::kMaxArrayDim) {
      throw ConfigError("dut.rows/cols must be in [1, 16]");
    }
    if (d.contains("registers")) c.dut.registers = static_cast<unsigned>(get_u64(d["registers"], "dut.registers"));
    if (c.dut.registers < 1 || c.dut.registers > 1u << 16) throw ConfigError("dut.registers must be in [1, 65536]");
    if (d.contains("base")) c.dut.base = get_u64(d["base"], "dut.base");
    if (c.dut.base % 4 != 0) throw ConfigError("dut.base must be 4-byte aligned");
    if (d.contains("sink_ready_prob")) c.dut.sink_ready_prob = get_prob(d["sink_ready_prob"], "dut.sink_ready_prob");
  }

  if (!j.contains("firmware")) throw ConfigError("config: 'firmware' is required");
  {
    const auto& f = j["firmware"];
    check_keys(f, "firmware", {"builtin", "params", "library", "entry"});
    if (f.contains("builtin")) c.firmware.builtin = get_string(f["builtin"], "firmware.builtin");
    if (f.contains("library")) c.firmware.library = resolve(get_string(f["library"], "firmware.library"), base_dir);
    if (f.contains("entry")) c.firmware.entry = get_string(f["entry"], "firmware.entry");
    if (c.firmware.builtin.empty() == c.firmware.library.empty()) {
      throw ConfigError("firmware: give exactly one of 'builtin' or 'library'");
    }
    if (f.contains("params")) {
      const auto& p = f["params"];
      if (!p.is_object()) throw ConfigError("firmware.params: expected an object");
      for (const auto& [key, value] : p.items()) {
        c.firmware.params[key] = get_i64(value, "firmware.params." + key);
      }
    }
    if (!c.firmware.builtin.empty()) {
      const auto* b = fw::find_builtin(c.firmware.builtin);
      if (!b) throw ConfigError("firmware.builtin: unknown program '" + c.firmware.builtin + "'");
      if (b->dut != "any" && b->dut != c.dut.kind) {
        throw ConfigError("firmware '" + b->name + "' drives a " + b->dut + ", not a " + c.dut.kind);
      }
      for (const auto& [key, value] : c.firmware.params) {
        if (key != "seed" && std::find(b->params.begin(), b->params.end(), key) == b->params.end()) {
          throw ConfigError("firmware.params: '" + b->name + "' has no parameter '" + key + "'");
        }
      }
    } else if (!std::filesystem::exists(c.firmware.library)) {
      throw ConfigError("firmware.library: '" + c.firmware.library + "' not found");
    }
  }

  if (j.contains("seed")) c.seed = get_u64(j["seed"], "seed");
  if (j.contains("max_cycles")) c.max_cycles = get_u64(j["max_cycles"], "max_cycles");
  if (j.contains("watchdog_window")) c.watchdog_window = get_u64(j["watchdog_window"], "watchdog_window");
  if (c.max_cycles < 1) throw ConfigError("max_cycles must be >= 1");
  if (c.watchdog_window < 1) throw ConfigError("watchdog_window must be >= 1");
  if (j.contains("strict")) c.strict = get_bool(j["strict"], "strict");

  if (j.contains("arbitration")) {
    const auto& a = j["arbitration"];
    check_keys(a, "arbitration", {"policy", "order"});
    const auto policy = a.contains("policy") ? get_string(a["policy"], "arbitration.policy") : "round-robin";
    if (policy == "round-robin") {
      c.arbitration = ArbitrationPolicy::round_robin();
      if (a.contains("order")) throw ConfigError("arbitration.order applies to fixed-priority only");
    } else if (policy == "fixed-priority") {
      if (!a.contains("order") || !a["order"].is_array()) {
        throw ConfigError("arbitration.order: fixed-priority needs a list of port names");
      }
      std::vector<std::string> order;
      for (const auto& n : a["order"]) order.push_back(get_string(n, "arbitration.order[]"));
      c.arbitration = ArbitrationPolicy::fixed(std::move(order));
    } else {
      throw ConfigError("arbitration.policy: expected round-robin or fixed-priority");
    }
  }

  if (j.contains("congestion")) {
    const auto& g = j["congestion"];
    check_keys(g, "congestion", {"default", "ports"});
    if (g.contains("default")) c.congestion = parse_profile(g["default"], "congestion.default");
    if (g.contains("ports")) {
      if (!g["ports"].is_object()) throw ConfigError("congestion.ports: expected an object");
      for (const auto& [port, profile] : g["ports"].items()) {
        c.port_congestion[port] = parse_profile(profile, "congestion.ports." + port);
      }
    }
  }

  if (j.contains("report")) {
    const auto& r = j["report"];
    check_keys(r, "report", {"dir", "formats", "window_cycles", "addr_bucket", "time_bucket"});
    if (r.contains("dir")) c.report.dir = resolve(get_string(r["dir"], "report.dir"), base_dir);
    if (r.contains("formats")) {
      if (!r["formats"].is_array()) throw ConfigError("report.formats: expected a list");
      c.report.formats.clear();
      for (const auto& f : r["formats"]) {
        const auto s = get_string(f, "report.formats[]");
        if (s == "csv") {
          c.report.formats.push_back(ReportFormat::Csv);
        } else if (s == "json") {
          c.report.formats.push_back(ReportFormat::Json);
        } else {
          throw ConfigError("report.formats: expected csv or json");
        }
      }
    }
    if (r.contains("window_cycles")) c.report.options.window_cycles = get_u64(r["window_cycles"], "report.window_cycles");
    if (r.contains("addr_bucket")) c.report.options.addr_bucket_bytes = get_u64(r["addr_bucket"], "report.addr_bucket");
    if (r.contains("time_bucket")) c.report.options.time_bucket_cycles = get_u64(r["time_bucket"], "report.time_bucket");
    if (c.report.options.window_cycles < 1 || c.report.options.addr_bucket_bytes < 1 ||
        c.report.options.time_bucket_cycles < 1) {
      throw ConfigError("report: window and bucket sizes must be >= 1");
    }
  }

  if (j.contains("vcd")) c.vcd = resolve(get_string(j["vcd"], "vcd"), base_dir);

  if (j.contains("watch")) {
    if (!j["watch"].is_array()) throw ConfigError("watch: expected a list");
    for (const auto& w : j["watch"]) {
      check_keys(w, "watch[]", {"base", "length", "mode", "label"});
      WatchRegion region;
      if (!w.contains("base") || !w.contains("length")) throw ConfigError("watch[]: base and length are required");
      region.base = get_u64(w["base"], "watch[].base");
      region.length = get_u64(w["length"], "watch[].length");
      if (region.length < 1) throw ConfigError("watch[].length must be >= 1");
      if (w.contains("mode")) region.mode = parse_mode(get_string(w["mode"], "watch[].mode"), "watch[]");
      if (w.contains("label")) region.label = get_string(w["label"], "watch[].label");
      c.watch.push_back(std::move(region));
    }
  }

  if (j.contains("preload")) {
    if (!j["preload"].is_array()) throw ConfigError("preload: expected a list");
    for (const auto& p : j["preload"]) {
      check_keys(p, "preload[]", {"file", "base"});
      if (!p.contains("file") || !p.contains("base")) throw ConfigError("preload[]: file and base are required");
      PreloadSpec spec{resolve(get_string(p["file"], "preload[].file"), base_dir), get_u64(p["base"], "preload[].base")};
      if (!std::filesystem::exists(spec.file)) throw ConfigError("preload: '" + spec.file + "' not found");
      c.preload.push_back(std::move(spec));
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["dut"] = {{"kind", c.dut.kind},
              {"rows", c.dut.rows},
              {"cols", c.dut.cols},
              {"registers", c.dut.registers},
              {"base", hex(c.dut.base)},
              {"sink_ready_prob", c.dut.sink_ready_prob}};
  json f = json::object();
  if (!c.firmware.builtin.empty()) f["builtin"] = c.firmware.builtin;
  if (!c.firmware.library.empty()) {
    f["library"] = c.firmware.library;
    f["entry"] = c.firmware.entry;
  }
  f["params"] = json::object();
  for (const auto& [k, v] : c.firmware.params) f["params"][k] = v;
  j["firmware"] = f;
  j["seed"] = c.seed;
  j["max_cycles"] = c.max_cycles;
  j["watchdog_window"] = c.watchdog_window;
  j["strict"] = c.strict;
  if (c.arbitration.kind == ArbitrationPolicy::Kind::FixedPriority) {
    j["arbitration"] = {{"policy", "fixed-priority"}, {"order", c.arbitration.priority}};
  } else {
    j["arbitration"] = {{"policy", "round-robin"}};
  }
  j["congestion"]["default"] = profile_json(c.congestion);
  j["congestion"]["ports"] = json::object();
  for (const auto& [port, p] : c.port_congestion) j["congestion"]["ports"][port] = profile_json(p);
  json formats = json::array();
  for (auto f2 : c.report.formats) formats.push_back(f2 == ReportFormat::Csv ? "csv" : "json");
  j["report"] = {{"dir", c.report.dir},
                 {"formats", formats},
                 {"window_cycles", c.report.options.window_cycles},
                 {"addr_bucket", c.report.options.addr_bucket_bytes},
                 {"time_bucket", c.report.options.time_bucket_cycles}};
  j["vcd"] = c.vcd;
  j["watch"] = json::array();
  for (const auto& w : c.watch) {
    j["watch"].push_back({{"base", hex(w.base)}, {"length", w.length}, {"mode", mode_name(w.mode)}, {"label", w.label}});
  }
  j["preload"] = json::array();
  for (const auto& p : c.preload) j["preload"].push_back({{"file", p.file}, {"base", hex(p.base)}});
  return j.dump(2) + "\n";
}

ExitCode exit_code_for(const SimResult& sim, bool violations_recorded) {
  switch (sim.outcome) {
    case Outcome::ProtocolViolation: return ExitCode::ProtocolViolation;
    case Outcome::Hang: return ExitCode::Hang;
    case Outcome::MaxCyclesReached: return ExitCode::MaxCycles;
    case Outcome::FirmwareDone:
      if (violations_recorded) return ExitCode::ProtocolViolation;
      return sim.firmware_status == 0 ? ExitCode::Ok : ExitCode::VerificationMismatch;
  }
  return ExitCode::ConfigError;
}

// ---- assembly -------------------------------------------------------------

Scenario::Scenario(ScenarioConfig config, Overrides overrides) : config_(std::move(config)) {
  kernel_ = std::make_unique<Kernel>();
  memory_ = std::make_unique<MemoryImage>();
  memory_->set_clock([k = kernel_.get()] { return k->now(); });
  profiler_ = std::make_unique<Profiler>();

  BridgeOptions options;
  options.arbitration = config_.arbitration;
  options.strict = config_.strict;
  options.record_trace = overrides.record_trace;
  bridge_ = std::make_unique<MemoryBridge>(*kernel_, *memory_, *profiler_, options);
  registers_ = std::make_unique<RegisterBridge>(*kernel_, profiler_.get(), config_.strict);

  const auto& d = config_.dut;
  if (d.kind == "systolic-soc") {
    assembly_ = dut::build_systolic_soc(*kernel_, d.rows, d.cols);
  } else if (d.kind == "register-file") {
    assembly_ = dut::build_register_file_dut(*kernel_, d.registers, d.base);
  } else if (d.kind == "dma-rig") {
    assembly_ = dut::build_dma_rig(*kernel_, d.sink_ready_prob, config_.seed);
  } else {
    throw ConfigError("unknown DUT kind '" + d.kind + "'");
  }

  for (const auto& [port, profile] : config_.port_congestion) {
    bool known = false;
    for (const auto& p : assembly_->manager_ports) known = known || p.name == port;
    if (!known) throw ConfigError("congestion.ports: DUT has no port '" + port + "'");
  }
  assembly_->attach(*bridge_, *registers_, [this](const std::string& port) {
    auto it = config_.port_congestion.find(port);
    CongestionProfile p = it == config_.port_congestion.end() ? config_.congestion : it->second;
    p.seed = config_.seed;
    return p;
  });
  bridge_->validate();

  for (const auto& w : config_.watch) memory_->add_watch(w);
  for (const auto& p : config_.preload) memory_->load_image(p.file, p.base);

  if (!config_.vcd.empty()) tracer_ = std::make_unique<WaveformTracer>(*kernel_);

  firmware_ = std::make_unique<FirmwareContext>(*kernel_, *memory_, *registers_);
  if (overrides.firmware) {
    firmware_->spawn(*overrides.firmware);
  } else if (!config_.firmware.builtin.empty()) {
    const auto* builtin = fw::find_builtin(config_.firmware.builtin);
    if (!builtin) throw ConfigError("unknown builtin firmware '" + config_.firmware.builtin + "'");
    fw::Params params = config_.firmware.params;
    params.try_emplace("seed", static_cast<std::int64_t>(config_.seed));
    firmware_->spawn([entry = builtin->entry, params](FirmwareContext& ctx) { return entry(ctx, params); });
  } else {
    library_ = dlopen(config_.firmware.library.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!library_) throw ConfigError(std::string("cannot load firmware library: ") + dlerror());
    void* sym = dlsym(library_, config_.firmware.entry.c_str());
    if (!sym) throw ConfigError("firmware library has no symbol '" + config_.firmware.entry + "'");
    auto* fn = reinterpret_cast<int (*)()>(sym);
    firmware_->spawn([fn](FirmwareContext&) { return fn(); });
  }
}

Scenario::~Scenario() {
  // The firmware stack may reference library code; unwind it before unloading.
  kernel_.reset();
  if (library_) dlclose(library_);
}

dut::SystolicSoc* Scenario::soc() { return dynamic_cast<dut::SystolicSoc*>(assembly_.get()); }
dut::RegisterFileDut* Scenario::register_file() {
  return dynamic_cast<dut::RegisterFileDut*>(assembly_.get());
}
dut::DmaRig* Scenario::dma_rig() { return dynamic_cast<dut::DmaRig*>(assembly_.get()); }
const VcdWriter* Scenario::waveform() const { return tracer_ ? &tracer_->writer() : nullptr; }

ScenarioResult Scenario::run() {
  if (ran_) throw Error("scenario already ran");
  ran_ = true;
  ScenarioResult r;
  r.sim = kernel_->run(KernelConfig{config_.max_cycles, config_.watchdog_window, config_.seed});
  profiler_->finish(r.sim.final_cycle);
  r.violations = bridge_->violations();
  r.exit_code = exit_code_for(r.sim, !r.violations.empty());
  r.memory_digest = memory_->digest();
  r.record_bytes_read = profiler_->total_bytes(Direction::Read);
  r.record_bytes_written = profiler_->total_bytes(Direction::Write);
  for (const auto& port : profiler_->bandwidth(config_.report.options.window_cycles).windows) {
    for (const auto& w : port) r.window_bytes += w.bytes;
  }
  r.memory_bytes_read = memory_->bus_bytes_read();
  r.memory_bytes_written = memory_->bus_bytes_written();
  r.in_flight_read_bytes = bridge_->in_flight_read_bytes();
  r.uncommitted_write_bytes = bridge_->uncommitted_write_bytes();
  r.watch_events = memory_->take_access_log();
  return r;
}

void Scenario::write_outputs(const ScenarioResult& result) const {
  if (!config_.report.dir.empty()) {
    const std::filesystem::path dir(config_.report.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create report directory '" + dir.string() + "': " + ec.message());
    for (auto format : config_.report.formats) {
      export_report(*profiler_, format, config_.report.options,
                    format == ReportFormat::Csv ? dir : dir / "report.json");
    }

    const auto watch_path = dir / "watch.csv";
    std::ofstream watch(watch_path, std::ios::binary | std::ios::trunc);
    if (!watch) throw Error("cannot write report '" + watch_path.string() + "'");
    watch << "cycle,origin,kind,addr,length,regions\n";
    for (const auto& e : result.watch_events) {
      watch << e.cycle << ',' << e.origin.label() << ',' << (e.kind == AccessKind::Read ? "read" : "write")
            << ',' << hex(e.addr) << ',' << e.length << ',';
      for (std::size_t i = 0; i < e.regions.size(); ++i) {
        const auto& label = config_.watch.at(e.regions[i]).label;
        watch << (i ? ";" : "") << (label.empty() ? std::to_string(e.regions[i]) : label);
      }
      watch << '\n';
    }
    if (!watch.flush()) throw Error("I/O error writing report '" + watch_path.string() + "'");

    json s;
    s["outcome"] = std::string(outcome_name(result.sim.outcome));
    s["final_cycle"] = result.sim.final_cycle;
    s["exit_code"] = static_cast<int>(result.exit_code);
    if (result.sim.firmware_status) s["firmware_status"] = *result.sim.firmware_status;
    s["diagnostics"] = result.sim.diagnostics;
    s["violations"] = json::array();
    for (const auto& v : result.violations) s["violations"].push_back(axi::to_string(v));
    s["memory_digest"] = hex(result.memory_digest);
    s["bytes"] = {{"records_read", result.record_bytes_read},
                  {"records_written", result.record_bytes_written},
                  {"windows", result.window_bytes},
                  {"memory_read", result.memory_bytes_read},
                  {"memory_written", result.memory_bytes_written},
                  {"in_flight_read", result.in_flight_read_bytes},
                  {"uncommitted_write", result.uncommitted_write_bytes}};
    s["register_accesses"] = registers_->access_count();
    const auto summary_path = dir / "summary.json";
    std::ofstream summary(summary_path, std::ios::binary | std::ios::trunc);
    if (!summary) throw Error("cannot write report '" + summary_path.string() + "'");
    summary << s.dump(2) << '\n';
    if (!summary.flush()) throw Error("I/O error writing report '" + summary_path.string() + "'");
  }
  if (tracer_) {
    const std::filesystem::path path(config_.vcd);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    tracer_->finalize(path);
  }
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  Scenario scenario(config);
  auto result = scenario.run();
  scenario.write_outputs(result);
  return result;
}

std::string describe(const ScenarioResult& result) {
  std::ostringstream os;
  os << "outcome: " << outcome_name(result.sim.outcome) << " at cycle " << result.sim.final_cycle;
  if (result.sim.firmware_status) os << " (firmware status " << *result.sim.firmware_status << ")";
  os << '\n';
  for (const auto& d : result.sim.diagnostics) os << "  " << d << '\n';
  for (const auto& v : result.violations) os << "  violation: " << axi::to_string(v) << '\n';
  return os.str();
}

}  // namespace cosim
