// cosim: run a co-simulation scenario or list the reference DUTs.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosim/scenario.hpp"

namespace {

int list_duts(bool as_json) {
  const auto catalog = cosim::dut::dut_catalog();
  if (as_json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& d : catalog) {
      nlohmann::ordered_json dut{{"kind", d.kind}, {"description", d.description}, {"manager_ports", d.manager_ports}};
      dut["blocks"] = nlohmann::ordered_json::array();
      for (const auto& b : d.blocks) {
        nlohmann::ordered_json block{{"name", b.name}, {"base", cosim::hex(b.base)}, {"length", b.length},
                                     {"latency", b.latency}};
        block["registers"] = nlohmann::ordered_json::array();
        for (const auto& r : b.registers) {
          block["registers"].push_back(
              {{"name", r.name}, {"offset", cosim::hex(r.offset)}, {"access", r.access}, {"description", r.description}});
        }
        dut["blocks"].push_back(std::move(block));
      }
      out.push_back(std::move(dut));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  for (const auto& d : catalog) {
    std::cout << d.kind << ": " << d.description << '\n';
    if (!d.manager_ports.empty()) {
      std::cout << "  manager ports:";
      for (const auto& p : d.manager_ports) std::cout << ' ' << p;
      std::cout << '\n';
    }
    for (const auto& b : d.blocks) {
      std::cout << "  " << b.name << " @ " << cosim::hex(b.base) << " (" << b.length << " bytes, latency "
                << b.latency << ")\n";
      for (const auto& r : b.registers) {
        std::cout << "    +" << cosim::hex(r.offset) << "  " << r.name << "  " << r.access << "  " << r.description
                  << '\n';
      }
    }
  }
  return 0;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_cycles;
  std::optional<std::string> vcd;
  std::optional<std::string> report_dir;
};

int run(const RunArgs& args) {
  using cosim::ExitCode;
  cosim::ScenarioConfig config;
  try {
    config = cosim::load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    if (args.max_cycles) {
      if (*args.max_cycles < 1) throw cosim::ConfigError("--max-cycles must be >= 1");
      config.max_cycles = *args.max_cycles;
    }
    if (args.vcd) config.vcd = *args.vcd;
    if (args.report_dir) config.report.dir = *args.report_dir;
  } catch (const cosim::Error& e) {
    std::cerr << "cosim: " << e.what() << '\n';
    return static_cast<int>(ExitCode::ConfigError);
  }

  try {
    cosim::Scenario scenario(config);
    const auto result = scenario.run();
    scenario.write_outputs(result);
    std::cerr << cosim::describe(result);
    return static_cast<int>(result.exit_code);
  } catch (const cosim::ConfigError& e) {
    std::cerr << "cosim: " << e.what() << '\n';
    return static_cast<int>(ExitCode::ConfigError);
  } catch (const std::exception& e) {
    std::cerr << "cosim: error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::ConfigError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level HW/FW co-simulation"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario");
  run_cmd->add_option("--config", run_args.config, "Scenario file (JSON)")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--max-cycles", run_args.max_cycles, "Override the cycle limit");
  run_cmd->add_option("--vcd", run_args.vcd, "Write a waveform to this path");
  run_cmd->add_option("--report-dir", run_args.report_dir, "Write profiling reports here");

  bool as_json = false;
  auto* list_cmd = app.add_subcommand("list-duts", "List reference DUTs and their register maps");
  list_cmd->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return static_cast<int>(cosim::ExitCode::ConfigError);
  }

  if (*run_cmd) return run(run_args);
  return list_duts(as_json);
}
