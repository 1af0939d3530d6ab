#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosim::test {

/// Minimal VCD parser used to cross-check the writer. Knows only what a
/// two-state dump needs: $scope/$var/$upscope, #time, scalar and b-vector changes.
struct VcdDump {
  struct Var {
    std::string path;  // scope.name
    unsigned width = 0;
  };
  struct Change {
    std::uint64_t time = 0;
    std::string id;
    std::string value;  // binary digits
  };
  std::string timescale;
  std::map<std::string, Var> vars;  // by id
  std::vector<Change> changes;

  std::string id_of(const std::string& path) const {
    for (const auto& [id, v] : vars) {
      if (v.path == path) return id;
    }
    throw std::runtime_error("no VCD variable " + path);
  }
  std::vector<Change> changes_of(const std::string& path) const {
    const auto id = id_of(path);
    std::vector<Change> out;
    for (const auto& c : changes) {
      if (c.id == id) out.push_back(c);
    }
    return out;
  }
};

inline VcdDump parse_vcd(const std::string& text) {
  VcdDump dump;
  std::istringstream in(text);
  std::vector<std::string> scope;
  std::string tok;
  std::uint64_t time = 0;
  bool have_time = false;
  auto skip_to_end = [&in] {
    std::string t;
    std::string body;
    while (in >> t && t != "$end") body += (body.empty() ? "" : " ") + t;
    return body;
  };
  while (in >> tok) {
    if (tok == "$scope") {
      std::string kind, name;
      in >> kind >> name;
      scope.push_back(name);
      skip_to_end();
    } else if (tok == "$upscope") {
      if (scope.empty()) throw std::runtime_error("unbalanced $upscope");
      scope.pop_back();
      skip_to_end();
    } else if (tok == "$var") {
      std::string type, id, name;
      unsigned width = 0;
      in >> type >> width >> id >> name;
      skip_to_end();
      std::string path;
      for (const auto& s : scope) path += s + ".";
      if (dump.vars.count(id)) throw std::runtime_error("duplicate id " + id);
      dump.vars[id] = {path + name, width};
    } else if (tok == "$timescale") {
      dump.timescale = skip_to_end();
    } else if (tok[0] == '$') {
      skip_to_end();
    } else if (tok[0] == '#') {
      const auto t = std::stoull(tok.substr(1));
      if (have_time && t <= time) throw std::runtime_error("time not increasing at " + tok);
      time = t;
      have_time = true;
    } else if (tok[0] == 'b') {
      std::string id;
      in >> id;
      if (!have_time) throw std::runtime_error("value before first timestamp");
      if (!dump.vars.count(id)) throw std::runtime_error("unknown id " + id);
      dump.changes.push_back({time, id, tok.substr(1)});
    } else if (tok[0] == '0' || tok[0] == '1') {
      const auto id = tok.substr(1);
      if (!have_time) throw std::runtime_error("value before first timestamp");
      if (!dump.vars.count(id)) throw std::runtime_error("unknown id " + id);
      dump.changes.push_back({time, id, tok.substr(0, 1)});
    } else {
      throw std::runtime_error("unexpected VCD token " + tok);
    }
  }
  return dump;
}

}  // namespace cosim::test
