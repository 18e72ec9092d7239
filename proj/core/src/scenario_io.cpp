#include "dado/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "dado/rng.hpp"
#include "json.hpp"

namespace dado {

using nlohmann::json;

namespace {

json to_json(const Scenario& s) {
  json j;
  j["schema"] = 1;
  j["hosts"] = json::array();
  for (const auto& h : s.hosts) {
    j["hosts"].push_back({{"id", h.id},
                          {"cpu_hz", h.cpu_hz},
                          {"ram_bytes", h.ram_bytes},
                          {"attached_switch", h.attached_switch},
                          {"kind", to_string(h.kind)}});
  }
  j["switches"] = json::array();
  for (const auto& sw : s.switches) {
    j["switches"].push_back({{"id", sw.id}, {"controller_capable", sw.controller_capable}});
  }
  j["links"] = json::array();
  for (const auto& l : s.links) {
    j["links"].push_back({{"src", l.src},
                          {"dst", l.dst},
                          {"latency_s", l.latency_s},
                          {"capacity_bps", l.capacity_bps}});
  }
  j["microservices"] = json::array();
  for (const auto& m : s.microservices) {
    j["microservices"].push_back({{"id", m.id},
                                  {"workload_cycles", m.workload_cycles},
                                  {"input_bytes", m.input_bytes},
                                  {"output_bytes", m.output_bytes},
                                  {"ram_bytes", m.ram_bytes}});
  }
  j["workflows"] = json::array();
  for (const auto& w : s.workflows) {
    j["workflows"].push_back(
        {{"id", w.id}, {"starter_host", w.starter_host}, {"chain", w.chain}});
  }
  j["control"] = {{"max_controllers", s.control.max_controllers},
                  {"control_packet_bytes", s.control.control_packet_bytes}};
  return j;
}

Scenario from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != 1)
    throw std::runtime_error("scenario file: missing or unsupported \"schema\" (expected 1)");
  Scenario s;
  for (const auto& jh : j.at("hosts")) {
    Host h;
    h.id = jh.at("id").get<std::string>();
    h.cpu_hz = jh.at("cpu_hz").get<int64_t>();
    h.ram_bytes = jh.at("ram_bytes").get<int64_t>();
    h.attached_switch = jh.at("attached_switch").get<std::string>();
    h.kind = host_kind_from_string(jh.at("kind").get<std::string>());
    s.hosts.push_back(std::move(h));
  }
  for (const auto& js : j.at("switches")) {
    SwitchNode sw;
    sw.id = js.at("id").get<std::string>();
    sw.controller_capable = js.value("controller_capable", true);
    s.switches.push_back(std::move(sw));
  }
  for (const auto& jl : j.at("links")) {
    Link l;
    l.src = jl.at("src").get<std::string>();
    l.dst = jl.at("dst").get<std::string>();
    l.latency_s = jl.at("latency_s").get<double>();
    l.capacity_bps = jl.at("capacity_bps").get<double>();
    s.links.push_back(std::move(l));
  }
  for (const auto& jm : j.at("microservices")) {
    Microservice m;
    m.id = jm.at("id").get<std::string>();
    m.workload_cycles = jm.at("workload_cycles").get<int64_t>();
    m.input_bytes = jm.at("input_bytes").get<int64_t>();
    m.output_bytes = jm.at("output_bytes").get<int64_t>();
    m.ram_bytes = jm.at("ram_bytes").get<int64_t>();
    s.microservices.push_back(std::move(m));
  }
  for (const auto& jw : j.at("workflows")) {
    Workflow w;
    w.id = jw.at("id").get<std::string>();
    w.starter_host = jw.at("starter_host").get<std::string>();
    w.chain = jw.at("chain").get<std::vector<std::string>>();
    s.workflows.push_back(std::move(w));
  }
  const auto& jc = j.at("control");
  s.control.max_controllers = jc.at("max_controllers").get<int>();
  s.control.control_packet_bytes = jc.at("control_packet_bytes").get<int64_t>();
  return s;
}

}  // namespace

std::string scenario_to_json(const Scenario& s, int indent) {
  return to_json(s).dump(indent) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scenario file: invalid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scenario file: bad structure: ") + e.what());
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << scenario_to_json(s);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_fingerprint(const Scenario& s) {
  uint64_t h = fnv1a64(to_json(s).dump());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dado
