#include "acoroute/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace acoroute {

using nlohmann::json;

const char* to_string(Mode mode) {
  return mode == Mode::Manet ? "manet" : "antnet";
}
const char* to_string(Protocol protocol) {
  return protocol == Protocol::Ara ? "ara" : "eara";
}
const char* to_string(FantMode mode) {
  return mode == FantMode::Flood ? "flood" : "forward";
}
const char* to_string(AntMode mode) {
  return mode == AntMode::Regular ? "regular" : "flying";
}

std::string Scenario::protocol_label() const {
  if (mode == Mode::AntNet) return "antnet";
  return to_string(protocol);
}

std::string Scenario::mode_label() const {
  if (mode == Mode::AntNet) return to_string(antnet.ant_mode);
  return to_string(fant_mode);
}

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error([&violations] {
        std::ostringstream out;
        out << "invalid scenario:";
        for (const auto& v : violations) out << "\n  " << v;
        return out.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

double parse_time_or_inf(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw ScenarioError({"expected number or \"inf\", got \"" +
                         j.get<std::string>() + "\""});
  }
  return j.get<double>();
}

json time_or_inf_to_json(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

Flow parse_flow(const json& j) {
  Flow f;
  f.source = j.at("source").get<NodeId>();
  f.destination = j.at("destination").get<NodeId>();
  f.rate_pps = j.at("rate_pps").get<double>();
  f.packet_bits = j.at("packet_bits").get<std::int64_t>();
  f.start = j.at("start").get<double>();
  f.stop = j.at("stop").get<double>();
  return f;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("json parse error: ") + e.what()});
  }

  try {
    if (!j.contains("schema") || j["schema"] != kScenarioSchema) {
      throw ScenarioError({"schema: expected \"" + std::string(kScenarioSchema) +
                           "\", got " + (j.contains("schema") ? j["schema"].dump() : "nothing")});
    }

    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    const std::string mode = j.value("mode", std::string("manet"));
    if (mode == "manet")
      s.mode = Mode::Manet;
    else if (mode == "antnet")
      s.mode = Mode::AntNet;
    else
      throw ScenarioError({"mode: expected manet|antnet, got \"" + mode + "\""});

    s.node_count = j.value("node_count", 25);
    s.horizon = j.value("horizon", 300.0);
    s.warmup_fraction = j.value("warmup_fraction", 0.1);

    if (j.contains("arena")) {
      const auto& a = j["arena"];
      s.arena.width = a.value("width", 500.0);
      s.arena.height = a.value("height", 500.0);
      s.arena.radio_range = a.value("radio_range", 100.0);
    }
    if (j.contains("mobility")) {
      const auto& m = j["mobility"];
      if (m.contains("pause_time")) s.mobility.pause_time = parse_time_or_inf(m["pause_time"]);
      s.mobility.v_min = m.value("v_min", 1.0);
      s.mobility.v_max = m.value("v_max", 10.0);
      s.mobility.tick = m.value("tick", 0.1);
    }
    if (j.contains("positions")) {
      for (const auto& p : j["positions"])
        s.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }

    const std::string protocol = j.value("protocol", std::string("ara"));
    if (protocol == "ara")
      s.protocol = Protocol::Ara;
    else if (protocol == "eara")
      s.protocol = Protocol::Eara;
    else
      throw ScenarioError({"protocol: expected ara|eara, got \"" + protocol + "\""});

    const std::string fant_mode = j.value("fant_mode", std::string("flood"));
    if (fant_mode == "flood")
      s.fant_mode = FantMode::Flood;
    else if (fant_mode == "forward")
      s.fant_mode = FantMode::Forward;
    else
      throw ScenarioError({"fant_mode: expected flood|forward, got \"" + fant_mode + "\""});

    if (j.contains("aco")) {
      const auto& a = j["aco"];
      s.aco.delta_tau = a.value("delta_tau", 0.1);
      s.aco.lambda = a.value("lambda", 0.02);
      s.aco.k = a.value("k", 2.0);
      s.aco.tau_prune = a.value("tau_prune", 1e-6);
    }
    if (j.contains("ara")) {
      const auto& a = j["ara"];
      s.ara.ttl = a.value("ttl", 16);
      s.ara.max_retries = a.value("max_retries", 3);
      s.ara.buffer_cap = a.value("buffer_cap", 64);
      s.ara.buffer_timeout = a.value("buffer_timeout", 2.0);
      s.ara.max_data_hops = a.value("max_data_hops", 32);
      s.ara.bant_cap = a.value("bant_cap", 8);
      s.ara.data_delta_tau = a.value("data_delta_tau", s.aco.delta_tau);
      s.ara.evaporation_tick = a.value("evaporation_tick", 1.0);
      s.ara.time_scale = a.value("time_scale", 1.0);
    } else {
      s.ara.data_delta_tau = s.aco.delta_tau;
    }
    if (j.contains("radio")) {
      const auto& r = j["radio"];
      s.radio.bandwidth_bps = r.value("bandwidth_bps", 1e6);
      s.radio.prop_delay_s = r.value("prop_delay_s", 0.001);
      s.radio.ant_bytes = r.value("ant_bytes", 64);
    }

    if (j.contains("edges")) {
      for (const auto& e : j["edges"]) {
        Edge edge;
        if (e.is_array()) {
          edge.a = e.at(0).get<NodeId>();
          edge.b = e.at(1).get<NodeId>();
        } else {
          edge.a = e.at("a").get<NodeId>();
          edge.b = e.at("b").get<NodeId>();
          edge.bandwidth_bps = e.value("bandwidth_bps", 1e6);
          edge.prop_delay_s = e.value("prop_delay_s", 0.001);
        }
        s.edges.push_back(edge);
      }
    }
    if (j.contains("antnet")) {
      const auto& a = j["antnet"];
      const std::string ant_mode = a.value("ant_mode", std::string("regular"));
      if (ant_mode == "regular")
        s.antnet.ant_mode = AntMode::Regular;
      else if (ant_mode == "flying")
        s.antnet.ant_mode = AntMode::Flying;
      else
        throw ScenarioError({"antnet.ant_mode: expected regular|flying, got \"" + ant_mode + "\""});
      s.antnet.launch_interval = a.value("launch_interval", 1.0);
      s.antnet.alpha = a.value("alpha", 0.3);
      s.antnet.best_fraction = a.value("best_fraction", 0.5);
      s.antnet.reinforcement_w = a.value("reinforcement_w", 0.1);
      s.antnet.ant_bytes = a.value("ant_bytes", 64);
      s.antnet.max_ant_hops = a.value("max_ant_hops", 64);
      s.antnet.evaporation_tick = a.value("evaporation_tick", 1.0);
    }

    if (j.contains("traffic")) {
      const auto& t = j["traffic"];
      if (t.contains("flows"))
        for (const auto& f : t["flows"]) s.traffic.flows.push_back(parse_flow(f));
      if (t.contains("random_pairs")) {
        const auto& r = t["random_pairs"];
        RandomPairs rp;
        rp.count = r.value("count", 8);
        rp.rate_pps = r.value("rate_pps", 4.0);
        rp.packet_bits = r.value("packet_bits", 4096);
        rp.start = r.value("start", 0.0);
        rp.stop = r.value("stop", s.horizon);
        s.traffic.random_pairs = rp;
      }
      s.traffic.poisson = t.value("pattern", std::string("cbr")) == "poisson";
      const std::string pattern = t.value("pattern", std::string("cbr"));
      if (pattern != "cbr" && pattern != "poisson")
        throw ScenarioError({"traffic.pattern: expected cbr|poisson, got \"" + pattern + "\""});
    }

    auto violations = validate(s);
    if (!violations.empty()) throw ScenarioError(std::move(violations));
    return s;
  } catch (const ScenarioError&) {
    throw;
  } catch (const json::exception& e) {
    throw ScenarioError({std::string("json structure error: ") + e.what()});
  }
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  auto bad = [&out](const std::string& msg) { out.push_back(msg); };

  if (s.node_count < 1) bad("node_count: must be >= 1");
  if (!(s.horizon > 0)) bad("horizon: must be > 0");
  if (!(s.warmup_fraction >= 0) || s.warmup_fraction >= 1)
    bad("warmup_fraction: must lie in [0, 1)");

  try {
    acoroute::validate(s.aco);
  } catch (const std::exception& e) {
    bad(e.what());
  }

  if (s.mode == Mode::Manet) {
    if (!(s.arena.width > 0)) bad("arena.width: must be > 0");
    if (!(s.arena.height > 0)) bad("arena.height: must be > 0");
    if (!(s.arena.radio_range > 0)) bad("arena.radio_range: must be > 0");
    if (!(s.mobility.pause_time >= 0)) bad("mobility.pause_time: must be >= 0");
    if (!(s.mobility.v_min > 0)) bad("mobility.v_min: must be > 0");
    if (!(s.mobility.v_max >= s.mobility.v_min)) bad("mobility.v_max: must be >= v_min");
    if (!(s.mobility.tick > 0)) bad("mobility.tick: must be > 0");
    if (!s.positions.empty() &&
        s.positions.size() != static_cast<std::size_t>(s.node_count))
      bad("positions: must list exactly node_count entries");
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
      const auto& p = s.positions[i];
      if (p.x < 0 || p.x > s.arena.width || p.y < 0 || p.y > s.arena.height)
        bad("positions[" + std::to_string(i) + "]: outside arena");
    }
    if (s.ara.ttl < 1) bad("ara.ttl: must be >= 1");
    if (s.ara.max_retries < 0) bad("ara.max_retries: must be >= 0");
    if (s.ara.buffer_cap < 1) bad("ara.buffer_cap: must be >= 1");
    if (!(s.ara.buffer_timeout > 0)) bad("ara.buffer_timeout: must be > 0");
    if (s.ara.max_data_hops < 1) bad("ara.max_data_hops: must be >= 1");
    if (s.ara.bant_cap < 1) bad("ara.bant_cap: must be >= 1");
    if (!(s.ara.data_delta_tau >= 0)) bad("ara.data_delta_tau: must be >= 0");
    if (!(s.ara.evaporation_tick > 0)) bad("ara.evaporation_tick: must be > 0");
    if (!(s.ara.time_scale > 0)) bad("ara.time_scale: must be > 0");
    if (!(s.radio.bandwidth_bps > 0)) bad("radio.bandwidth_bps: must be > 0");
    if (!(s.radio.prop_delay_s >= 0)) bad("radio.prop_delay_s: must be >= 0");
    if (s.radio.ant_bytes < 1) bad("radio.ant_bytes: must be >= 1");
  } else {
    if (s.edges.empty() && s.node_count > 1)
      bad("edges: antnet mode needs an explicit edge list");
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
      const auto& e = s.edges[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (e.a < 0 || e.a >= s.node_count) bad(where + ".a: node id out of range");
      if (e.b < 0 || e.b >= s.node_count) bad(where + ".b: node id out of range");
      if (e.a == e.b) bad(where + ": self loop");
      if (!(e.bandwidth_bps > 0)) bad(where + ".bandwidth_bps: must be > 0");
      if (!(e.prop_delay_s >= 0)) bad(where + ".prop_delay_s: must be >= 0");
      auto key = std::minmax(e.a, e.b);
      if (!seen.insert({key.first, key.second}).second) bad(where + ": duplicate edge");
    }
    if (!(s.antnet.launch_interval > 0)) bad("antnet.launch_interval: must be > 0");
    if (!(s.antnet.alpha > 0) || !(s.antnet.alpha < 1)) bad("antnet.alpha: must lie in (0, 1)");
    if (!(s.antnet.best_fraction > 0) || s.antnet.best_fraction > 1)
      bad("antnet.best_fraction: must lie in (0, 1]");
    if (!(s.antnet.reinforcement_w > 0)) bad("antnet.reinforcement_w: must be > 0");
    if (s.antnet.ant_bytes < 1) bad("antnet.ant_bytes: must be >= 1");
    if (s.antnet.max_ant_hops < 1) bad("antnet.max_ant_hops: must be >= 1");
    if (!(s.antnet.evaporation_tick > 0)) bad("antnet.evaporation_tick: must be > 0");
  }

  if (!s.traffic.flows.empty() && s.traffic.random_pairs)
    bad("traffic: give either flows or random_pairs, not both");
  for (std::size_t i = 0; i < s.traffic.flows.size(); ++i) {
    const auto& f = s.traffic.flows[i];
    const std::string where = "traffic.flows[" + std::to_string(i) + "]";
    if (f.source < 0 || f.source >= s.node_count) bad(where + ".source: node id out of range");
    if (f.destination < 0 || f.destination >= s.node_count)
      bad(where + ".destination: node id out of range");
    if (f.source == f.destination) bad(where + ": source equals destination");
    if (!(f.rate_pps > 0)) bad(where + ".rate_pps: must be > 0");
    if (f.packet_bits <= 0) bad(where + ".packet_bits: must be > 0");
    if (!(f.start >= 0)) bad(where + ".start: must be >= 0");
    if (!(f.stop > f.start)) bad(where + ".stop: must exceed start");
  }
  if (s.traffic.random_pairs) {
    const auto& r = *s.traffic.random_pairs;
    if (r.count < 1) bad("traffic.random_pairs.count: must be >= 1");
    if (s.node_count < 2) bad("traffic.random_pairs: needs node_count >= 2");
    if (!(r.rate_pps > 0)) bad("traffic.random_pairs.rate_pps: must be > 0");
    if (r.packet_bits <= 0) bad("traffic.random_pairs.packet_bits: must be > 0");
    if (!(r.start >= 0)) bad("traffic.random_pairs.start: must be >= 0");
    if (!(r.stop > r.start)) bad("traffic.random_pairs.stop: must exceed start");
  }
  return out;
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["schema"] = kScenarioSchema;
  j["name"] = s.name;
  j["mode"] = to_string(s.mode);
  j["node_count"] = s.node_count;
  j["horizon"] = s.horizon;
  j["warmup_fraction"] = s.warmup_fraction;
  j["aco"] = {{"delta_tau", s.aco.delta_tau},
              {"lambda", s.aco.lambda},
              {"k", s.aco.k},
              {"tau_prune", s.aco.tau_prune}};
  if (s.mode == Mode::Manet) {
    j["arena"] = {{"width", s.arena.width},
                  {"height", s.arena.height},
                  {"radio_range", s.arena.radio_range}};
    j["mobility"] = {{"pause_time", time_or_inf_to_json(s.mobility.pause_time)},
                     {"v_min", s.mobility.v_min},
                     {"v_max", s.mobility.v_max},
                     {"tick", s.mobility.tick}};
    if (!s.positions.empty()) {
      json positions = json::array();
      for (const auto& p : s.positions) positions.push_back({p.x, p.y});
      j["positions"] = positions;
    }
    j["protocol"] = to_string(s.protocol);
    j["fant_mode"] = to_string(s.fant_mode);
    j["ara"] = {{"ttl", s.ara.ttl},
                {"max_retries", s.ara.max_retries},
                {"buffer_cap", s.ara.buffer_cap},
                {"buffer_timeout", s.ara.buffer_timeout},
                {"max_data_hops", s.ara.max_data_hops},
                {"bant_cap", s.ara.bant_cap},
                {"data_delta_tau", s.ara.data_delta_tau},
                {"evaporation_tick", s.ara.evaporation_tick},
                {"time_scale", s.ara.time_scale}};
    j["radio"] = {{"bandwidth_bps", s.radio.bandwidth_bps},
                  {"prop_delay_s", s.radio.prop_delay_s},
                  {"ant_bytes", s.radio.ant_bytes}};
  } else {
    json edges = json::array();
    for (const auto& e : s.edges)
      edges.push_back({{"a", e.a},
                       {"b", e.b},
                       {"bandwidth_bps", e.bandwidth_bps},
                       {"prop_delay_s", e.prop_delay_s}});
    j["edges"] = edges;
    j["antnet"] = {{"ant_mode", to_string(s.antnet.ant_mode)},
                   {"launch_interval", s.antnet.launch_interval},
                   {"alpha", s.antnet.alpha},
                   {"best_fraction", s.antnet.best_fraction},
                   {"reinforcement_w", s.antnet.reinforcement_w},
                   {"ant_bytes", s.antnet.ant_bytes},
                   {"max_ant_hops", s.antnet.max_ant_hops},
                   {"evaporation_tick", s.antnet.evaporation_tick}};
  }
  json traffic;
  if (!s.traffic.flows.empty()) {
    json flows = json::array();
    for (const auto& f : s.traffic.flows)
      flows.push_back({{"source", f.source},
                       {"destination", f.destination},
                       {"rate_pps", f.rate_pps},
                       {"packet_bits", f.packet_bits},
                       {"start", f.start},
                       {"stop", f.stop}});
    traffic["flows"] = flows;
  }
  if (s.traffic.random_pairs) {
    const auto& r = *s.traffic.random_pairs;
    traffic["random_pairs"] = {{"count", r.count},
                               {"rate_pps", r.rate_pps},
                               {"packet_bits", r.packet_bits},
                               {"start", r.start},
                               {"stop", r.stop}};
  }
  traffic["pattern"] = s.traffic.poisson ? "poisson" : "cbr";
  j["traffic"] = traffic;
  return j.dump(2);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open scenario file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

SweepSpec parse_sweep(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("json parse error: ") + e.what()});
  }
  std::vector<std::string> out;
  if (!j.contains("schema") || j["schema"] != kSweepSchema)
    throw ScenarioError({"schema: expected \"" + std::string(kSweepSchema) + "\""});

  SweepSpec spec;
  try {
    if (j.contains("base")) {
      spec.base = parse_scenario(j["base"].dump());
    } else if (j.contains("base_file")) {
      std::string path = j["base_file"].get<std::string>();
      if (!base_dir.empty() && !path.empty() && path[0] != '/')
        path = base_dir + "/" + path;
      spec.base = load_scenario_file(path);
    } else {
      throw ScenarioError({"sweep: needs base or base_file"});
    }
    if (spec.base.mode != Mode::Manet)
      out.push_back("sweep.base: must be a manet scenario (pause-time axis)");

    for (const auto& p : j.at("pause_times")) spec.pause_times.push_back(parse_time_or_inf(p));
    for (const auto& p : j.at("protocols")) {
      const std::string name = p.get<std::string>();
      if (name == "ara")
        spec.protocols.push_back(Protocol::Ara);
      else if (name == "eara")
        spec.protocols.push_back(Protocol::Eara);
      else
        out.push_back("protocols: expected ara|eara, got \"" + name + "\"");
    }
    if (j.contains("fant_modes")) {
      for (const auto& m : j["fant_modes"]) {
        const std::string name = m.get<std::string>();
        if (name == "flood")
          spec.fant_modes.push_back(FantMode::Flood);
        else if (name == "forward")
          spec.fant_modes.push_back(FantMode::Forward);
        else
          out.push_back("fant_modes: expected flood|forward, got \"" + name + "\"");
      }
    } else {
      spec.fant_modes.push_back(spec.base.fant_mode);
    }
    const auto& seeds = j.at("seeds");
    if (seeds.is_array()) {
      for (const auto& v : seeds) spec.seeds.push_back(v.get<std::uint64_t>());
    } else {
      const std::uint64_t start = seeds.at("start").get<std::uint64_t>();
      const std::uint64_t count = seeds.at("count").get<std::uint64_t>();
      for (std::uint64_t i = 0; i < count; ++i) spec.seeds.push_back(start + i);
    }
    spec.jobs = j.value("jobs", 1);
  } catch (const ScenarioError& e) {
    for (const auto& v : e.violations()) out.push_back(v);
  } catch (const json::exception& e) {
    out.push_back(std::string("json structure error: ") + e.what());
  }

  if (spec.pause_times.empty()) out.push_back("pause_times: must be nonempty");
  if (spec.protocols.empty()) out.push_back("protocols: must be nonempty");
  if (spec.fant_modes.empty()) out.push_back("fant_modes: must be nonempty");
  if (spec.seeds.empty()) out.push_back("seeds: must be nonempty");
  if (spec.jobs < 1) out.push_back("jobs: must be >= 1");
  for (double p : spec.pause_times)
    if (!(p >= 0)) out.push_back("pause_times: values must be >= 0");

  if (!out.empty()) throw ScenarioError(std::move(out));
  return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open sweep file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string dir;
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_sweep(buf.str(), dir);
}

}  // namespace acoroute
