#include "mecoff/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mecoff/rng.hpp"

namespace mecoff {

namespace {

using nlohmann::json;

constexpr double kBitsPerKByte = 8.0 * 1024.0;
constexpr double kCyclesPerMcycle = 1e6;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError(field + ": " + what);
}

const json& require(const json& j, const std::string& field, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(field + "." + key, "missing key");
  return *it;
}

double require_number(const json& j, const std::string& field, const char* key) {
  const json& v = require(j, field, key);
  if (!v.is_number()) fail(field + "." + key, "expected a number");
  return v.get<double>();
}

double require_positive(const json& j, const std::string& field, const char* key) {
  const double v = require_number(j, field, key);
  if (!(v > 0.0) || !std::isfinite(v)) fail(field + "." + key, "must be positive and finite");
  return v;
}

std::vector<double> number_row(const json& arr, const std::string& field) {
  if (!arr.is_array()) fail(field, "expected an array");
  std::vector<double> out;
  for (const auto& e : arr) {
    if (!e.is_number()) fail(field, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> require_number_array(const json& j, const std::string& field,
                                         const char* key) {
  return number_row(require(j, field, key), field + "." + key);
}

}  // namespace

double path_loss_gain(const PathLossModel& model, double distance_m) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_loss_gain: distance must be positive");
  return model.antenna_gain *
         std::pow(3e8 / (4.0 * M_PI * model.carrier_hz * distance_m),
                  model.path_loss_exponent);
}

ChannelGains Scenario::channel_gains() const {
  if (explicit_gains) return gains;
  ChannelGains out;
  for (int j = 0; j < graph.num_wds(); ++j) {
    const double h = path_loss_gain(path_loss, distances_m[j]);
    out.uplink.emplace_back(graph.tasks(j) + 1, h);
    out.downlink.emplace_back(graph.tasks(j) + 1, h);
  }
  return out;
}

namespace {

void validate_scenario(const Scenario& s) {
  if (s.format_version != 1) fail("format_version", "unsupported (expected 1)");

  const SystemParams& p = s.params;
  if (!(p.bandwidth_hz > 0) || !(p.noise_power_w > 0) || !(p.kappa > 0) ||
      !(p.p_peak_w > 0) || !(p.f_peak_hz > 0) || !(p.f_edge_hz > 0) ||
      !(p.ap_power_w > 0) || p.edge_cores < 1)
    fail("system", "all parameters must be positive");
  if (!(p.f_edge_hz > p.f_peak_hz))
    fail("system.f_edge_hz", "edge service rate must exceed f_peak_hz");

  validate_graph(s.graph);
  const int nwd = s.graph.num_wds();
  if (nwd < 2) fail("chains", "need at least two devices");
  if (nwd > p.edge_cores)
    fail("chains", "J=" + std::to_string(nwd) + " devices exceed the " +
                       std::to_string(p.edge_cores) + " edge cores");

  if (static_cast<int>(s.weights.beta_t.size()) != nwd)
    fail("weights.beta_t", "expected one entry per device");
  for (int j = 0; j < nwd; ++j) {
    const double b = s.weights.beta_t[j];
    if (!(b >= 0.0) || !(b < 1.0)) fail("weights.beta_t[" + std::to_string(j) + "]",
                                        "must lie in [0, 1)");
  }
  if (!(s.weights.beta_t[s.graph.consumer] > 0.0))
    fail("weights.beta_t[" + std::to_string(s.graph.consumer) + "]",
         "consumer time weight of zero makes the problem trivial (it would "
         "wait forever)");

  if (s.explicit_gains) {
    try {
      validate_dimensions(s.graph, s.gains);
    } catch (const std::invalid_argument& e) {
      fail("channel", e.what());
    }
  } else {
    if (!(s.path_loss.antenna_gain > 0) || !(s.path_loss.carrier_hz > 0) ||
        !(s.path_loss.path_loss_exponent >= 0))
      fail("channel", "path-loss parameters must be positive");
    if (static_cast<int>(s.distances_m.size()) != nwd)
      fail("channel.distances_m", "expected one entry per device");
    for (double d : s.distances_m)
      if (!(d > 0.0)) fail("channel.distances_m", "distances must be positive");
  }

  if (s.randomization) {
    if (!(s.randomization->min_mcycles >= 0) ||
        !(s.randomization->max_mcycles >= s.randomization->min_mcycles))
      fail("workload_randomization", "need 0 <= min_mcycles <= max_mcycles");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(origin + ": not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ScenarioError(origin + ": expected a top-level object");

  Scenario s;
  const json& fv = require(j, origin, "format_version");
  if (!fv.is_number_integer()) fail(origin + ".format_version", "expected an integer");
  s.format_version = fv.get<int>();

  const json& sys = require(j, origin, "system");
  s.params.bandwidth_hz = require_positive(sys, "system", "bandwidth_hz");
  s.params.noise_power_w = require_positive(sys, "system", "noise_power_w");
  s.params.kappa = require_positive(sys, "system", "kappa");
  s.params.p_peak_w = require_positive(sys, "system", "p_peak_w");
  s.params.f_peak_hz = require_positive(sys, "system", "f_peak_hz");
  s.params.f_edge_hz = require_positive(sys, "system", "f_edge_hz");
  s.params.ap_power_w = require_positive(sys, "system", "ap_power_w");
  s.params.edge_cores = static_cast<int>(require_positive(sys, "system", "edge_cores"));

  const json& weights = require(j, origin, "weights");
  s.weights.beta_t = require_number_array(weights, "weights", "beta_t");

  const json& chains = require(j, origin, "chains");
  if (!chains.is_array() || chains.empty()) fail("chains", "expected a non-empty array");
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const std::string field = "chains[" + std::to_string(c) + "]";
    const json& jc = chains[c];
    Chain chain;
    if (jc.contains("workloads_cycles"))
      chain.workload_cycles = require_number_array(jc, field, "workloads_cycles");
    else {
      chain.workload_cycles = require_number_array(jc, field, "workloads_mcycles");
      for (double& l : chain.workload_cycles) l *= kCyclesPerMcycle;
    }
    if (jc.contains("outputs_bits"))
      chain.output_bits = require_number_array(jc, field, "outputs_bits");
    else {
      chain.output_bits = require_number_array(jc, field, "outputs_kbyte");
      for (double& o : chain.output_bits) o *= kBitsPerKByte;
    }
    s.graph.chains.push_back(std::move(chain));
  }

  const json& jcons = require(j, origin, "consumer_wd");
  if (!jcons.is_number_integer()) fail("consumer_wd", "expected an integer (1-based)");
  s.graph.consumer = jcons.get<int>() - 1;
  const json& jk = require(j, origin, "joint_task_index");
  if (!jk.is_number_integer()) fail("joint_task_index", "expected an integer (1-based)");
  s.graph.joint_task = jk.get<int>();

  const json& ch = require(j, origin, "channel");
  const json& model = require(ch, "channel", "model");
  if (model == "free_space") {
    s.explicit_gains = false;
    s.path_loss.antenna_gain = require_positive(ch, "channel", "antenna_gain");
    s.path_loss.carrier_hz = require_positive(ch, "channel", "carrier_hz");
    s.path_loss.path_loss_exponent = require_number(ch, "channel", "path_loss_exponent");
    s.distances_m = require_number_array(ch, "channel", "distances_m");
  } else if (model == "explicit") {
    s.explicit_gains = true;
    const json& ju = require(ch, "channel", "uplink_gains");
    const json& jd = require(ch, "channel", "downlink_gains");
    if (!ju.is_array() || !jd.is_array()) fail("channel", "gain tables must be arrays");
    for (std::size_t c = 0; c < ju.size(); ++c)
      s.gains.uplink.push_back(number_row(ju[c], "channel.uplink_gains[" + std::to_string(c) + "]"));
    for (std::size_t c = 0; c < jd.size(); ++c)
      s.gains.downlink.push_back(number_row(jd[c], "channel.downlink_gains[" + std::to_string(c) + "]"));
  } else {
    fail("channel.model", "expected \"free_space\" or \"explicit\"");
  }

  if (j.contains("workload_randomization")) {
    const json& jr = j["workload_randomization"];
    WorkloadRandomization r;
    r.min_mcycles = require_number(jr, "workload_randomization", "min_mcycles");
    r.max_mcycles = require_number(jr, "workload_randomization", "max_mcycles");
    r.seed = static_cast<std::uint64_t>(require_number(jr, "workload_randomization", "seed"));
    s.randomization = r;
  }
  if (j.contains("io_source")) s.io_source = j["io_source"].get<std::string>();

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string scenario_to_text(const Scenario& s) {
  json j;
  j["format_version"] = s.format_version;
  j["system"] = {{"bandwidth_hz", s.params.bandwidth_hz},
                 {"noise_power_w", s.params.noise_power_w},
                 {"kappa", s.params.kappa},
                 {"p_peak_w", s.params.p_peak_w},
                 {"f_peak_hz", s.params.f_peak_hz},
                 {"f_edge_hz", s.params.f_edge_hz},
                 {"ap_power_w", s.params.ap_power_w},
                 {"edge_cores", s.params.edge_cores}};
  j["weights"] = {{"beta_t", s.weights.beta_t}};
  json chains = json::array();
  for (const Chain& c : s.graph.chains) {
    chains.push_back({{"workloads_cycles", c.workload_cycles},
                      {"outputs_bits", c.output_bits}});
  }
  j["chains"] = std::move(chains);
  j["consumer_wd"] = s.graph.consumer + 1;
  j["joint_task_index"] = s.graph.joint_task;
  if (s.explicit_gains) {
    j["channel"] = {{"model", "explicit"},
                    {"uplink_gains", s.gains.uplink},
                    {"downlink_gains", s.gains.downlink}};
  } else {
    j["channel"] = {{"model", "free_space"},
                    {"antenna_gain", s.path_loss.antenna_gain},
                    {"carrier_hz", s.path_loss.carrier_hz},
                    {"path_loss_exponent", s.path_loss.path_loss_exponent},
                    {"distances_m", s.distances_m}};
  }
  if (s.randomization) {
    j["workload_randomization"] = {{"min_mcycles", s.randomization->min_mcycles},
                                   {"max_mcycles", s.randomization->max_mcycles},
                                   {"seed", s.randomization->seed}};
  }
  if (!s.io_source.empty()) j["io_source"] = s.io_source;
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError(path + ": cannot open for writing");
  out << scenario_to_text(s);
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = scenario_to_text(s);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario randomized_workloads(const Scenario& s, std::uint64_t seed) {
  WorkloadRandomization r = s.randomization.value_or(WorkloadRandomization{});
  Scenario out = s;
  Rng rng(seed);
  for (Chain& c : out.graph.chains)
    for (double& l : c.workload_cycles)
      l = rng.uniform(r.min_mcycles, r.max_mcycles) * kCyclesPerMcycle;
  return out;
}

}  // namespace mecoff
