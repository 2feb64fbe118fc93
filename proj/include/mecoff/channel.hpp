#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mecoff/types.hpp"

namespace mecoff {

struct PathLossModel {
  double antenna_gain = 4.11;
  double carrier_hz = 915e6;
  double path_loss_exponent = 3.0;
};

// Free-space gain G * (c / (4 pi F_c d))^PL; identical for uplink and
// downlink and for every task of a device.
double path_loss_gain(const PathLossModel& model, double distance_m);

struct WorkloadRandomization {
  double min_mcycles = 10.0;
  double max_mcycles = 200.0;
  std::uint64_t seed = 1;
};

// A fully validated experiment instance in SI units. Scenario files may
// carry KByte/Mcycle quantities; they are converted on ingestion
// (1 KByte = 8*1024 bits, 1 Mcycle = 1e6 cycles).
struct Scenario {
  int format_version = 1;
  CallGraph graph;
  SystemParams params;
  Weights weights;

  bool explicit_gains = false;
  ChannelGains gains;               // set when explicit_gains
  PathLossModel path_loss;          // used otherwise
  std::vector<double> distances_m;  // per WD, used otherwise

  std::optional<WorkloadRandomization> randomization;
  std::string io_source;  // provenance note for the payload sizes

  ChannelGains channel_gains() const;
};

Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);
std::string scenario_to_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// 16-hex-digit digest of the canonical serialized form; lands in every CSV
// row for reproducibility.
std::string scenario_hash(const Scenario& s);

// Copy with workloads redrawn uniformly from the scenario's randomization
// range (falling back to [10, 200] Mcycles when none is configured).
Scenario randomized_workloads(const Scenario& s, std::uint64_t seed);

}  // namespace mecoff
