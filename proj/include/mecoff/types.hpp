#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecoff {

// One task of a device chain: required CPU cycles plus input/output payload.
struct TaskSpec {
  double workload_cycles = 0.0;
  double input_bits = 0.0;
  double output_bits = 0.0;
};

// A device's sequential task chain. workload_cycles holds one entry per
// actual task (1..M). output_bits holds M+1 entries: output_bits[0] is the
// payload produced by the auxiliary entry task (i.e. the input of task 1)
// and output_bits[i] is the output of task i. The auxiliary entry and exit
// tasks carry zero workload, always run on the device, and are implicit.
struct Chain {
  std::vector<double> workload_cycles;
  std::vector<double> output_bits;

  int tasks() const { return static_cast<int>(workload_cycles.size()); }
};

// Chains plus the single inter-user edge: every chain except `consumer`
// feeds its final task output into task `joint_task` of the consumer chain.
struct CallGraph {
  std::vector<Chain> chains;
  int consumer = 1;    // 0-based chain index of the consumer device
  int joint_task = 1;  // 1-based task index k within the consumer chain

  int num_wds() const { return static_cast<int>(chains.size()); }
  int tasks(int wd) const { return chains[wd].tasks(); }
  bool is_consumer(int wd) const { return wd == consumer; }

  // Task view with the joint input resolved: the consumer's task k receives
  // its predecessor output plus the final outputs of all other chains.
  TaskSpec task(int wd, int i) const;
};

struct SystemParams {
  double bandwidth_hz = 2e6;     // W, per-device orthogonal channel
  double noise_power_w = 1e-10;  // sigma^2
  double kappa = 1e-26;          // effective switched capacitance
  double p_peak_w = 0.1;
  double f_peak_hz = 1e8;
  double f_edge_hz = 1e10;  // per-core service rate of the edge server
  double ap_power_w = 1.0;  // fixed AP transmit power for downlinks
  int edge_cores = 8;
};

// gains[wd][i-1] applies to task i's transfers, i in 1..tasks(wd)+1. The
// extra slot covers a producer's forwarding upload of its final output and
// the download of a final result computed at the edge.
struct ChannelGains {
  std::vector<std::vector<double>> uplink;
  std::vector<std::vector<double>> downlink;
};

struct Weights {
  std::vector<double> beta_t;  // per-WD time weight; energy weight is 1 - beta_t
  double beta_e(int wd) const { return 1.0 - beta_t[wd]; }
};

// at_edge[wd][i-1] for actual task i. Auxiliary entry/exit tasks are local
// by construction and carry no entry here.
struct OffloadDecision {
  std::vector<std::vector<std::uint8_t>> at_edge;
};

// Time windows chosen by the resource allocation. tau_local[wd][i-1] is the
// execution window of task i when it runs locally; tau_up[wd][i-1] is the
// uplink window of task i, with i up to tasks(wd)+1 -- the last slot is the
// forwarding upload of a producer's final output (used when its last task
// runs locally). Entries of slots that carry no work are zero.
struct Allocation {
  std::vector<std::vector<double>> tau_local;
  std::vector<std::vector<double>> tau_up;
};

struct EtcResult {
  std::vector<double> energy_j;  // E_j, joules
  std::vector<double> delay_j;   // T_j, seconds
  std::vector<double> wait_j;    // producers: time to deliver the joint input;
                                 // consumer: time until its own input of the
                                 // joint task is in place
  std::vector<double> eta_j;     // weighted energy-time cost per WD
  double eta_total = 0.0;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate_graph(const CallGraph& g);
void validate_dimensions(const CallGraph& g, const OffloadDecision& a);
void validate_dimensions(const CallGraph& g, const ChannelGains& gains);
void validate_dimensions(const CallGraph& g, const Allocation& alloc);

}  // namespace mecoff
