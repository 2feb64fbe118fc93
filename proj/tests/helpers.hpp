#pragma once

// Shared fixtures for the unit and acceptance suites: random instances in
// the numerical setup's parameter ranges, plus an independently coded cost
// evaluator used as the reference for evaluate_schedule and as the
// objective of the grid-search oracles.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mecoff/channel.hpp"
#include "mecoff/rng.hpp"
#include "mecoff/types.hpp"

namespace mectest {

using namespace mecoff;

struct Instance {
  CallGraph graph;
  Weights weights;
  ChannelGains gains;
  SystemParams sys;
};

inline SystemParams default_params() {
  SystemParams p;
  p.bandwidth_hz = 2e6;
  p.noise_power_w = 1e-10;
  p.kappa = 1e-26;
  p.p_peak_w = 0.1;
  p.f_peak_hz = 1e8;
  p.f_edge_hz = 1e10;
  p.ap_power_w = 1.0;
  p.edge_cores = 8;
  return p;
}

inline ChannelGains gains_from_distances(const CallGraph& g, const std::vector<double>& d) {
  PathLossModel model;
  ChannelGains out;
  for (int j = 0; j < g.num_wds(); ++j) {
    const double h = path_loss_gain(model, d[j]);
    out.uplink.emplace_back(g.tasks(j) + 1, h);
    out.downlink.emplace_back(g.tasks(j) + 1, h);
  }
  return out;
}

// Workloads uniform in [10,200] Mcycles, payloads in [50,500] KByte,
// distances in [5,30] m.
inline Instance random_instance(Rng& rng, const std::vector<int>& tasks_per_wd,
                                int joint_task = -1, int consumer = 1) {
  Instance inst;
  inst.sys = default_params();
  inst.graph.consumer = consumer;
  std::vector<double> dist;
  for (int m : tasks_per_wd) {
    Chain c;
    for (int i = 0; i < m; ++i) c.workload_cycles.push_back(rng.uniform(10.0, 200.0) * 1e6);
    for (int i = 0; i <= m; ++i) c.output_bits.push_back(rng.uniform(50.0, 500.0) * 8192.0);
    inst.graph.chains.push_back(std::move(c));
    dist.push_back(rng.uniform(5.0, 30.0));
    inst.weights.beta_t.push_back(rng.uniform(0.01, 0.9));
  }
  const int n = inst.graph.chains[consumer].tasks();
  inst.graph.joint_task = joint_task > 0 ? joint_task : rng.uniform_int(1, n);
  inst.weights.beta_t[consumer] = rng.uniform(0.1, 0.9);
  inst.gains = gains_from_distances(inst.graph, dist);
  return inst;
}

inline OffloadDecision random_decision(Rng& rng, const CallGraph& g) {
  OffloadDecision a;
  for (const Chain& c : g.chains) {
    std::vector<std::uint8_t> bits(c.tasks());
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.uniform_int(0, 1));
    a.at_edge.push_back(std::move(bits));
  }
  return a;
}

inline OffloadDecision random_one_climb_decision(Rng& rng, const CallGraph& g) {
  OffloadDecision a;
  for (const Chain& c : g.chains) {
    const int m = c.tasks();
    std::vector<std::uint8_t> bits(m, 0);
    if (rng.uniform() < 0.75) {
      const int s = rng.uniform_int(0, m - 1);
      const int e = rng.uniform_int(s, m - 1);
      for (int i = s; i <= e; ++i) bits[i] = 1;
    }
    a.at_edge.push_back(std::move(bits));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Reference cost evaluator. Written off the per-case definitions with the
// gated (rather than expanded) transfer terms and pow-based transmit energy,
// so it shares no computation path with evaluate_schedule.

struct RefResult {
  std::vector<double> energy, delay, wait;
  double eta_total = 0.0;
};

inline double ref_upload_energy(double bits, double tau, double h, const SystemParams& sys) {
  if (bits <= 0.0 || tau <= 0.0) return 0.0;
  if (std::isinf(tau)) return sys.noise_power_w * bits * std::log(2.0) / (sys.bandwidth_hz * h);
  const double p = sys.noise_power_w *
                   (std::pow(2.0, bits / tau / sys.bandwidth_hz) - 1.0) / h;
  return p * tau;
}

inline double ref_download_time(double bits, double gain, const SystemParams& sys) {
  if (bits <= 0.0) return 0.0;
  return bits / (sys.bandwidth_hz *
                 std::log2(1.0 + sys.ap_power_w * gain / sys.noise_power_w));
}

inline RefResult reference_costs(const CallGraph& g, const OffloadDecision& a,
                                 const Allocation& alloc, const ChannelGains& gains,
                                 const Weights& w, const SystemParams& sys) {
  const int nwd = g.num_wds();
  const int cons = g.consumer;
  const int k = g.joint_task;
  const bool joint_at_edge = a.at_edge[cons][k - 1] != 0;

  RefResult r;
  r.energy.assign(nwd, 0.0);
  r.delay.assign(nwd, 0.0);
  r.wait.assign(nwd, 0.0);

  std::vector<std::vector<double>> exec(nwd), up_t(nwd), up_e(nwd), down_t(nwd);
  for (int j = 0; j < nwd; ++j) {
    const Chain& c = g.chains[j];
    const int m = c.tasks();
    exec[j].assign(m + 2, 0.0);
    up_t[j].assign(m + 2, 0.0);
    up_e[j].assign(m + 2, 0.0);
    down_t[j].assign(m + 2, 0.0);
    for (int i = 1; i <= m; ++i) {
      const int here = a.at_edge[j][i - 1];
      const int prev = i > 1 ? a.at_edge[j][i - 2] : 0;
      exec[j][i] = here ? c.workload_cycles[i - 1] / sys.f_edge_hz : alloc.tau_local[j][i - 1];
      if (here == 1 && prev == 0 && c.output_bits[i - 1] > 0.0) {
        up_t[j][i] = alloc.tau_up[j][i - 1];
        up_e[j][i] = ref_upload_energy(c.output_bits[i - 1], up_t[j][i],
                                       gains.uplink[j][i - 1], sys);
      }
      if (prev == 1 && here == 0)
        down_t[j][i] = ref_download_time(c.output_bits[i - 1], gains.downlink[j][i - 1], sys);
    }
    if (a.at_edge[j][m - 1])  // own final result comes back down
      down_t[j][m + 1] = ref_download_time(c.output_bits[m], gains.downlink[j][m], sys);
  }

  // inter-user transfer of each producer's final output (the four cases)
  std::vector<double> relay_up_t(nwd, 0.0), relay_up_e(nwd, 0.0), relay_down_t(nwd, 0.0);
  for (int j = 0; j < nwd; ++j) {
    if (j == cons) continue;
    const Chain& c = g.chains[j];
    const int m = c.tasks();
    const bool final_local = a.at_edge[j][m - 1] == 0;
    if (final_local && c.output_bits[m] > 0.0) {
      relay_up_t[j] = alloc.tau_up[j][m];
      relay_up_e[j] = ref_upload_energy(c.output_bits[m], relay_up_t[j], gains.uplink[j][m], sys);
    }
    if (!joint_at_edge)
      relay_down_t[j] = ref_download_time(c.output_bits[m], gains.downlink[cons][k - 1], sys);
  }

  for (int j = 0; j < nwd; ++j) {
    const Chain& c = g.chains[j];
    const int m = c.tasks();
    double e = relay_up_e[j];
    for (int i = 1; i <= m; ++i) {
      e += up_e[j][i];
      if (!a.at_edge[j][i - 1] && c.workload_cycles[i - 1] > 0.0) {
        const double l = c.workload_cycles[i - 1];
        const double tau = alloc.tau_local[j][i - 1];
        e += sys.kappa * l * l * l / (tau * tau);
      }
    }
    r.energy[j] = e;

    if (j != cons) {
      double t = 0.0;
      for (int i = 1; i <= m; ++i) t += exec[j][i] + up_t[j][i] + down_t[j][i];
      r.wait[j] = t + relay_up_t[j] + relay_down_t[j];
      r.delay[j] = t + down_t[j][m + 1];
    }
  }

  {
    const int m = g.chains[cons].tasks();
    double t = 0.0;
    for (int i = 1; i < k; ++i) t += exec[cons][i] + up_t[cons][i] + down_t[cons][i];
    r.wait[cons] = t + up_t[cons][k] + down_t[cons][k];
    double wait_max = r.wait[cons];
    for (int j = 0; j < nwd; ++j)
      if (j != cons) wait_max = std::max(wait_max, r.wait[j]);
    double tail = 0.0;
    for (int i = k; i <= m; ++i) tail += exec[cons][i];
    for (int i = k + 1; i <= m + 1; ++i) tail += up_t[cons][i] + down_t[cons][i];
    r.delay[cons] = wait_max + tail;
  }

  for (int j = 0; j < nwd; ++j)
    r.eta_total += (1.0 - w.beta_t[j]) * r.energy[j] + w.beta_t[j] * r.delay[j];
  return r;
}

}  // namespace mectest
