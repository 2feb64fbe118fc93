#include "mecoff/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mecoff {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// bound checks tolerate a relative rounding slack; solver output sits exactly
// on the clamped bounds.
constexpr double kBoundSlack = 1.0 - 1e-9;

}  // namespace

TaskSpec CallGraph::task(int wd, int i) const {
  const Chain& c = chains[wd];
  TaskSpec t;
  t.workload_cycles = c.workload_cycles[i - 1];
  t.output_bits = c.output_bits[i];
  t.input_bits = c.output_bits[i - 1];
  if (wd == consumer && i == joint_task) {
    for (int j = 0; j < num_wds(); ++j) {
      if (j == consumer) continue;
      t.input_bits += chains[j].output_bits.back();
    }
  }
  return t;
}

void validate_graph(const CallGraph& g) {
  if (g.chains.empty()) throw ScenarioError("chains: empty call graph");
  if (g.consumer < 0 || g.consumer >= g.num_wds())
    throw ScenarioError("consumer: index out of range");
  for (int j = 0; j < g.num_wds(); ++j) {
    const Chain& c = g.chains[j];
    if (c.tasks() < 1)
      throw ScenarioError("chains[" + std::to_string(j) + "]: needs at least one task");
    if (static_cast<int>(c.output_bits.size()) != c.tasks() + 1)
      throw ScenarioError("chains[" + std::to_string(j) +
                          "].output_bits: expected M+1 entries");
    for (double l : c.workload_cycles)
      if (!(l >= 0.0) || !std::isfinite(l))
        throw ScenarioError("chains[" + std::to_string(j) + "].workload_cycles: negative");
    for (double o : c.output_bits)
      if (!(o >= 0.0) || !std::isfinite(o))
        throw ScenarioError("chains[" + std::to_string(j) + "].output_bits: negative");
  }
  if (g.joint_task < 1 || g.joint_task > g.chains[g.consumer].tasks())
    throw ScenarioError("joint_task_index: must address an actual task of the consumer");
}

void validate_dimensions(const CallGraph& g, const OffloadDecision& a) {
  if (static_cast<int>(a.at_edge.size()) != g.num_wds())
    throw std::invalid_argument("decision: chain count mismatch");
  for (int j = 0; j < g.num_wds(); ++j)
    if (static_cast<int>(a.at_edge[j].size()) != g.tasks(j))
      throw std::invalid_argument("decision: length mismatch on wd " + std::to_string(j + 1));
}

void validate_dimensions(const CallGraph& g, const ChannelGains& gains) {
  if (static_cast<int>(gains.uplink.size()) != g.num_wds() ||
      static_cast<int>(gains.downlink.size()) != g.num_wds())
    throw std::invalid_argument("gains: chain count mismatch");
  for (int j = 0; j < g.num_wds(); ++j) {
    if (static_cast<int>(gains.uplink[j].size()) != g.tasks(j) + 1 ||
        static_cast<int>(gains.downlink[j].size()) != g.tasks(j) + 1)
      throw std::invalid_argument("gains: expected M+1 entries on wd " + std::to_string(j + 1));
    for (double h : gains.uplink[j])
      if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("gains: uplink gain must be positive and finite");
    for (double gdn : gains.downlink[j])
      if (!(gdn > 0.0) || !std::isfinite(gdn))
        throw std::invalid_argument("gains: downlink gain must be positive and finite");
  }
}

void validate_dimensions(const CallGraph& g, const Allocation& alloc) {
  if (static_cast<int>(alloc.tau_local.size()) != g.num_wds() ||
      static_cast<int>(alloc.tau_up.size()) != g.num_wds())
    throw std::invalid_argument("allocation: chain count mismatch");
  for (int j = 0; j < g.num_wds(); ++j) {
    if (static_cast<int>(alloc.tau_local[j].size()) != g.tasks(j) ||
        static_cast<int>(alloc.tau_up[j].size()) != g.tasks(j) + 1)
      throw std::invalid_argument("allocation: length mismatch on wd " + std::to_string(j + 1));
  }
}

double rate_uplink(double p_w, double gain, const SystemParams& sys) {
  return sys.bandwidth_hz * std::log2(1.0 + p_w * gain / sys.noise_power_w);
}

double required_rx_power(double rate_bps, const SystemParams& sys) {
  return sys.noise_power_w * std::expm1(rate_bps / sys.bandwidth_hz * kLn2);
}

CostPair local_cost(const TaskSpec& task, double tau_l, const SystemParams& sys) {
  const double l = task.workload_cycles;
  if (l == 0.0) return {tau_l, 0.0};
  if (tau_l < l / sys.f_peak_hz * kBoundSlack)
    throw std::domain_error("local_cost: window below the peak-frequency bound");
  return {tau_l, sys.kappa * l * l * l / (tau_l * tau_l)};
}

CostPair upload_cost(double bits, double tau_u, double gain, const SystemParams& sys) {
  if (bits == 0.0) return {0.0, 0.0};
  if (tau_u < bits / rate_uplink(sys.p_peak_w, gain, sys) * kBoundSlack)
    throw std::domain_error("upload_cost: window below the peak-power bound");
  if (std::isinf(tau_u))  // vanishing-power limit of the perspective function
    return {tau_u, sys.noise_power_w * bits * kLn2 / (sys.bandwidth_hz * gain)};
  return {tau_u, tau_u / gain * required_rx_power(bits / tau_u, sys)};
}

double edge_time(const TaskSpec& task, const SystemParams& sys) {
  return task.workload_cycles / sys.f_edge_hz;
}

double download_rate(double gain, const SystemParams& sys) {
  return sys.bandwidth_hz * std::log2(1.0 + sys.ap_power_w * gain / sys.noise_power_w);
}

double download_time(double bits, double gain, const SystemParams& sys) {
  if (bits == 0.0) return 0.0;
  return bits / download_rate(gain, sys);
}

namespace {

// Per-chain transfer terms of task i (1..M+1, auxiliaries local): an uplink
// happens when execution moves to the edge, a downlink when it moves back.
struct Hop {
  double up = 0.0;
  double down = 0.0;
};

Hop hop(const CallGraph& g, int wd, int i, const OffloadDecision& a,
        const Allocation& alloc, const ChannelGains& gains, const SystemParams& sys) {
  const Chain& c = g.chains[wd];
  const int m = c.tasks();
  const bool here = i <= m && a.at_edge[wd][i - 1];
  const bool prev = i > 1 && a.at_edge[wd][i - 2];
  Hop h;
  if (here && !prev) h.up = c.output_bits[i - 1] == 0.0 ? 0.0 : alloc.tau_up[wd][i - 1];
  if (prev && !here) h.down = download_time(c.output_bits[i - 1], gains.downlink[wd][i - 1], sys);
  return h;
}

double exec_time(const CallGraph& g, int wd, int i, const OffloadDecision& a,
                 const Allocation& alloc, const SystemParams& sys) {
  if (a.at_edge[wd][i - 1]) return edge_time(g.task(wd, i), sys);
  return alloc.tau_local[wd][i - 1];
}

}  // namespace

double producer_wait(const CallGraph& g, int wd, const OffloadDecision& a,
                     const Allocation& alloc, const ChannelGains& gains,
                     const SystemParams& sys) {
  if (wd == g.consumer) throw std::invalid_argument("producer_wait: wd is the consumer");
  const Chain& c = g.chains[wd];
  const int m = c.tasks();
  double t = 0.0;
  for (int i = 1; i <= m; ++i) {
    const Hop h = hop(g, wd, i, a, alloc, gains, sys);
    t += exec_time(g, wd, i, a, alloc, sys) + h.up + h.down;
  }
  const double final_bits = c.output_bits[m];
  if (!a.at_edge[wd][m - 1] && final_bits > 0.0) t += alloc.tau_up[wd][m];
  if (!a.at_edge[g.consumer][g.joint_task - 1])
    t += download_time(final_bits, gains.downlink[g.consumer][g.joint_task - 1], sys);
  return t;
}

double consumer_wait(const CallGraph& g, const OffloadDecision& a,
                     const Allocation& alloc, const ChannelGains& gains,
                     const SystemParams& sys) {
  const int wd = g.consumer;
  const int k = g.joint_task;
  double t = 0.0;
  for (int i = 1; i < k; ++i) {
    const Hop h = hop(g, wd, i, a, alloc, gains, sys);
    t += exec_time(g, wd, i, a, alloc, sys) + h.up + h.down;
  }
  const Hop hk = hop(g, wd, k, a, alloc, gains, sys);
  return t + hk.up + hk.down;
}

EtcResult evaluate_schedule(const CallGraph& g, const OffloadDecision& a,
                            const Allocation& alloc, const ChannelGains& gains,
                            const Weights& w, const SystemParams& sys) {
  validate_graph(g);
  validate_dimensions(g, a);
  validate_dimensions(g, gains);
  validate_dimensions(g, alloc);
  if (static_cast<int>(w.beta_t.size()) != g.num_wds())
    throw std::invalid_argument("weights: chain count mismatch");

  const int nwd = g.num_wds();
  EtcResult r;
  r.energy_j.assign(nwd, 0.0);
  r.delay_j.assign(nwd, 0.0);
  r.wait_j.assign(nwd, 0.0);
  r.eta_j.assign(nwd, 0.0);

  for (int j = 0; j < nwd; ++j) {
    const Chain& c = g.chains[j];
    const int m = c.tasks();
    double energy = 0.0;
    for (int i = 1; i <= m; ++i) {
      const bool here = a.at_edge[j][i - 1];
      const bool prev = i > 1 && a.at_edge[j][i - 2];
      if (!here) {
        energy += local_cost(g.task(j, i), alloc.tau_local[j][i - 1], sys).energy_j;
      } else if (!prev) {
        energy += upload_cost(c.output_bits[i - 1], alloc.tau_up[j][i - 1],
                              gains.uplink[j][i - 1], sys)
                      .energy_j;
      }
    }
    // producers that finish locally spend extra energy forwarding the result
    if (j != g.consumer && !a.at_edge[j][m - 1]) {
      energy += upload_cost(c.output_bits[m], alloc.tau_up[j][m], gains.uplink[j][m], sys)
                    .energy_j;
    }
    r.energy_j[j] = energy;
  }

  double wait_max = 0.0;
  for (int j = 0; j < nwd; ++j) {
    r.wait_j[j] = j == g.consumer ? consumer_wait(g, a, alloc, gains, sys)
                                  : producer_wait(g, j, a, alloc, gains, sys);
    wait_max = std::max(wait_max, r.wait_j[j]);
  }

  for (int j = 0; j < nwd; ++j) {
    const int m = g.tasks(j);
    if (j != g.consumer) {
      double t = 0.0;
      for (int i = 1; i <= m; ++i) {
        const Hop h = hop(g, j, i, a, alloc, gains, sys);
        t += exec_time(g, j, i, a, alloc, sys) + h.up + h.down;
      }
      t += hop(g, j, m + 1, a, alloc, gains, sys).down;  // fetch own final result
      r.delay_j[j] = t;
    } else {
      const int k = g.joint_task;
      double t = wait_max;
      for (int i = k; i <= m; ++i) t += exec_time(g, j, i, a, alloc, sys);
      for (int i = k + 1; i <= m + 1; ++i) {
        const Hop h = hop(g, j, i, a, alloc, gains, sys);
        t += h.up + h.down;
      }
      r.delay_j[j] = t;
    }
  }

  for (int j = 0; j < nwd; ++j) {
    // a zero weight excludes its term even against an unbounded window
    const double e_term = w.beta_e(j) == 0.0 ? 0.0 : w.beta_e(j) * r.energy_j[j];
    const double t_term = w.beta_t[j] == 0.0 ? 0.0 : w.beta_t[j] * r.delay_j[j];
    r.eta_j[j] = e_term + t_term;
    r.eta_total += r.eta_j[j];
  }
  return r;
}

}  // namespace mecoff
