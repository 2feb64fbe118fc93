#pragma once

#include "mecoff/types.hpp"

namespace mecoff {

struct CostPair {
  double time_s = 0.0;
  double energy_j = 0.0;
};

// Achievable uplink rate W*log2(1 + p*h/sigma^2) in bits/s.
double rate_uplink(double p_w, double gain, const SystemParams& sys);

// Received power p*h needed to sustain `rate_bps`: sigma^2*(2^{x/W} - 1).
// Inverse of rate_uplink in the received-power variable.
double required_rx_power(double rate_bps, const SystemParams& sys);

// Local execution of a task within window tau_l; energy kappa*L^3/tau_l^2.
// tau_l below the peak-frequency bound L/f_peak is rejected.
CostPair local_cost(const TaskSpec& task, double tau_l, const SystemParams& sys);

// Uplink of `bits` within window tau_u over a channel of gain `gain`.
// Zero-byte transfers cost nothing by convention. tau_u below the peak-power
// bound is rejected.
CostPair upload_cost(double bits, double tau_u, double gain, const SystemParams& sys);

double edge_time(const TaskSpec& task, const SystemParams& sys);

double download_rate(double gain, const SystemParams& sys);
double download_time(double bits, double gain, const SystemParams& sys);

// Elapsed time until producer `wd`'s final output is available at the
// consumer: chain execution plus, when gated on, the forwarding upload
// (last task local) and the AP relay download (joint task local).
double producer_wait(const CallGraph& g, int wd, const OffloadDecision& a,
                     const Allocation& alloc, const ChannelGains& gains,
                     const SystemParams& sys);

// Elapsed time until the consumer's own predecessor output of the joint
// task is in place (execution of tasks before k plus task k's own-chain
// transfer).
double consumer_wait(const CallGraph& g, const OffloadDecision& a,
                     const Allocation& alloc, const ChannelGains& gains,
                     const SystemParams& sys);

// Full cost semantics of the dependent-chains system: per-WD energy, delay,
// waiting times and the weighted energy-time objective.
EtcResult evaluate_schedule(const CallGraph& g, const OffloadDecision& a,
                            const Allocation& alloc, const ChannelGains& gains,
                            const Weights& w, const SystemParams& sys);

}  // namespace mecoff
