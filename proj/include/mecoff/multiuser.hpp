#pragma once

#include <vector>

#include "mecoff/offload.hpp"
#include "mecoff/resource.hpp"
#include "mecoff/types.hpp"

namespace mecoff {

// Duals of the J-user inner problem: one multiplier per producer's delivery
// constraint (consumer slot held at zero) and mu for the consumer's own
// readiness; lambda sum plus mu equals the consumer's time weight.
struct MultiDuals {
  std::vector<double> lambda;
  double mu = 0.0;
  int cycles = 0;  // coordinate passes until the residuals settled
  int bisect_iters = 0;
  int refine_iters = 0;
};

struct InnerSolutionMulti {
  Allocation alloc;
  MultiDuals duals;
  EtcResult etc;
};

// Convex inner problem of the J-user system under a fixed decision, solved
// by cyclic coordinate bisection over the producer multipliers. Each
// coordinate problem inherits the two-user monotonicity, so the two-user
// machinery applies per producer. Works for any J >= 1 (with no producers
// the closed forms are immediate).
InnerSolutionMulti solve_inner_multi(const CallGraph& g, const OffloadDecision& a,
                                     const Weights& w, const ChannelGains& gains,
                                     const SystemParams& sys,
                                     const BisectionConfig& cfg = {});

// Waiting-time gap of producer j against the consumer at the given duals.
double wait_gap_multi(const CallGraph& g, int producer, const OffloadDecision& a,
                      const Weights& w, const ChannelGains& gains,
                      const SystemParams& sys, const std::vector<double>& lambda,
                      double mu);

// Multi-user counterparts of the offloading searches.
SearchReport gibbs_sample_multi(const CallGraph& g, const Weights& w,
                                const ChannelGains& gains, const SystemParams& sys,
                                const GibbsConfig& gcfg = {},
                                const BisectionConfig& cfg = {});
SearchReport enumerate_one_climb_multi(const CallGraph& g, const Weights& w,
                                       const ChannelGains& gains, const SystemParams& sys,
                                       const BisectionConfig& cfg = {}, bool dry_run = false);
SearchReport brute_force_multi(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg = {}, int guard_bits = 22,
                               bool force = false, bool dry_run = false);

}  // namespace mecoff
