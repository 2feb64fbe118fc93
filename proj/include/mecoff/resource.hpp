#pragma once

#include <functional>
#include <vector>

#include "mecoff/model.hpp"
#include "mecoff/types.hpp"

namespace mecoff {

// Multipliers of the waiting-time constraints in the two-user problem.
// lambda guards the producer's delivery, mu the consumer's own readiness,
// and nu parameterizes the single-constraint reformulation: lambda = nu,
// mu = beta_t(consumer) - nu.
struct DualState {
  double lambda = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  int bisect_iters = 0;
  int refine_iters = 0;
};

struct BisectionConfig {
  double epsilon = 1e-3;  // termination tolerance on the waiting-time gap, seconds
  int max_iters = 100;
};

struct InnerSolution {
  Allocation alloc;
  DualState duals;
  EtcResult etc;
};

// Stationary CPU frequency for a local task whose execution window carries
// Lagrangian time pressure `time_weight`, clamped to f_peak. A zero weight
// means the window is unconstrained and the frequency collapses to zero.
double optimal_frequency_for_weight(double time_weight, double energy_weight,
                                    const SystemParams& sys);

// Stationary uplink transmit power under time pressure `time_weight`:
// P_peak when the channel gain sits below the Lambert-W threshold, the
// interior closed form otherwise, and zero when the weight vanishes.
double optimal_power_for_weight(double time_weight, double energy_weight,
                                double gain, const SystemParams& sys);

// Per-task frequencies/powers for a fixed decision at the given duals.
// Entries of edge tasks (resp. non-transfer slots) are zero.
std::vector<std::vector<double>> optimal_cpu_frequencies(
    const CallGraph& g, const OffloadDecision& a, const Weights& w,
    const DualState& duals, const SystemParams& sys);
std::vector<std::vector<double>> optimal_transmit_powers(
    const CallGraph& g, const OffloadDecision& a, const Weights& w,
    const DualState& duals, const ChannelGains& gains, const SystemParams& sys);

// Closed-form allocation at an arbitrary dual point. lambda_by_wd must have
// one entry per WD (the consumer slot is ignored). Windows of zero-weight
// slots come out infinite; finiteness is guaranteed only at a solver
// optimum.
Allocation allocation_at(const CallGraph& g, const OffloadDecision& a,
                         const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys,
                         const std::vector<double>& lambda_by_wd, double mu);

// Waiting-time gap T^wait_producer - T^wait_consumer of the two-user system
// at the dual point (lambda = nu, mu = beta_t(consumer) - nu). Monotonically
// nonincreasing in nu.
double psi(double nu, const CallGraph& g, const OffloadDecision& a,
           const Weights& w, const ChannelGains& gains, const SystemParams& sys);

// Optimal resource allocation for a fixed two-user decision: closed forms
// plus a bisection on nu. The bisection performs at most
// ceil(log2(beta_t(consumer)/epsilon)) halvings; if the gap tolerance is not
// met by then, a bracketed secant refinement finishes the job.
InnerSolution solve_inner(const CallGraph& g, const OffloadDecision& a,
                          const Weights& w, const ChannelGains& gains,
                          const SystemParams& sys,
                          const BisectionConfig& cfg = {});

namespace detail {

// Closed-form windows of one chain at the given multipliers; the other
// chains' rows are left untouched.
void fill_chain_windows(const CallGraph& g, int wd, const OffloadDecision& a,
                        const Weights& w, const ChannelGains& gains,
                        const SystemParams& sys, double lambda_wd, double mu,
                        Allocation& alloc);

struct RootOutcome {
  double x = 0.0;
  double fx = 0.0;
  int bisect_iters = 0;
  int refine_iters = 0;
  bool converged = false;
  bool at_upper = false;  // no sign change: f stayed nonnegative on [lo, hi)
};

// Root of a nonincreasing function on [lo, hi): |f| < eps at the returned
// point. f(lo) = f_lo must be positive (possibly +inf); f may tend to -inf
// toward hi. Halvings are capped at ceil(log2((hi-lo)/eps)).
RootOutcome falling_root(const std::function<double(double)>& f, double lo,
                         double hi, double f_lo, double eps, int max_refine);

}  // namespace detail

}  // namespace mecoff
