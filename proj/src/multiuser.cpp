#include "mecoff/multiuser.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "search_detail.hpp"

namespace mecoff {

double wait_gap_multi(const CallGraph& g, int producer, const OffloadDecision& a,
                      const Weights& w, const ChannelGains& gains,
                      const SystemParams& sys, const std::vector<double>& lambda,
                      double mu) {
  const Allocation alloc = allocation_at(g, a, w, gains, sys, lambda, mu);
  return producer_wait(g, producer, a, alloc, gains, sys) -
         consumer_wait(g, a, alloc, gains, sys);
}

// The producers couple only through the consumer's multiplier, so the
// system closes over a single scalar: the equilibrium waiting level W.
// Given W, each producer's minimal multiplier demand lambda_j(W) is a
// one-dimensional bisection of its own chain (Prop. 3.4 monotonicity per
// coordinate), the exact-budget consumer multiplier is
// mu = beta_c - sum lambda_j(W), and the fixed-point residual
// readiness(mu) - W is strictly decreasing in W. Clamped (flat) stretches
// of the delivery curves sit harmlessly inside the bisection, which is
// where cyclic coordinate updates stall.
InnerSolutionMulti solve_inner_multi(const CallGraph& g, const OffloadDecision& a,
                                     const Weights& w, const ChannelGains& gains,
                                     const SystemParams& sys, const BisectionConfig& cfg) {
  validate_graph(g);
  validate_dimensions(g, a);
  validate_dimensions(g, gains);
  const double beta_c = w.beta_t[g.consumer];
  if (!(beta_c > 0.0))
    throw std::invalid_argument("solve_inner_multi: consumer time weight must be positive");
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("solve_inner_multi: epsilon must be positive");

  std::vector<int> producers;
  for (int j = 0; j < g.num_wds(); ++j)
    if (j != g.consumer) producers.push_back(j);

  Allocation scratch;
  for (int j = 0; j < g.num_wds(); ++j) {
    scratch.tau_local.emplace_back(g.tasks(j), 0.0);
    scratch.tau_up.emplace_back(g.tasks(j) + 1, 0.0);
  }
  auto readiness = [&](double mu) {
    detail::fill_chain_windows(g, g.consumer, a, w, gains, sys, 0.0, mu, scratch);
    return consumer_wait(g, a, scratch, gains, sys);
  };
  auto delivery = [&](int j, double lambda_j) {
    detail::fill_chain_windows(g, j, a, w, gains, sys, lambda_j, 0.0, scratch);
    return producer_wait(g, j, a, scratch, gains, sys);
  };

  MultiDuals duals;
  duals.lambda.assign(g.num_wds(), 0.0);
  duals.mu = beta_c;
  const double mu_floor = beta_c * 1e-12;

  // One multiplier transfer: move delta of mass onto slot `to` and off slot
  // `from` (the consumer slot is encoded as -1). The waiting-time gap
  // wait(to) - wait(from) is continuous and nonincreasing in delta -- the
  // clamped stretches of the closed forms make it flat, never discontinuous
  // -- so the exact 1-d line search is a bisection.
  auto wait_of = [&](int slot, double value) {
    return slot < 0 ? readiness(value) : delivery(slot, value);
  };
  auto transfer = [&](int to, int from) {
    const double to_val = to < 0 ? duals.mu : duals.lambda[to];
    const double from_val = from < 0 ? duals.mu : duals.lambda[from];
    const double lo = -to_val;  // give everything of `to` back
    const double hi = from < 0 ? from_val - mu_floor : from_val;
    if (hi <= lo) return;
    auto gap = [&](double delta) {
      return wait_of(to, to_val + delta) - wait_of(from, from_val - delta);
    };
    double delta;
    const double g_lo = gap(lo);
    if (g_lo <= 0.0) {
      delta = lo;  // `to` has no claim at all
    } else if (gap(hi) >= 0.0) {
      delta = hi;  // `from` is drained
    } else {
      const detail::RootOutcome root =
          detail::falling_root(gap, lo, hi, g_lo, 0.5 * cfg.epsilon, cfg.max_iters);
      if (!root.converged)
        throw SolverError("solve_inner_multi: multiplier line search did not converge");
      duals.bisect_iters += root.bisect_iters;
      duals.refine_iters += root.refine_iters;
      delta = root.x;
    }
    if (to < 0) duals.mu += delta; else duals.lambda[to] += delta;
    if (from < 0) duals.mu -= delta; else duals.lambda[from] -= delta;
  };

  // complementarity within the gap tolerance: every claimed producer waits
  // exactly as long as the binding level, unclaimed ones no longer
  auto settled = [&]() {
    const double ready = readiness(duals.mu);
    double level = duals.mu > mu_floor * 2.0 ? ready : 0.0;
    std::vector<double> waits(g.num_wds(), 0.0);
    for (int j : producers) {
      waits[j] = delivery(j, duals.lambda[j]);
      if (duals.lambda[j] > 0.0) level = std::max(level, waits[j]);
    }
    if (duals.mu > mu_floor * 2.0 && level > ready + cfg.epsilon) return false;
    for (int j : producers) {
      const bool ok = duals.lambda[j] > 0.0 ? std::abs(waits[j] - level) < cfg.epsilon
                                            : waits[j] < level + cfg.epsilon;
      if (!ok) return false;
    }
    return true;
  };

  bool done = producers.empty();
  const int max_cycles = std::max(cfg.max_iters, 40);
  for (int cycle = 1; !done && cycle <= max_cycles; ++cycle) {
    duals.cycles = cycle;
    for (std::size_t i = 0; i < producers.size(); ++i) {
      transfer(producers[i], -1);
      for (std::size_t l = 0; l < i; ++l) transfer(producers[i], producers[l]);
    }
    done = settled();
  }
  if (!done) throw SolverError("solve_inner_multi: dual search did not settle");

  {
    double total = 0.0;
    for (int j : producers) total += duals.lambda[j];
    duals.mu = beta_c - total;
  }

  InnerSolutionMulti sol;
  sol.alloc = allocation_at(g, a, w, gains, sys, duals.lambda, duals.mu);
  sol.duals = duals;
  sol.etc = evaluate_schedule(g, a, sol.alloc, gains, w, sys);
  return sol;
}

namespace {

auto multi_objective(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                     const SystemParams& sys, const BisectionConfig& cfg) {
  return [&g, &w, &gains, &sys, cfg](const OffloadDecision& a) {
    return solve_inner_multi(g, a, w, gains, sys, cfg).etc.eta_total;
  };
}

}  // namespace

SearchReport gibbs_sample_multi(const CallGraph& g, const Weights& w,
                                const ChannelGains& gains, const SystemParams& sys,
                                const GibbsConfig& gcfg, const BisectionConfig& cfg) {
  validate_graph(g);
  return detail::gibbs_engine(g, gcfg, multi_objective(g, w, gains, sys, cfg));
}

SearchReport enumerate_one_climb_multi(const CallGraph& g, const Weights& w,
                                       const ChannelGains& gains, const SystemParams& sys,
                                       const BisectionConfig& cfg, bool dry_run) {
  validate_graph(g);
  return detail::enumerate_engine(g, multi_objective(g, w, gains, sys, cfg), dry_run);
}

SearchReport brute_force_multi(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg, int guard_bits, bool force,
                               bool dry_run) {
  validate_graph(g);
  return detail::brute_engine(g, multi_objective(g, w, gains, sys, cfg), guard_bits, force,
                              dry_run);
}

}  // namespace mecoff
