#include "mecoff/schemes.hpp"

#include <cmath>
#include <limits>

namespace mecoff {

Method parse_method(const std::string& name) {
  if (name == "oneclimb") return Method::kOneClimb;
  if (name == "gibbs") return Method::kGibbs;
  if (name == "bruteforce") return Method::kBruteForce;
  throw std::invalid_argument("unknown method \"" + name +
                              "\" (expected oneclimb|gibbs|bruteforce)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kOneClimb: return "oneclimb";
    case Method::kGibbs: return "gibbs";
    case Method::kBruteForce: return "bruteforce";
  }
  return "?";
}

SolveOutcome solve_fixed(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys, const OffloadDecision& a,
                         const BisectionConfig& cfg) {
  SolveOutcome out;
  out.decision = a;
  out.evaluations = 1;
  if (g.num_wds() == 2) {
    InnerSolution sol = solve_inner(g, a, w, gains, sys, cfg);
    out.alloc = std::move(sol.alloc);
    out.etc = std::move(sol.etc);
    out.lambda.assign(2, 0.0);
    out.lambda[g.consumer == 0 ? 1 : 0] = sol.duals.lambda;
    out.mu = sol.duals.mu;
    out.nu = sol.duals.nu;
  } else {
    InnerSolutionMulti sol = solve_inner_multi(g, a, w, gains, sys, cfg);
    out.alloc = std::move(sol.alloc);
    out.etc = std::move(sol.etc);
    out.lambda = std::move(sol.duals.lambda);
    out.mu = sol.duals.mu;
  }
  return out;
}

SolveOutcome solve_with_method(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               Method method, const BisectionConfig& cfg,
                               const GibbsConfig& gcfg, bool force_brute) {
  const bool two_user = g.num_wds() == 2;
  SearchReport rep;
  switch (method) {
    case Method::kOneClimb:
      rep = two_user ? enumerate_one_climb(g, w, gains, sys, cfg)
                     : enumerate_one_climb_multi(g, w, gains, sys, cfg);
      break;
    case Method::kGibbs:
      rep = two_user ? gibbs_sample(g, w, gains, sys, gcfg, cfg)
                     : gibbs_sample_multi(g, w, gains, sys, gcfg, cfg);
      break;
    case Method::kBruteForce:
      rep = two_user ? brute_force(g, w, gains, sys, cfg, 22, force_brute)
                     : brute_force_multi(g, w, gains, sys, cfg, 22, force_brute);
      break;
  }
  SolveOutcome out = solve_fixed(g, w, gains, sys, rep.best_decision, cfg);
  out.evaluations = rep.evaluations;
  return out;
}

namespace {

SolveOutcome solve_uniform_decision(const CallGraph& g, const Weights& w,
                                    const ChannelGains& gains, const SystemParams& sys,
                                    std::uint8_t value, const BisectionConfig& cfg) {
  OffloadDecision a;
  for (const Chain& c : g.chains) a.at_edge.emplace_back(c.tasks(), value);
  return solve_fixed(g, w, gains, sys, a, cfg);
}

}  // namespace

SolveOutcome solve_all_offload(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg) {
  return solve_uniform_decision(g, w, gains, sys, 1, cfg);
}

SolveOutcome solve_all_local(const CallGraph& g, const Weights& w,
                             const ChannelGains& gains, const SystemParams& sys,
                             const BisectionConfig& cfg) {
  return solve_uniform_decision(g, w, gains, sys, 0, cfg);
}

SolveOutcome solve_independent(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg) {
  validate_graph(g);
  const int nwd = g.num_wds();
  SolveOutcome out;
  out.decision.at_edge.resize(nwd);
  out.alloc.tau_local.resize(nwd);
  out.alloc.tau_up.resize(nwd);
  out.lambda.assign(nwd, 0.0);
  out.mu = 0.0;

  for (int j = 0; j < nwd; ++j) {
    const int m = g.tasks(j);
    CallGraph own;
    own.chains = {g.chains[j]};
    own.consumer = 0;
    own.joint_task = 1;
    const Weights wj{{w.beta_t[j]}};
    const ChannelGains gj{{gains.uplink[j]}, {gains.downlink[j]}};

    if (w.beta_t[j] == 0.0) {
      // pure energy minimization: arbitrarily slow local execution
      out.decision.at_edge[j].assign(m, 0);
      out.alloc.tau_local[j].assign(m, std::numeric_limits<double>::infinity());
      out.alloc.tau_up[j].assign(m + 1, 0.0);
      out.evaluations += 1;
    } else {
      const SearchReport rep = enumerate_one_climb_multi(own, wj, gj, sys, cfg);
      const InnerSolutionMulti sol =
          solve_inner_multi(own, rep.best_decision, wj, gj, sys, cfg);
      out.decision.at_edge[j] = rep.best_decision.at_edge[0];
      out.alloc.tau_local[j] = sol.alloc.tau_local[0];
      out.alloc.tau_up[j] = sol.alloc.tau_up[0];
      out.evaluations += rep.evaluations;
    }

    // the forwarding upload exists only because of the dependency this
    // scheme ignores; charge it at peak power
    if (j != g.consumer && !out.decision.at_edge[j][m - 1]) {
      const double bits = g.chains[j].output_bits[m];
      if (bits > 0.0)
        out.alloc.tau_up[j][m] = bits / rate_uplink(sys.p_peak_w, gains.uplink[j][m], sys);
    }
  }

  out.etc = evaluate_schedule(g, out.decision, out.alloc, gains, w, sys);
  return out;
}

}  // namespace mecoff
