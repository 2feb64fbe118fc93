#include "mecoff/resource.hpp"

#include <cmath>
#include <limits>

#include "mecoff/lambertw.hpp"

namespace mecoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lagrangian time pressure on the execution window of a local task.
double local_weight(const CallGraph& g, int wd, int i, const Weights& w,
                    double lambda_wd, double mu) {
  if (wd != g.consumer) return w.beta_t[wd] + lambda_wd;
  return i < g.joint_task ? mu : w.beta_t[wd];
}

// Lagrangian time pressure on the uplink window of task i (1..M+1). The
// forwarding upload of a producer's final output is timed only through the
// consumer's waiting, hence bare lambda.
double uplink_weight(const CallGraph& g, int wd, int i, const Weights& w,
                     double lambda_wd, double mu) {
  if (wd != g.consumer) return i <= g.tasks(wd) ? w.beta_t[wd] + lambda_wd : lambda_wd;
  return i <= g.joint_task ? mu : w.beta_t[wd];
}

}  // namespace

double optimal_frequency_for_weight(double time_weight, double energy_weight,
                                    const SystemParams& sys) {
  if (time_weight <= 0.0) return 0.0;
  const double f = std::cbrt(time_weight / (2.0 * sys.kappa * energy_weight));
  return std::min(f, sys.f_peak_hz);
}

double optimal_power_for_weight(double time_weight, double energy_weight,
                                double gain, const SystemParams& sys) {
  if (time_weight <= 0.0) return 0.0;
  const double sigma2 = sys.noise_power_w;
  const double a = 1.0 + time_weight / (energy_weight * sys.p_peak_w);
  const double neg_w = -lambert_w0(-a * std::exp(-a));
  const double threshold =
      neg_w > 0.0 ? sigma2 / sys.p_peak_w * (a / neg_w - 1.0) : kInf;
  if (gain < threshold) return sys.p_peak_w;
  const double b = gain * time_weight / (energy_weight * sigma2) - 1.0;
  const double z = 1.0 + lambert_w0(b * std::exp(-1.0));
  const double p = sigma2 / gain * std::expm1(z);
  return std::min(p, sys.p_peak_w);
}

std::vector<std::vector<double>> optimal_cpu_frequencies(
    const CallGraph& g, const OffloadDecision& a, const Weights& w,
    const DualState& duals, const SystemParams& sys) {
  validate_dimensions(g, a);
  std::vector<std::vector<double>> f(g.num_wds());
  for (int j = 0; j < g.num_wds(); ++j) {
    f[j].assign(g.tasks(j), 0.0);
    for (int i = 1; i <= g.tasks(j); ++i) {
      if (a.at_edge[j][i - 1]) continue;
      f[j][i - 1] = optimal_frequency_for_weight(
          local_weight(g, j, i, w, duals.lambda, duals.mu), w.beta_e(j), sys);
    }
  }
  return f;
}

std::vector<std::vector<double>> optimal_transmit_powers(
    const CallGraph& g, const OffloadDecision& a, const Weights& w,
    const DualState& duals, const ChannelGains& gains, const SystemParams& sys) {
  validate_dimensions(g, a);
  validate_dimensions(g, gains);
  std::vector<std::vector<double>> p(g.num_wds());
  for (int j = 0; j < g.num_wds(); ++j) {
    const int m = g.tasks(j);
    p[j].assign(m + 1, 0.0);
    for (int i = 1; i <= m; ++i) {
      const bool here = a.at_edge[j][i - 1];
      const bool prev = i > 1 && a.at_edge[j][i - 2];
      if (!here || prev) continue;  // power matters only on actual uplinks
      p[j][i - 1] = optimal_power_for_weight(uplink_weight(g, j, i, w, duals.lambda, duals.mu),
                                             w.beta_e(j), gains.uplink[j][i - 1], sys);
    }
    if (j != g.consumer && !a.at_edge[j][m - 1]) {
      p[j][m] = optimal_power_for_weight(uplink_weight(g, j, m + 1, w, duals.lambda, duals.mu),
                                         w.beta_e(j), gains.uplink[j][m], sys);
    }
  }
  return p;
}

namespace detail {

void fill_chain_windows(const CallGraph& g, int wd, const OffloadDecision& a,
                        const Weights& w, const ChannelGains& gains,
                        const SystemParams& sys, double lambda_wd, double mu,
                        Allocation& alloc) {
  const Chain& c = g.chains[wd];
  const int m = c.tasks();

  auto uplink_window = [&](int i) {
    const double bits = c.output_bits[i - 1];
    if (bits == 0.0) return 0.0;
    const double p = optimal_power_for_weight(uplink_weight(g, wd, i, w, lambda_wd, mu),
                                              w.beta_e(wd), gains.uplink[wd][i - 1], sys);
    if (p == 0.0) return kInf;
    return bits / rate_uplink(p, gains.uplink[wd][i - 1], sys);
  };

  for (int i = 1; i <= m; ++i) {
    const bool here = a.at_edge[wd][i - 1];
    const bool prev = i > 1 && a.at_edge[wd][i - 2];
    alloc.tau_local[wd][i - 1] = 0.0;
    alloc.tau_up[wd][i - 1] = 0.0;
    if (!here) {
      const double l = c.workload_cycles[i - 1];
      if (l > 0.0) {
        const double f = optimal_frequency_for_weight(
            local_weight(g, wd, i, w, lambda_wd, mu), w.beta_e(wd), sys);
        alloc.tau_local[wd][i - 1] = f > 0.0 ? l / f : kInf;
      }
    } else if (!prev) {
      alloc.tau_up[wd][i - 1] = uplink_window(i);
    }
  }
  alloc.tau_up[wd][m] =
      (wd != g.consumer && !a.at_edge[wd][m - 1]) ? uplink_window(m + 1) : 0.0;
}

}  // namespace detail

Allocation allocation_at(const CallGraph& g, const OffloadDecision& a,
                         const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys,
                         const std::vector<double>& lambda_by_wd, double mu) {
  Allocation alloc;
  alloc.tau_local.resize(g.num_wds());
  alloc.tau_up.resize(g.num_wds());
  for (int j = 0; j < g.num_wds(); ++j) {
    alloc.tau_local[j].assign(g.tasks(j), 0.0);
    alloc.tau_up[j].assign(g.tasks(j) + 1, 0.0);
    detail::fill_chain_windows(g, j, a, w, gains, sys, lambda_by_wd[j], mu, alloc);
  }
  return alloc;
}

namespace {

// T^wait of producer `j` minus the consumer's, at the given dual point.
double wait_gap(const CallGraph& g, int j, const OffloadDecision& a, const Weights& w,
                const ChannelGains& gains, const SystemParams& sys,
                const std::vector<double>& lambda, double mu) {
  const Allocation alloc = allocation_at(g, a, w, gains, sys, lambda, mu);
  return producer_wait(g, j, a, alloc, gains, sys) -
         consumer_wait(g, a, alloc, gains, sys);
}

int producer_of_two(const CallGraph& g) {
  if (g.num_wds() != 2)
    throw std::invalid_argument("two-user path requires exactly 2 chains; "
                                "use solve_inner_multi");
  return g.consumer == 0 ? 1 : 0;
}

}  // namespace

double psi(double nu, const CallGraph& g, const OffloadDecision& a, const Weights& w,
           const ChannelGains& gains, const SystemParams& sys) {
  const int producer = producer_of_two(g);
  const double beta_c = w.beta_t[g.consumer];
  if (nu < 0.0 || nu >= beta_c)
    throw std::invalid_argument("psi: nu must lie in [0, beta_t(consumer))");
  std::vector<double> lambda(2, 0.0);
  lambda[producer] = nu;
  return wait_gap(g, producer, a, w, gains, sys, lambda, beta_c - nu);
}

namespace detail {

RootOutcome falling_root(const std::function<double(double)>& f, double lo, double hi,
                         double f_lo, double eps, int max_refine) {
  RootOutcome out;
  double a = lo, fa = f_lo;
  double b = hi, fb = -kInf;  // not evaluated; f(hi) may be undefined
  bool fb_known = false;

  int cap = 0;
  if (hi - lo > eps) cap = static_cast<int>(std::ceil(std::log2((hi - lo) / eps)));

  for (int it = 0; it < cap; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    ++out.bisect_iters;
    if (std::abs(fm) < eps) {
      out.x = mid;
      out.fx = fm;
      out.converged = true;
      return out;
    }
    if (fm > 0.0) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
      fb_known = true;
    }
  }

  if (!fb_known) {
    // Never saw a negative value: probe just inside the upper end. If the
    // gap is still nonnegative there, it has no root in [lo, hi) at all
    // (a degenerate instance whose consumer waiting is insensitive to mu).
    const double probe = hi - (hi - lo) * 1e-9;
    const double fp = f(probe);
    ++out.refine_iters;
    if (fp >= 0.0 || std::abs(fp) < eps) {
      out.x = probe;
      out.fx = fp;
      out.converged = true;
      out.at_upper = fp >= eps;
      return out;
    }
    b = probe;
    fb = fp;
  }

  // Bracketed secant (Illinois) polish of the final bisection cell.
  int side = 0;
  for (int it = 0; it < max_refine; ++it) {
    double c;
    if (std::isfinite(fa) && std::isfinite(fb)) {
      c = (a * fb - b * fa) / (fb - fa);
      if (!std::isfinite(c) || c <= a || c >= b) c = 0.5 * (a + b);
    } else {
      c = 0.5 * (a + b);
    }
    const double fc = f(c);
    ++out.refine_iters;
    if (std::abs(fc) < eps) {
      out.x = c;
      out.fx = fc;
      out.converged = true;
      return out;
    }
    if (fc > 0.0) {
      a = c;
      fa = fc;
      if (side == 1 && std::isfinite(fb)) fb *= 0.5;
      side = 1;
    } else {
      b = c;
      fb = fc;
      if (side == -1 && std::isfinite(fa)) fa *= 0.5;
      side = -1;
    }
  }
  out.x = 0.5 * (a + b);
  out.fx = f(out.x);
  out.converged = std::abs(out.fx) < eps;
  return out;
}

}  // namespace detail

InnerSolution solve_inner(const CallGraph& g, const OffloadDecision& a, const Weights& w,
                          const ChannelGains& gains, const SystemParams& sys,
                          const BisectionConfig& cfg) {
  validate_graph(g);
  validate_dimensions(g, a);
  validate_dimensions(g, gains);
  const int producer = producer_of_two(g);
  const double beta_c = w.beta_t[g.consumer];
  if (!(beta_c > 0.0))
    throw std::invalid_argument("solve_inner: consumer time weight must be positive");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("solve_inner: epsilon must be positive");

  std::vector<double> lambda(2, 0.0);
  auto gap_at = [&](double nu) {
    lambda[producer] = nu;
    return wait_gap(g, producer, a, w, gains, sys, lambda, beta_c - nu);
  };

  DualState duals;
  const double gap0 = gap_at(0.0);
  if (gap0 <= 0.0) {
    duals.nu = 0.0;  // delivery constraint slack; the two problems decouple
  } else {
    const detail::RootOutcome root =
        detail::falling_root(gap_at, 0.0, beta_c, gap0, cfg.epsilon, cfg.max_iters);
    if (!root.converged)
      throw SolverError("solve_inner: bisection did not reach the gap tolerance");
    duals.nu = root.x;
    duals.bisect_iters = root.bisect_iters;
    duals.refine_iters = root.refine_iters;
  }
  duals.lambda = duals.nu;
  duals.mu = beta_c - duals.nu;

  lambda[producer] = duals.lambda;
  InnerSolution sol;
  sol.alloc = allocation_at(g, a, w, gains, sys, lambda, duals.mu);
  sol.duals = duals;
  sol.etc = evaluate_schedule(g, a, sol.alloc, gains, w, sys);
  return sol;
}

}  // namespace mecoff
