#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mecoff/resource.hpp"
#include "oracle.hpp"

using namespace mecoff;
using namespace mectest;

namespace {

// Appendix-style stationarity residuals, coded off the derivative formulas.
double local_stationarity(double time_weight, double energy_weight, double workload,
                          double tau, const SystemParams& sys) {
  return time_weight -
         2.0 * sys.kappa * energy_weight * std::pow(workload, 3) / std::pow(tau, 3);
}

double uplink_stationarity(double time_weight, double energy_weight, double bits,
                           double tau, double h, const SystemParams& sys) {
  const double x = bits / (sys.bandwidth_hz * tau);
  const double s_over_h = sys.noise_power_w / h;
  return time_weight +
         energy_weight * (s_over_h * std::pow(2.0, x) * (1.0 - x * std::log(2.0)) - s_over_h);
}

}  // namespace

TEST_CASE("closed-form frequency") {
  const SystemParams sys = default_params();
  // heavy time pressure clamps at the peak
  CHECK(optimal_frequency_for_weight(0.5, 0.5, sys) == sys.f_peak_hz);
  CHECK(std::cbrt(0.5 / (2.0 * sys.kappa * 0.5)) == doctest::Approx(3.684e8).epsilon(1e-3));
  CHECK(optimal_frequency_for_weight(0.001, 0.999, sys) ==
        doctest::Approx(3.685e7).epsilon(1e-3));
  CHECK(optimal_frequency_for_weight(0.0, 0.9, sys) == 0.0);
  // monotone in the multiplier
  double prev = 0.0;
  for (double lam = 0.0; lam < 0.02; lam += 0.002) {
    const double f = optimal_frequency_for_weight(0.001 + lam, 0.999, sys);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("closed-form transmit power") {
  const SystemParams sys = default_params();
  CHECK(optimal_power_for_weight(0.0, 0.5, 1e-8, sys) == 0.0);
  // a dreadful channel pins the power at the peak
  CHECK(optimal_power_for_weight(0.5, 0.5, 1e-12, sys) == sys.p_peak_w);

  // interior solutions satisfy the derivative condition to 1e-9
  for (double w : {0.02, 0.1, 0.4}) {
    for (double h : {2e-8, 1e-7, 5e-7}) {
      const double p = optimal_power_for_weight(w, 1.0 - w, h, sys);
      if (p == sys.p_peak_w) continue;
      const double bits = 3e6;
      const double tau = bits / rate_uplink(p, h, sys);
      CHECK(std::abs(uplink_stationarity(w, 1.0 - w, bits, tau, h, sys)) <= 1e-9);
    }
  }
}

TEST_CASE("clamped values sit on the bound with a positive derivative") {
  const SystemParams sys = default_params();
  // frequency clamp
  const double w_clamp = 0.5;
  CHECK(optimal_frequency_for_weight(w_clamp, 0.5, sys) == sys.f_peak_hz);
  const double tau_min = 1e8 / sys.f_peak_hz;
  CHECK(local_stationarity(w_clamp, 0.5, 1e8, tau_min, sys) > 0.0);

  // power clamp: derivative at the peak-rate window must be positive
  const double h = 1e-12;
  CHECK(optimal_power_for_weight(0.5, 0.5, h, sys) == sys.p_peak_w);
  const double bits = 3e6;
  const double tau_peak = bits / rate_uplink(sys.p_peak_w, h, sys);
  CHECK(uplink_stationarity(0.5, 0.5, bits, tau_peak, h, sys) > 0.0);
}

TEST_CASE("frequency and power tables follow the task classes") {
  Rng rng(3);
  Instance inst = random_instance(rng, {2, 3}, 2);
  OffloadDecision a{{{0, 1}, {1, 0, 0}}};
  DualState duals;
  duals.nu = duals.lambda = 0.07;
  duals.mu = inst.weights.beta_t[1] - duals.nu;
  const auto f = optimal_cpu_frequencies(inst.graph, a, inst.weights, duals, inst.sys);
  const auto p =
      optimal_transmit_powers(inst.graph, a, inst.weights, duals, inst.gains, inst.sys);

  CHECK(f[0][0] == optimal_frequency_for_weight(inst.weights.beta_t[0] + duals.lambda,
                                                inst.weights.beta_e(0), inst.sys));
  CHECK(f[0][1] == 0.0);  // edge task has no local frequency
  // consumer: before the joint task the mu class applies, after it beta_t
  CHECK(f[1][1] == optimal_frequency_for_weight(duals.mu, inst.weights.beta_e(1), inst.sys));
  CHECK(f[1][2] == optimal_frequency_for_weight(inst.weights.beta_t[1],
                                                inst.weights.beta_e(1), inst.sys));
  // uplink of WD1 task 2 carries beta+lambda, its forwarding slot is unused
  CHECK(p[0][1] == optimal_power_for_weight(inst.weights.beta_t[0] + duals.lambda,
                                            inst.weights.beta_e(0), inst.gains.uplink[0][1],
                                            inst.sys));
  CHECK(p[0][2] == 0.0);
  // consumer task 1 upload is in the mu class
  CHECK(p[1][0] == optimal_power_for_weight(duals.mu, inst.weights.beta_e(1),
                                            inst.gains.uplink[1][0], inst.sys));
}

TEST_CASE("psi is nonincreasing and dives near the upper end") {
  Rng rng(21);
  for (int rep = 0; rep < 8; ++rep) {
    Instance inst = random_instance(rng, {rng.uniform_int(1, 3), rng.uniform_int(2, 4)});
    if (inst.graph.joint_task < 2) inst.graph.joint_task = 2;
    OffloadDecision a = random_decision(rng, inst.graph);
    const double beta_c = inst.weights.beta_t[1];
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
      const double nu = beta_c * i / 50.0;
      const double v = psi(nu, inst.graph, a, inst.weights, inst.gains, inst.sys);
      if (std::isfinite(prev) && std::isfinite(v))
        CHECK(v <= prev + 1e-9 * (1.0 + std::abs(prev)));
      if (std::isfinite(v)) prev = v;
    }
    CHECK(psi(beta_c * (1.0 - 1e-9), inst.graph, a, inst.weights, inst.gains, inst.sys) < 0.0);
  }
  Instance inst = random_instance(rng, {1, 2});
  OffloadDecision a = random_decision(rng, inst.graph);
  CHECK_THROWS_AS(psi(-0.1, inst.graph, a, inst.weights, inst.gains, inst.sys),
                  std::invalid_argument);
  CHECK_THROWS_AS(psi(inst.weights.beta_t[1], inst.graph, a, inst.weights, inst.gains, inst.sys),
                  std::invalid_argument);
}

TEST_CASE("solve_inner meets the gap tolerance and the dual identity") {
  Rng rng(5);
  const BisectionConfig cfg{1e-3, 100};
  for (int rep = 0; rep < 30; ++rep) {
    Instance inst = random_instance(rng, {rng.uniform_int(1, 3), rng.uniform_int(2, 4)});
    if (inst.graph.joint_task < 2) inst.graph.joint_task = 2;
    OffloadDecision a = random_decision(rng, inst.graph);
    const InnerSolution sol = solve_inner(inst.graph, a, inst.weights, inst.gains, inst.sys, cfg);
    const double beta_c = inst.weights.beta_t[1];

    // dual identity holds exactly
    CHECK(sol.duals.lambda + sol.duals.mu == beta_c);
    // producer delivery never outlasts the consumer's own readiness (Lemma 3.1)
    CHECK(sol.etc.wait_j[0] <= sol.etc.wait_j[1] + cfg.epsilon + 1e-12);
    // complementary slackness
    const double gap = sol.etc.wait_j[0] - sol.etc.wait_j[1];
    CHECK(sol.duals.nu * std::abs(gap) <= beta_c * cfg.epsilon + 1e-12);
    // the halving budget from the tolerance
    const int cap = static_cast<int>(std::ceil(std::log2(beta_c / cfg.epsilon)));
    CHECK(sol.duals.bisect_iters <= cap);
    // equality cases: produce it by forcing the final task local
    if (!a.at_edge[0].back() && sol.duals.nu > 0.0)
      CHECK(std::abs(gap) < cfg.epsilon);
  }
}

TEST_CASE("helper-role device: equality of waits (Lemma 3.2 cases)") {
  Rng rng(17);
  const BisectionConfig cfg{1e-4, 100};
  for (int rep = 0; rep < 6; ++rep) {
    Instance inst = random_instance(rng, {2, 3});
    inst.graph.joint_task = std::max(2, inst.graph.joint_task);

    // case 1: the producer weighs time at zero
    Instance helper = inst;
    helper.weights.beta_t[0] = 0.0;
    OffloadDecision a = random_one_climb_decision(rng, helper.graph);
    InnerSolution sol = solve_inner(helper.graph, a, helper.weights, helper.gains, helper.sys, cfg);
    CHECK(std::abs(sol.etc.wait_j[0] - sol.etc.wait_j[1]) < cfg.epsilon);

    // case 2: the producer's final task stays local
    OffloadDecision b = random_one_climb_decision(rng, inst.graph);
    b.at_edge[0].back() = 0;
    sol = solve_inner(inst.graph, b, inst.weights, inst.gains, inst.sys, cfg);
    CHECK(std::abs(sol.etc.wait_j[0] - sol.etc.wait_j[1]) < cfg.epsilon);
  }
}

TEST_CASE("decoupled instances return a zero multiplier") {
  // consumer with a heavy pre-joint chain and a trivial, fully offloaded
  // producer: the delivery constraint is slack
  Instance inst;
  inst.sys = default_params();
  Chain c1, c2;
  c1.workload_cycles = {1e6};
  c1.output_bits = {8192.0, 8192.0};
  c2.workload_cycles = {2e8, 2e8, 5e7};
  c2.output_bits = {8192.0, 8192.0, 8192.0, 8192.0};
  inst.graph.chains = {c1, c2};
  inst.graph.consumer = 1;
  inst.graph.joint_task = 3;
  inst.weights.beta_t = {0.5, 0.5};
  inst.gains = gains_from_distances(inst.graph, {10.0, 10.0});
  OffloadDecision a{{{1}, {0, 0, 0}}};
  const InnerSolution sol = solve_inner(inst.graph, a, inst.weights, inst.gains, inst.sys, {});
  CHECK(sol.duals.nu == 0.0);
  CHECK(sol.etc.wait_j[0] < sol.etc.wait_j[1]);
}

TEST_CASE("interior windows satisfy the stationarity conditions") {
  Rng rng(29);
  const BisectionConfig cfg{1e-4, 100};
  for (int rep = 0; rep < 12; ++rep) {
    Instance inst = random_instance(rng, {rng.uniform_int(1, 2), rng.uniform_int(2, 3)});
    if (inst.graph.joint_task < 2) inst.graph.joint_task = 2;
    // small weights keep some windows off their bounds
    inst.weights.beta_t[0] = rng.uniform(0.001, 0.05);
    OffloadDecision a = random_decision(rng, inst.graph);
    const InnerSolution sol = solve_inner(inst.graph, a, inst.weights, inst.gains, inst.sys, cfg);
    const int k = inst.graph.joint_task;
    for (int j = 0; j < 2; ++j) {
      const Chain& c = inst.graph.chains[j];
      const double be = inst.weights.beta_e(j);
      for (int i = 1; i <= c.tasks(); ++i) {
        const double wt =
            j == 0 ? inst.weights.beta_t[0] + sol.duals.lambda
                   : (i < k ? sol.duals.mu : inst.weights.beta_t[1]);
        const double tl = sol.alloc.tau_local[j][i - 1];
        if (tl > 0.0) {
          const double bound = c.workload_cycles[i - 1] / inst.sys.f_peak_hz;
          if (tl > bound * (1.0 + 1e-9))
            CHECK(std::abs(local_stationarity(wt, be, c.workload_cycles[i - 1], tl, inst.sys)) <=
                  1e-9);
        }
        const double wu = j == 0 ? inst.weights.beta_t[0] + sol.duals.lambda
                                 : (i <= k ? sol.duals.mu : inst.weights.beta_t[1]);
        const double tu = sol.alloc.tau_up[j][i - 1];
        if (tu > 0.0) {
          const double bound = c.output_bits[i - 1] /
                               rate_uplink(inst.sys.p_peak_w, inst.gains.uplink[j][i - 1], inst.sys);
          if (tu > bound * (1.0 + 1e-9))
            CHECK(std::abs(uplink_stationarity(wu, be, c.output_bits[i - 1], tu,
                                               inst.gains.uplink[j][i - 1], inst.sys)) <= 1e-9);
        }
      }
      if (j != 1) {
        const double tu = sol.alloc.tau_up[j].back();
        if (tu > 0.0) {
          const double bound =
              c.output_bits.back() /
              rate_uplink(inst.sys.p_peak_w, inst.gains.uplink[j].back(), inst.sys);
          if (tu > bound * (1.0 + 1e-9))
            CHECK(std::abs(uplink_stationarity(sol.duals.lambda, be, c.output_bits.back(), tu,
                                               inst.gains.uplink[j].back(), inst.sys)) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("objective is midpoint-convex along random feasible segments") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    Instance inst = random_instance(rng, {2, 2});
    OffloadDecision a = random_decision(rng, inst.graph);
    auto draw_alloc = [&]() {
      Allocation al;
      for (int j = 0; j < 2; ++j) {
        const Chain& c = inst.graph.chains[j];
        std::vector<double> tl(c.tasks(), 0.0), tu(c.tasks() + 1, 0.0);
        for (int i = 1; i <= c.tasks(); ++i) {
          const bool prev = i > 1 && a.at_edge[j][i - 2];
          if (!a.at_edge[j][i - 1])
            tl[i - 1] = c.workload_cycles[i - 1] / inst.sys.f_peak_hz * rng.uniform(1.0, 8.0);
          else if (!prev)
            tu[i - 1] = c.output_bits[i - 1] /
                        rate_uplink(inst.sys.p_peak_w, inst.gains.uplink[j][i - 1], inst.sys) *
                        rng.uniform(1.0, 8.0);
        }
        if (j != inst.graph.consumer && !a.at_edge[j][c.tasks() - 1])
          tu[c.tasks()] = c.output_bits[c.tasks()] /
                          rate_uplink(inst.sys.p_peak_w, inst.gains.uplink[j][c.tasks()],
                                      inst.sys) *
                          rng.uniform(1.0, 8.0);
        al.tau_local.push_back(tl);
        al.tau_up.push_back(tu);
      }
      return al;
    };
    const Allocation x = draw_alloc();
    const Allocation y = draw_alloc();
    Allocation mid = x;
    for (int j = 0; j < 2; ++j) {
      for (std::size_t s = 0; s < mid.tau_local[j].size(); ++s)
        mid.tau_local[j][s] = 0.5 * (x.tau_local[j][s] + y.tau_local[j][s]);
      for (std::size_t s = 0; s < mid.tau_up[j].size(); ++s)
        mid.tau_up[j][s] = 0.5 * (x.tau_up[j][s] + y.tau_up[j][s]);
    }
    const double fx =
        evaluate_schedule(inst.graph, a, x, inst.gains, inst.weights, inst.sys).eta_total;
    const double fy =
        evaluate_schedule(inst.graph, a, y, inst.gains, inst.weights, inst.sys).eta_total;
    const double fm =
        evaluate_schedule(inst.graph, a, mid, inst.gains, inst.weights, inst.sys).eta_total;
    CHECK(fm <= 0.5 * (fx + fy) + 1e-9 * (1.0 + std::abs(fx) + std::abs(fy)));
  }
}

TEST_CASE("solve_inner against the grid oracle (small instances)") {
  Rng rng(41);
  const BisectionConfig cfg{1e-5, 200};
  int done = 0;
  while (done < 4) {
    Instance inst = random_instance(rng, {1, 2});
    OffloadDecision a = random_decision(rng, inst.graph);
    const InnerSolution sol = solve_inner(inst.graph, a, inst.weights, inst.gains, inst.sys, cfg);
    const double grid = oracle_min_inner(inst.graph, a, inst.weights, inst.gains, inst.sys);
    CHECK(sol.etc.eta_total ==
          doctest::Approx(grid).epsilon(1e-3));
    ++done;
  }
}
