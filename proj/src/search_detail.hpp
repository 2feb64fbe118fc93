#pragma once

// Search engines shared by the two-user and multi-user entry points. The
// objective callback solves the inner problem for a fixed decision and
// returns the total weighted cost.

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "mecoff/offload.hpp"
#include "mecoff/rng.hpp"
#include "mecoff/types.hpp"

namespace mecoff::detail {

inline std::string decision_key(const OffloadDecision& a) {
  std::string key;
  for (const auto& chain : a.at_edge) {
    key.append(chain.begin(), chain.end());
    key.push_back('\x02');
  }
  return key;
}

template <class Objective>
SearchReport enumerate_engine(const CallGraph& g, Objective&& eta_of, bool dry_run) {
  std::vector<std::vector<std::vector<std::uint8_t>>> options;
  long long total = 1;
  for (const Chain& c : g.chains) {
    options.push_back(one_climb_decisions(c.tasks()));
    total *= static_cast<long long>(options.back().size());
  }

  SearchReport rep;
  rep.evaluations = total;
  rep.best_eta = std::numeric_limits<double>::quiet_NaN();
  if (dry_run) return rep;

  OffloadDecision a;
  a.at_edge.resize(g.num_wds());
  std::vector<std::size_t> idx(g.num_wds(), 0);
  rep.best_eta = std::numeric_limits<double>::infinity();
  for (long long n = 0; n < total; ++n) {
    for (int j = 0; j < g.num_wds(); ++j) a.at_edge[j] = options[j][idx[j]];
    try {
      const double eta = eta_of(a);
      if (eta < rep.best_eta) {
        rep.best_eta = eta;
        rep.best_decision = a;
        rep.trace.emplace_back(n, eta);
      }
    } catch (const SolverError&) {
      ++rep.failures;
    }
    for (int j = g.num_wds() - 1; j >= 0; --j) {
      if (++idx[j] < options[j].size()) break;
      idx[j] = 0;
    }
  }
  if (rep.failures == total) throw SolverError("enumeration: every decision failed");
  return rep;
}

template <class Objective>
SearchReport brute_engine(const CallGraph& g, Objective&& eta_of, int guard_bits,
                          bool force, bool dry_run) {
  int bits = 0;
  for (const Chain& c : g.chains) bits += c.tasks();
  if (bits > 62) throw std::invalid_argument("brute_force: more than 62 tasks");

  SearchReport rep;
  rep.evaluations = 1LL << bits;
  rep.best_eta = std::numeric_limits<double>::quiet_NaN();
  if (dry_run) return rep;
  if (bits > guard_bits && !force)
    throw std::invalid_argument("brute_force: 2^" + std::to_string(bits) +
                                " decisions exceeds the guard; pass force=true");

  OffloadDecision a;
  a.at_edge.resize(g.num_wds());
  for (int j = 0; j < g.num_wds(); ++j) a.at_edge[j].assign(g.tasks(j), 0);
  rep.best_eta = std::numeric_limits<double>::infinity();
  for (long long mask = 0; mask < rep.evaluations; ++mask) {
    long long m = mask;
    for (int j = 0; j < g.num_wds(); ++j) {
      for (int i = 0; i < g.tasks(j); ++i) {
        a.at_edge[j][i] = static_cast<std::uint8_t>(m & 1);
        m >>= 1;
      }
    }
    try {
      const double eta = eta_of(a);
      if (eta < rep.best_eta) {
        rep.best_eta = eta;
        rep.best_decision = a;
        rep.trace.emplace_back(mask, eta);
      }
    } catch (const SolverError&) {
      ++rep.failures;
    }
  }
  if (rep.failures == rep.evaluations) throw SolverError("brute_force: every decision failed");
  return rep;
}

template <class Objective>
SearchReport gibbs_engine(const CallGraph& g, const GibbsConfig& gcfg, Objective&& eta_of) {
  if (!(gcfg.cooling_rate > 0.0 && gcfg.cooling_rate < 1.0))
    throw std::invalid_argument("gibbs: cooling rate must lie in (0,1)");
  if (!(gcfg.initial_temperature > 0.0))
    throw std::invalid_argument("gibbs: initial temperature must be positive");

  SearchReport rep;
  std::unordered_map<std::string, double> cache;
  auto phi = [&](const OffloadDecision& a) {
    const std::string key = decision_key(a);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double eta = eta_of(a);
    ++rep.evaluations;
    cache.emplace(key, eta);
    return eta;
  };

  OffloadDecision a;
  a.at_edge.resize(g.num_wds());
  for (int j = 0; j < g.num_wds(); ++j) a.at_edge[j].assign(g.tasks(j), 0);

  Rng rng(gcfg.rng_seed);
  double temperature = gcfg.initial_temperature;
  rep.best_eta = phi(a);
  rep.best_decision = a;
  rep.trace.emplace_back(0, rep.best_eta);

  int stable = 0;
  for (int sweep = 1; sweep <= gcfg.max_sweeps; ++sweep) {
    const double best_before = rep.best_eta;
    for (int j = 0; j < g.num_wds(); ++j) {
      const auto cands = gibbs_neighborhood(a.at_edge[j]);
      std::vector<double> phis(cands.size());
      OffloadDecision probe = a;
      for (std::size_t c = 0; c < cands.size(); ++c) {
        probe.at_edge[j] = cands[c];
        phis[c] = phi(probe);
      }
      const std::vector<double> prob = boltzmann_weights(phis, temperature);
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t pick = prob.size() - 1;
      for (std::size_t c = 0; c < prob.size(); ++c) {
        acc += prob[c];
        if (u < acc) {
          pick = c;
          break;
        }
      }
      a.at_edge[j] = cands[pick];
      if (phis[pick] < rep.best_eta) {
        rep.best_eta = phis[pick];
        rep.best_decision = a;
      }
    }
    rep.trace.emplace_back(sweep, rep.best_eta);
    stable = rep.best_eta < best_before - 1e-9 ? 0 : stable + 1;
    if (stable >= gcfg.convergence_window) break;
    temperature *= gcfg.cooling_rate;
  }
  return rep;
}

}  // namespace mecoff::detail
