#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mecoff/resource.hpp"
#include "mecoff/types.hpp"

namespace mecoff {

struct GibbsConfig {
  double initial_temperature = 1.0;
  double cooling_rate = 0.9;  // T(theta) = cooling_rate * T(theta-1)
  int max_sweeps = 500;
  int convergence_window = 20;  // sweeps with an unimproved best before stopping
  std::uint64_t rng_seed = 1;
};

struct SearchReport {
  OffloadDecision best_decision;
  double best_eta = 0.0;
  long long evaluations = 0;  // inner solves performed (search-space size when dry)
  long long failures = 0;     // decisions skipped on solver failure
  // (iteration, best-so-far objective); one entry per sweep for the sampler,
  // one per improvement for the exhaustive searches
  std::vector<std::pair<long long, double>> trace;
};

// True iff the vector holds at most one contiguous block of edge tasks
// (auxiliary entry/exit tasks are an implicit leading/trailing 0).
bool is_one_climb(const std::vector<std::uint8_t>& a);

// Number of one-climb decisions for a chain of m tasks: m(m+1)/2 + 1.
long long one_climb_count(int m);

// All one-climb decisions of a chain: the all-local vector first, then
// blocks ordered by (start, end).
std::vector<std::vector<std::uint8_t>> one_climb_decisions(int m);

// The sampling set of Algorithm-style neighborhood moves: the vector itself
// plus every single-bit flip that remains one-climb.
std::vector<std::vector<std::uint8_t>> gibbs_neighborhood(const std::vector<std::uint8_t>& a);

// exp(-phi/T) normalized over the candidates; invariant under constant
// shifts of phi, so the minimum is subtracted before exponentiation.
std::vector<double> boltzmann_weights(const std::vector<double>& phi, double temperature);

// Exhaustive search over per-WD one-climb decision combinations (two-user).
// dry_run reports the search-space size without solving anything.
SearchReport enumerate_one_climb(const CallGraph& g, const Weights& w,
                                 const ChannelGains& gains, const SystemParams& sys,
                                 const BisectionConfig& cfg = {}, bool dry_run = false);

// Oracle search over all 2^(M+N) decisions. Refuses more than `guard_bits`
// total tasks unless forced.
SearchReport brute_force(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys, const BisectionConfig& cfg = {},
                         int guard_bits = 22, bool force = false, bool dry_run = false);

// Annealed Gibbs sampling over one-climb neighborhoods (two-user).
SearchReport gibbs_sample(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                          const SystemParams& sys, const GibbsConfig& gcfg = {},
                          const BisectionConfig& cfg = {});

}  // namespace mecoff
