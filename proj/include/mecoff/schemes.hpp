#pragma once

#include <string>
#include <vector>

#include "mecoff/multiuser.hpp"
#include "mecoff/offload.hpp"
#include "mecoff/types.hpp"

namespace mecoff {

enum class Method { kOneClimb, kGibbs, kBruteForce };

Method parse_method(const std::string& name);
std::string method_name(Method m);

// One fully solved schedule: decision, allocation, costs and duals. The
// lambda vector has one entry per WD with the consumer slot at zero; for the
// two-user system nu is the producer's multiplier.
struct SolveOutcome {
  OffloadDecision decision;
  Allocation alloc;
  EtcResult etc;
  std::vector<double> lambda;
  double mu = 0.0;
  double nu = 0.0;
  long long evaluations = 0;
};

// Inner solve for a fixed decision, routed through the two-user bisection
// when J = 2 and the coordinate search otherwise.
SolveOutcome solve_fixed(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys, const OffloadDecision& a,
                         const BisectionConfig& cfg = {});

// Jointly optimized decision via the selected search method.
SolveOutcome solve_with_method(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               Method method, const BisectionConfig& cfg = {},
                               const GibbsConfig& gcfg = {}, bool force_brute = false);

// Benchmark schemes: fixed all-edge / all-device decisions with optimized
// allocation, and per-device optimization that ignores the dependency.
SolveOutcome solve_all_offload(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg = {});
SolveOutcome solve_all_local(const CallGraph& g, const Weights& w,
                             const ChannelGains& gains, const SystemParams& sys,
                             const BisectionConfig& cfg = {});

// Each WD minimizes its own cost on its own chain (dependency dropped), then
// the joint timeline is re-evaluated with those decisions and allocations.
// The forwarding upload that independent planning never accounts for is
// re-inserted at peak power. A device with a zero time weight would stretch
// its windows without bound; its coupled cost comes out infinite.
SolveOutcome solve_independent(const CallGraph& g, const Weights& w,
                               const ChannelGains& gains, const SystemParams& sys,
                               const BisectionConfig& cfg = {});

}  // namespace mecoff
