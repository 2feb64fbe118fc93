#include "mecoff/offload.hpp"

#include <cmath>
#include <stdexcept>

#include "search_detail.hpp"

namespace mecoff {

bool is_one_climb(const std::vector<std::uint8_t>& a) {
  int climbs = 0;
  std::uint8_t prev = 0;
  for (std::uint8_t v : a) {
    if (v && !prev) ++climbs;
    prev = v;
  }
  return climbs <= 1;
}

long long one_climb_count(int m) {
  if (m < 0) throw std::invalid_argument("one_climb_count: negative chain length");
  return static_cast<long long>(m) * (m + 1) / 2 + 1;
}

std::vector<std::vector<std::uint8_t>> one_climb_decisions(int m) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(static_cast<std::size_t>(one_climb_count(m)));
  out.emplace_back(m, 0);
  for (int s = 0; s < m; ++s) {
    for (int e = s; e < m; ++e) {
      std::vector<std::uint8_t> a(m, 0);
      for (int i = s; i <= e; ++i) a[i] = 1;
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> gibbs_neighborhood(const std::vector<std::uint8_t>& a) {
  if (!is_one_climb(a))
    throw std::invalid_argument("gibbs_neighborhood: current decision violates one-climb");
  std::vector<std::vector<std::uint8_t>> out;
  out.push_back(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::uint8_t> b = a;
    b[i] ^= 1;
    if (is_one_climb(b)) out.push_back(std::move(b));
  }
  return out;
}

std::vector<double> boltzmann_weights(const std::vector<double>& phi, double temperature) {
  if (phi.empty()) throw std::invalid_argument("boltzmann_weights: empty candidate set");
  double lo = phi[0];
  for (double v : phi) lo = std::min(lo, v);
  if (!std::isfinite(lo)) throw SolverError("boltzmann_weights: no finite objective");
  std::vector<double> w(phi.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    w[i] = temperature > 0.0 ? std::exp(-(phi[i] - lo) / temperature)
                             : (phi[i] == lo ? 1.0 : 0.0);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

namespace {

// Inner objective for the two-user searches.
auto two_user_objective(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                        const SystemParams& sys, const BisectionConfig& cfg) {
  return [&g, &w, &gains, &sys, cfg](const OffloadDecision& a) {
    return solve_inner(g, a, w, gains, sys, cfg).etc.eta_total;
  };
}

}  // namespace

SearchReport enumerate_one_climb(const CallGraph& g, const Weights& w,
                                 const ChannelGains& gains, const SystemParams& sys,
                                 const BisectionConfig& cfg, bool dry_run) {
  validate_graph(g);
  return detail::enumerate_engine(g, two_user_objective(g, w, gains, sys, cfg), dry_run);
}

SearchReport brute_force(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                         const SystemParams& sys, const BisectionConfig& cfg,
                         int guard_bits, bool force, bool dry_run) {
  validate_graph(g);
  return detail::brute_engine(g, two_user_objective(g, w, gains, sys, cfg), guard_bits,
                              force, dry_run);
}

SearchReport gibbs_sample(const CallGraph& g, const Weights& w, const ChannelGains& gains,
                          const SystemParams& sys, const GibbsConfig& gcfg,
                          const BisectionConfig& cfg) {
  validate_graph(g);
  return detail::gibbs_engine(g, gcfg, two_user_objective(g, w, gains, sys, cfg));
}

}  // namespace mecoff
