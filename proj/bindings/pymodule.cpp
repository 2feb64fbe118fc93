#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mecoff/channel.hpp"
#include "mecoff/lambertw.hpp"
#include "mecoff/multiuser.hpp"
#include "mecoff/offload.hpp"
#include "mecoff/schemes.hpp"

namespace py = pybind11;
using namespace mecoff;

namespace {

OffloadDecision decision_from_lists(const Scenario& s,
                                    const std::vector<std::vector<int>>& bits) {
  OffloadDecision a;
  for (const auto& chain : bits) {
    std::vector<std::uint8_t> row;
    for (int v : chain) row.push_back(static_cast<std::uint8_t>(v != 0));
    a.at_edge.push_back(std::move(row));
  }
  validate_dimensions(s.graph, a);
  return a;
}

py::dict outcome_to_dict(const SolveOutcome& o) {
  py::dict d;
  std::vector<std::vector<int>> decision;
  for (const auto& chain : o.decision.at_edge)
    decision.emplace_back(chain.begin(), chain.end());
  d["decision"] = decision;
  d["eta_total"] = o.etc.eta_total;
  d["energy"] = o.etc.energy_j;
  d["delay"] = o.etc.delay_j;
  d["wait"] = o.etc.wait_j;
  d["eta"] = o.etc.eta_j;
  d["mu"] = o.mu;
  d["lambda"] = o.lambda;
  d["evaluations"] = o.evaluations;
  return d;
}

BisectionConfig bisection(double epsilon) { return BisectionConfig{epsilon, 100}; }

GibbsConfig gibbs(double alpha, double t0, int max_sweeps, int window, std::uint64_t seed) {
  GibbsConfig g;
  g.cooling_rate = alpha;
  g.initial_temperature = t0;
  g.max_sweeps = max_sweeps;
  g.convergence_window = window;
  g.rng_seed = seed;
  return g;
}

}  // namespace

PYBIND11_MODULE(mecoff, m) {
  m.doc() = "joint task offloading and resource allocation for dependent task chains";

  py::register_exception<ScenarioError>(m, "ScenarioError");
  py::register_exception<SolverError>(m, "SolverError");

  m.def("lambert_w0", &lambert_w0, py::arg("x"),
        "principal branch of the Lambert W function");
  m.def(
      "path_loss_gain",
      [](double d, double antenna_gain, double carrier_hz, double exponent) {
        return path_loss_gain(PathLossModel{antenna_gain, carrier_hz, exponent}, d);
      },
      py::arg("distance_m"), py::arg("antenna_gain") = 4.11,
      py::arg("carrier_hz") = 915e6, py::arg("path_loss_exponent") = 3.0,
      "free-space channel gain");
  m.def(
      "is_one_climb",
      [](const std::vector<int>& bits) {
        std::vector<std::uint8_t> b(bits.begin(), bits.end());
        return is_one_climb(b);
      },
      py::arg("decision"));
  m.def("one_climb_count", &one_climb_count, py::arg("tasks"));
  m.def(
      "gibbs_neighborhood",
      [](const std::vector<int>& bits) {
        std::vector<std::uint8_t> b(bits.begin(), bits.end());
        std::vector<std::vector<int>> out;
        for (const auto& n : gibbs_neighborhood(b)) out.emplace_back(n.begin(), n.end());
        return out;
      },
      py::arg("decision"));

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("num_wds", [](const Scenario& s) { return s.graph.num_wds(); })
      .def_property_readonly("consumer", [](const Scenario& s) { return s.graph.consumer; })
      .def_property_readonly("joint_task", [](const Scenario& s) { return s.graph.joint_task; })
      .def_property_readonly("hash", [](const Scenario& s) { return scenario_hash(s); })
      .def_property_readonly("tasks",
                             [](const Scenario& s) {
                               std::vector<int> t;
                               for (const Chain& c : s.graph.chains) t.push_back(c.tasks());
                               return t;
                             })
      .def("to_text", &scenario_to_text)
      .def(
          "randomized_workloads",
          [](const Scenario& s, std::uint64_t seed) { return randomized_workloads(s, seed); },
          py::arg("seed"))
      .def(
          "solve",
          [](const Scenario& s, const std::string& method, double epsilon, double alpha,
             double t0, int max_sweeps, int window, std::uint64_t seed, bool force) {
            const ChannelGains gains = s.channel_gains();
            const SolveOutcome o = solve_with_method(
                s.graph, s.weights, gains, s.params, parse_method(method), bisection(epsilon),
                gibbs(alpha, t0, max_sweeps, window, seed), force);
            return outcome_to_dict(o);
          },
          py::arg("method") = "oneclimb", py::arg("epsilon") = 1e-3, py::arg("alpha") = 0.9,
          py::arg("t0") = 1.0, py::arg("max_sweeps") = 500, py::arg("window") = 20,
          py::arg("seed") = 1, py::arg("force") = false,
          "jointly optimize the offloading decision and the resource allocation")
      .def(
          "evaluate",
          [](const Scenario& s, const std::vector<std::vector<int>>& decision,
             double epsilon) {
            const ChannelGains gains = s.channel_gains();
            const SolveOutcome o = solve_fixed(s.graph, s.weights, gains, s.params,
                                               decision_from_lists(s, decision),
                                               bisection(epsilon));
            return outcome_to_dict(o);
          },
          py::arg("decision"), py::arg("epsilon") = 1e-3,
          "optimal resource allocation for a fixed offloading decision")
      .def(
          "benchmarks",
          [](const Scenario& s, const std::string& method, double epsilon,
             std::uint64_t seed) {
            const ChannelGains gains = s.channel_gains();
            const BisectionConfig cfg = bisection(epsilon);
            const GibbsConfig gcfg = gibbs(0.9, 1.0, 500, 20, seed);
            py::dict out;
            out["optimal"] = outcome_to_dict(solve_with_method(
                s.graph, s.weights, gains, s.params, parse_method(method), cfg, gcfg));
            out["all_offload"] =
                outcome_to_dict(solve_all_offload(s.graph, s.weights, gains, s.params, cfg));
            out["all_local"] =
                outcome_to_dict(solve_all_local(s.graph, s.weights, gains, s.params, cfg));
            out["independent"] =
                outcome_to_dict(solve_independent(s.graph, s.weights, gains, s.params, cfg));
            return out;
          },
          py::arg("method") = "oneclimb", py::arg("epsilon") = 1e-3, py::arg("seed") = 1,
          "optimal scheme next to the all-offload, all-local and independent baselines")
      .def(
          "gibbs_trace",
          [](const Scenario& s, double alpha, double t0, int max_sweeps, int window,
             std::uint64_t seed, double epsilon) {
            const ChannelGains gains = s.channel_gains();
            const GibbsConfig gcfg = gibbs(alpha, t0, max_sweeps, window, seed);
            const SearchReport rep =
                s.graph.num_wds() == 2
                    ? gibbs_sample(s.graph, s.weights, gains, s.params, gcfg,
                                   bisection(epsilon))
                    : gibbs_sample_multi(s.graph, s.weights, gains, s.params, gcfg,
                                         bisection(epsilon));
            return rep.trace;
          },
          py::arg("alpha") = 0.9, py::arg("t0") = 1.0, py::arg("max_sweeps") = 500,
          py::arg("window") = 20, py::arg("seed") = 1, py::arg("epsilon") = 1e-3,
          "per-sweep best objective of the annealed sampler");

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"),
        py::arg("origin") = "<string>");
}
