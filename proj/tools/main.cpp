// Experiment harness: single solves, benchmark comparisons, parameter sweeps
// and annealing traces, all emitting reproducible CSV.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mecoff/channel.hpp"
#include "mecoff/csv.hpp"
#include "mecoff/multiuser.hpp"
#include "mecoff/rng.hpp"
#include "mecoff/schemes.hpp"

namespace {

using namespace mecoff;

constexpr int kExitSchemaError = 2;
constexpr int kExitSolverError = 3;

struct CommonOpts {
  std::string scenario_path;
  std::string method;  // empty: oneclimb for J=2, gibbs otherwise
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  std::string out_path;
  std::string format = "csv";
  bool force_brute = false;
  // annealing knobs
  double alpha = 0.9;
  double t0 = 1.0;
  int max_sweeps = 500;
  int window = 20;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_method) {
  cmd->add_option("--scenario", o.scenario_path, "scenario file")->required();
  if (with_method)
    cmd->add_option("--method", o.method, "oneclimb|gibbs|bruteforce");
  cmd->add_option("--seed", o.seed, "rng seed");
  cmd->add_option("--epsilon", o.epsilon, "waiting-time gap tolerance (s)");
  cmd->add_option("--out", o.out_path, "write CSV here instead of stdout");
  cmd->add_option("--format", o.format, "output format (csv)")
      ->check(CLI::IsMember({"csv"}));
  cmd->add_option("--alpha", o.alpha, "gibbs cooling rate");
  cmd->add_option("--t0", o.t0, "gibbs initial temperature");
  cmd->add_option("--max-sweeps", o.max_sweeps, "gibbs sweep cap");
  cmd->add_option("--window", o.window, "gibbs convergence window (sweeps)");
  cmd->add_flag("--force", o.force_brute, "lift the brute-force size guard");
}

Method resolve_method(const CommonOpts& o, const Scenario& s) {
  if (!o.method.empty()) return parse_method(o.method);
  return s.graph.num_wds() == 2 ? Method::kOneClimb : Method::kGibbs;
}

GibbsConfig gibbs_config(const CommonOpts& o) {
  GibbsConfig g;
  g.cooling_rate = o.alpha;
  g.initial_temperature = o.t0;
  g.max_sweeps = o.max_sweeps;
  g.convergence_window = o.window;
  g.rng_seed = o.seed;
  return g;
}

std::string decision_string(const OffloadDecision& a) {
  std::string s;
  for (std::size_t j = 0; j < a.at_edge.size(); ++j) {
    if (j) s.push_back('|');
    for (auto v : a.at_edge[j]) s.push_back(v ? '1' : '0');
  }
  return s;
}

std::vector<std::string> result_header(int nwd) {
  std::vector<std::string> h = {"scenario_hash", "seed",   "scheme", "method",
                                "epsilon",       "error",  "evaluations",
                                "eta_total",     "decision", "mu"};
  for (int j = 1; j <= nwd; ++j) h.push_back("lambda_" + std::to_string(j));
  for (const char* base : {"energy_", "time_", "wait_", "eta_"})
    for (int j = 1; j <= nwd; ++j) h.push_back(base + std::to_string(j));
  return h;
}

std::vector<std::string> result_row(const std::string& hash, std::uint64_t seed,
                                    const std::string& scheme, const std::string& method,
                                    double epsilon, const SolveOutcome& o) {
  std::vector<std::string> r = {hash,
                                std::to_string(seed),
                                scheme,
                                method,
                                format_g9(epsilon),
                                "",
                                std::to_string(o.evaluations),
                                format_g9(o.etc.eta_total),
                                decision_string(o.decision),
                                format_g9(o.mu)};
  for (double l : o.lambda) r.push_back(format_g9(l));
  for (double v : o.etc.energy_j) r.push_back(format_g9(v));
  for (double v : o.etc.delay_j) r.push_back(format_g9(v));
  for (double v : o.etc.wait_j) r.push_back(format_g9(v));
  for (double v : o.etc.eta_j) r.push_back(format_g9(v));
  return r;
}

std::vector<std::string> error_row(const std::string& hash, std::uint64_t seed,
                                   const std::string& scheme, const std::string& method,
                                   double epsilon, int columns, const std::string& message) {
  std::vector<std::string> r(columns);
  r[0] = hash;
  r[1] = std::to_string(seed);
  r[2] = scheme;
  r[3] = method;
  r[4] = format_g9(epsilon);
  std::string msg = message;
  for (char& c : msg)
    if (c == ',' || c == '\n') c = ';';
  r[5] = msg;
  return r;
}

void emit(const CommonOpts& o, const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream text;
  text << join_csv(header) << "\n";
  for (const auto& r : rows) text << join_csv(r) << "\n";
  if (o.out_path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw std::runtime_error(o.out_path + ": cannot open for writing");
    f << text.str();
  }
}

void print_solution(const Scenario& s, const std::string& scheme, const SolveOutcome& o) {
  std::printf("%s: eta_total = %s\n", scheme.c_str(), format_g9(o.etc.eta_total).c_str());
  for (int j = 0; j < s.graph.num_wds(); ++j) {
    std::string bits;
    for (auto v : o.decision.at_edge[j]) bits.push_back(v ? '1' : '0');
    std::printf("  wd%d: decision=%s E=%s J  T=%s s  wait=%s s  eta=%s\n", j + 1,
                bits.c_str(), format_g9(o.etc.energy_j[j]).c_str(),
                format_g9(o.etc.delay_j[j]).c_str(), format_g9(o.etc.wait_j[j]).c_str(),
                format_g9(o.etc.eta_j[j]).c_str());
  }
  std::printf("  duals: mu=%s lambda=[", format_g9(o.mu).c_str());
  for (std::size_t j = 0; j < o.lambda.size(); ++j)
    std::printf("%s%s", j ? " " : "", format_g9(o.lambda[j]).c_str());
  std::printf("]\n  evaluations: %lld\n", o.evaluations);
}

SolveOutcome run_scheme(const Scenario& s, const ChannelGains& gains,
                        const std::string& scheme, Method method,
                        const BisectionConfig& cfg, const GibbsConfig& gcfg,
                        bool force_brute) {
  if (scheme == "optimal")
    return solve_with_method(s.graph, s.weights, gains, s.params, method, cfg, gcfg,
                             force_brute);
  if (scheme == "all-offload") return solve_all_offload(s.graph, s.weights, gains, s.params, cfg);
  if (scheme == "all-local") return solve_all_local(s.graph, s.weights, gains, s.params, cfg);
  if (scheme == "independent")
    return solve_independent(s.graph, s.weights, gains, s.params, cfg);
  throw std::invalid_argument("unknown scheme " + scheme);
}

int cmd_validate(const CommonOpts& o) {
  const Scenario s = load_scenario(o.scenario_path);
  std::printf("ok: %d device(s), consumer wd%d, joint task %d, hash %s\n",
              s.graph.num_wds(), s.graph.consumer + 1, s.graph.joint_task,
              scenario_hash(s).c_str());
  return 0;
}

int cmd_solve(const CommonOpts& o) {
  const Scenario s = load_scenario(o.scenario_path);
  const ChannelGains gains = s.channel_gains();
  const Method method = resolve_method(o, s);
  const BisectionConfig cfg{o.epsilon, 100};
  const SolveOutcome sol = solve_with_method(s.graph, s.weights, gains, s.params, method,
                                             cfg, gibbs_config(o), o.force_brute);
  print_solution(s, "solution (" + method_name(method) + ")", sol);
  const std::string hash = scenario_hash(s);
  emit(o, result_header(s.graph.num_wds()),
       {result_row(hash, o.seed, "optimal", method_name(method), o.epsilon, sol)});
  return 0;
}

int cmd_benchmarks(const CommonOpts& o) {
  const Scenario s = load_scenario(o.scenario_path);
  const ChannelGains gains = s.channel_gains();
  const Method method = resolve_method(o, s);
  const BisectionConfig cfg{o.epsilon, 100};
  const std::string hash = scenario_hash(s);
  std::vector<std::vector<std::string>> rows;
  for (const char* scheme : {"optimal", "all-offload", "all-local", "independent"}) {
    const SolveOutcome sol =
        run_scheme(s, gains, scheme, method, cfg, gibbs_config(o), o.force_brute);
    print_solution(s, scheme, sol);
    rows.push_back(result_row(hash, o.seed, scheme, method_name(method), o.epsilon, sol));
  }
  emit(o, result_header(s.graph.num_wds()), rows);
  return 0;
}

struct SweepOpts {
  std::string variable;
  std::vector<double> grid;
  int repetitions = 1;
};

Scenario apply_point(const Scenario& base, const std::string& var, double value,
                     std::uint64_t seed, int rep, int reps) {
  Scenario s = base;
  if (var == "J") {
    // the multi-user family: first J chains, distances redrawn per repetition
    // from U[10,30] m so grid points stay paired within a repetition
    const int j = static_cast<int>(value);
    if (j < 2 || j > base.graph.num_wds())
      throw ScenarioError("sweep J: value " + std::to_string(j) + " out of range");
    if (base.graph.consumer >= j)
      throw ScenarioError("sweep J: consumer chain would be dropped");
    s.graph.chains.resize(j);
    s.weights.beta_t.resize(j);
    if (!s.explicit_gains) {
      s.distances_m.resize(j);
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(rep)));
      for (double& d : s.distances_m) d = rng.uniform(10.0, 30.0);
    }
    return s;
  }
  // with repetitions, workloads are redrawn once per repetition and shared
  // across the grid
  if (s.randomization && reps > 1)
    s = randomized_workloads(s, mix_seed(seed, static_cast<std::uint64_t>(rep)));
  if (var == "d1" || var == "d2") {
    if (s.explicit_gains) throw ScenarioError("sweep " + var + ": scenario has explicit gains");
    s.distances_m[var == "d1" ? 0 : 1] = value;
  } else if (var == "beta1_t") {
    s.weights.beta_t[0] = value;
  } else if (var == "beta2_t") {
    s.weights.beta_t[s.graph.consumer] = value;
  } else if (var == "k") {
    s.graph.joint_task = static_cast<int>(value);
  } else if (var != "alpha") {
    throw ScenarioError("sweep variable must be one of d1|d2|beta1_t|beta2_t|k|J|alpha");
  }
  return s;
}

int cmd_sweep(const CommonOpts& o, const SweepOpts& sw) {
  Scenario base = load_scenario(o.scenario_path);
  if (sw.grid.empty()) throw ScenarioError("sweep: empty grid");
  if (sw.repetitions < 1) throw ScenarioError("sweep: repetitions must be >= 1");
  const std::string hash = scenario_hash(base);
  const BisectionConfig cfg{o.epsilon, 100};
  const char* schemes[] = {"optimal", "all-offload", "all-local", "independent"};

  struct Job {
    std::size_t point;
    int rep;
    double value;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < sw.grid.size(); ++p)
    for (int r = 0; r < sw.repetitions; ++r) jobs.push_back({p, r, sw.grid[p]});

  const int columns = static_cast<int>(result_header(base.graph.num_wds()).size()) + 3;
  std::vector<std::vector<std::vector<std::string>>> blocks(jobs.size());
  auto run_job = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    std::vector<std::vector<std::string>> rows;
    Method method = Method::kOneClimb;
    try {
      const Scenario s =
          apply_point(base, sw.variable, job.value, o.seed, job.rep, sw.repetitions);
      const ChannelGains gains = s.channel_gains();
      CommonOpts po = o;
      if (sw.variable == "alpha") {
        po.alpha = job.value;
        po.method = "gibbs";
      }
      method = resolve_method(po, s);
      GibbsConfig gcfg = gibbs_config(po);
      gcfg.rng_seed = mix_seed(o.seed, 1000003ULL * job.point + job.rep);
      for (const char* scheme : schemes) {
        std::vector<std::string> row;
        try {
          const SolveOutcome sol =
              run_scheme(s, gains, scheme, method, cfg, gcfg, o.force_brute);
          row = result_row(hash, o.seed, scheme, method_name(method), o.epsilon, sol);
        } catch (const SolverError& e) {
          row = error_row(hash, o.seed, scheme, method_name(method), o.epsilon,
                          columns - 3, e.what());
        }
        row.insert(row.begin() + 2, {sw.variable, format_g9(job.value),
                                     std::to_string(job.rep)});
        rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      std::vector<std::string> row =
          error_row(hash, o.seed, "", method_name(method), o.epsilon, columns - 3, e.what());
      row.insert(row.begin() + 2, {sw.variable, format_g9(job.value), std::to_string(job.rep)});
      rows.push_back(std::move(row));
    }
    blocks[idx] = std::move(rows);
  };

  // grid points run in a small worker pool; output order stays deterministic
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(jobs.size()));
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  for (unsigned wkr = 0; wkr < workers; ++wkr) {
    futs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
        run_job(i);
    }));
  }
  for (auto& f : futs) f.get();

  std::vector<std::string> header = result_header(base.graph.num_wds());
  header.insert(header.begin() + 2, {"variable", "value", "rep"});
  std::vector<std::vector<std::string>> rows;
  for (auto& b : blocks)
    for (auto& r : b) rows.push_back(std::move(r));
  emit(o, header, rows);
  return 0;
}

int cmd_gibbs_trace(const CommonOpts& o, const std::vector<double>& alphas) {
  const Scenario s = load_scenario(o.scenario_path);
  const ChannelGains gains = s.channel_gains();
  const BisectionConfig cfg{o.epsilon, 100};
  const std::string hash = scenario_hash(s);
  std::vector<std::vector<std::string>> rows;
  for (double alpha : alphas) {
    GibbsConfig gcfg = gibbs_config(o);
    gcfg.cooling_rate = alpha;
    const SearchReport rep =
        s.graph.num_wds() == 2
            ? gibbs_sample(s.graph, s.weights, gains, s.params, gcfg, cfg)
            : gibbs_sample_multi(s.graph, s.weights, gains, s.params, gcfg, cfg);
    for (const auto& [iter, eta] : rep.trace)
      rows.push_back({hash, std::to_string(o.seed), format_g9(alpha),
                      std::to_string(iter), format_g9(eta)});
  }
  emit(o, {"scenario_hash", "seed", "alpha", "iteration", "eta"}, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint task offloading and resource allocation for dependent task chains"};
  app.require_subcommand(1);

  CommonOpts opts;
  SweepOpts sweep;
  std::vector<double> alphas = {0.5, 0.8, 0.95};

  CLI::App* validate = app.add_subcommand("validate", "schema-check a scenario file");
  validate->add_option("--scenario", opts.scenario_path, "scenario file")->required();

  CLI::App* solve = app.add_subcommand("solve", "solve one scenario");
  add_common(solve, opts, true);

  CLI::App* bench = app.add_subcommand("benchmarks", "optimal vs benchmark schemes");
  add_common(bench, opts, true);

  CLI::App* sw = app.add_subcommand("sweep", "parameter sweep with benchmark rows");
  add_common(sw, opts, true);
  sw->add_option("--variable", sweep.variable, "d1|d2|beta1_t|beta2_t|k|J|alpha")->required();
  sw->add_option("--grid", sweep.grid, "swept values")->required()->delimiter(',');
  sw->add_option("--reps", sweep.repetitions, "repetitions per grid point");

  CLI::App* trace = app.add_subcommand("gibbs-trace", "per-iteration objective per cooling rate");
  add_common(trace, opts, false);
  trace->add_option("--alphas", alphas, "cooling rates")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opts);
    if (solve->parsed()) return cmd_solve(opts);
    if (bench->parsed()) return cmd_benchmarks(opts);
    if (sw->parsed()) return cmd_sweep(opts, sweep);
    if (trace->parsed()) return cmd_gibbs_trace(opts, alphas);
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitSchemaError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
