#include <chrono>
#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "polymer/errors.hpp"

namespace polymer::experiments {

namespace fs = std::filesystem;

ReplicateOptions RunContext::opts(const std::string& label) const {
  ReplicateOptions o(workers);
  if (!checkpoint_dir.empty()) o.checkpoint_dir = checkpoint_dir + (label.empty() ? "" : "/" + label);
  return o;
}

std::unique_ptr<std::ofstream> RunContext::csv(const std::string& name) const {
  if (!emit_csv || out_dir.empty()) return nullptr;
  fs::create_directories(out_dir);
  auto f = std::make_unique<std::ofstream>(fs::path(out_dir) / (name + file_suffix + ".csv"));
  if (!*f) throw std::runtime_error("cannot write " + name + ".csv in " + out_dir);
  f->precision(17);
  return f;
}

const std::vector<Experiment>& catalog() {
  static const std::vector<Experiment> cat = {
      {"burke",
       "Burke map fixed point: (U',V',w') has the law of (U,V,w) ~ IG(a+u) x IG(a-u) x IG(2a)",
       {{"alpha_grid", {0.8, 1.5, 3.0}}, {"u_grid", {-0.3, 0.0}}, {"u_alpha_fractions", {0.5}}},
       1000000, run_burke},
      {"one-row-stationarity",
       "one-row stationary grid: increments along down-right paths do not depend on m; "
       "horizontal IG(a-u), vertical IG(a+u)",
       {{"alpha", 1.5}, {"u", 0.4}, {"m_list", {1, 2, 4}}, {"offsets", {1, 3, 6}}},
       200000, run_one_row},
      {"two-row-stationarity",
       "two-row stationary grid: ratio process law independent of m >= 2 and equal to z_{u,v}",
       {{"alpha", 1.5}, {"u", 0.6}, {"v", -0.3}, {"m_list", {2, 3, 5}}, {"offsets", {1, 3, 6}}},
       200000, run_two_row},
      {"permutation-symmetry",
       "law of (Z(m,m),...,Z(m+k,m)) invariant under permutations of alpha_1..alpha_m",
       {{"alpha_circ", 0.7},
        {"alphas", {0.4, 1.1, 1.6, 1.3, 1.3}},
        {"row_m", 3},
        {"max_offset", 2},
        {"permutations", {{3, 2, 1}, {2, 3, 1}}}},
       200000, run_permutation},
      {"zuv-properties",
       "z_{u,v} special cases: u+v=0 and u=v walks, v -> -v symmetry, p/r/a representation, "
       "tail ratio law IG(a+v), a(n) -> 1 + G_{u-v}/G_{2v}",
       {{"alpha", 1.5},
        {"tail_k", 200},
        {"a_limit_n", 400},
        {"tail_tolerance", 0.0},
        {"a_limit_tolerance", 0.0}},
       200000, run_zuv},
      {"lpp-stationarity",
       "half-space geometric/exponential LPP: all four stationary specializations are m-invariant; "
       "exp_one increments Exp(a-u); geometric q-permutation symmetry; log-gamma to exponential limit",
       {{"q", 0.5},
        {"r", 0.6},
        {"s", 0.7},
        {"a", 1.0},
        {"u", 0.4},
        {"v", -0.3},
        {"offsets", {1, 3, 6}},
        {"eps_list", {0.1, 0.03, 0.01}},
        {"limit_samples", 100000},
        {"limit_tolerance", 0.01},
        {"perm_q_circ", 0.6},
        {"perm_qs", {0.4, 0.6, 0.7, 0.5, 0.5}},
        {"perm_row_m", 3},
        {"permutations", {{3, 2, 1}, {2, 3, 1}}}},
       200000, run_lpp},
      {"huv-properties",
       "continuum H_{u,v}: Brownian at u=-v, v -> -v symmetry, Pitman form, drift -v at "
       "infinity, delta-halving stability",
       {{"delta_log2", -10},
        {"xs", {0.5, 1.0, 2.0}},
        {"drift_X", 50.0},
        {"drift_samples", 2000},
        {"drift_delta_log2", -6}},
       200000, run_huv},
      {"she-identities",
       "reflected-walk framework: direct product = chaos series = mild equation; composition "
       "law; kernel normalization; boundary monotonicity",
       {{"instances", 100}, {"max_span", 10}, {"beta", 0.6}},
       0, run_she_identities},
      {"sheet-convergence",
       "scaled beta=0 kernel vs Robin heat kernel; Robin PDE/boundary/mass checks; Gaussian "
       "envelope; mean sheet under random bulk",
       {{"n", 16384},
        {"mu_list", {-0.5, 0.0, 1.0}},
        {"T_list", {0.5, 1.0}},
        {"X_list", {0.0, 0.5, 1.0}},
        {"Y_list", {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}},
        {"kernel_tolerance", 0.02},
        {"envelope_n_list", {256, 1024, 4096}},
        {"mean_check_n", 256},
        {"mean_check_samples", 4000}},
       0, run_sheet},
      {"kpz-scaling",
       "finite-n stationarity of the scaled two-row process: H(T,.) - H(T,0) law independent "
       "of T",
       {{"n", 256},
        {"u", 1.0},
        {"v", -0.5},
        {"T_list", {0.0, 0.5}},
        {"X_list", {0.25, 0.5, 1.0}},
        {"dump_samples", 1000}},
       200000, run_kpz},
      {"matching-identity",
       "tilde z from the two-row octant equals in law the framework partition function with "
       "diagonal initial data",
       {{"alpha", 2.0},
        {"u", 0.7},
        {"v", -0.3},
        {"windows", {{1, 0}, {3, 2}}},
        {"pathwise_fields", 50}},
       200000, run_matching},
      {"moments",
       "second moment expansion of the scaled initial data; bulk and boundary weight moment "
       "expansions",
       {{"second_moment_points",
         {{64, 1.0, -0.5, 0.5}, {256, 1.0, -0.5, 0.5}, {1024, 1.0, -0.5, 0.5},
          {256, 2.0, -1.0, 0.25}, {256, 0.5, -0.5, 1.0}}},
        {"n_grid", {100.0, 10000.0, 1000000.0}},
        {"boundary_u", 1.0},
        {"eighth_moment_n", 10000.0},
        {"eighth_moment_draws", 4000000},
        {"rate_constant", 10.0}},
       1000000, run_moments},
  };
  return cat;
}

const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

json resolve_params(const Experiment& e, const json& user) {
  json out = e.defaults;
  if (user.is_null()) return out;
  if (!user.is_object()) throw ParameterError("params must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!e.defaults.contains(it.key()))
      throw ParameterError("unknown parameter '" + it.key() + "' for experiment " + e.name);
    const auto& d = e.defaults[it.key()];
    bool ok = (d.is_number() && it.value().is_number()) || (d.is_array() && it.value().is_array()) ||
              (d.is_boolean() && it.value().is_boolean()) || (d.is_string() && it.value().is_string());
    if (!ok) throw ParameterError("parameter '" + it.key() + "' has the wrong type");
    out[it.key()] = it.value();
  }
  return out;
}

report::Report run_experiment(const Experiment& e, const json& user_params, const RunOptions& o) {
  if (o.seeds.empty()) throw ParameterError("seed list is empty");
  auto t0 = std::chrono::steady_clock::now();
  report::Report rep;
  rep.experiment = e.name;
  rep.paper_ref = e.claim;
  rep.params = resolve_params(e, user_params);
  rep.params["n_samples"] = o.n_samples ? o.n_samples : e.default_samples;
  rep.seeds = o.seeds;
  for (std::uint64_t seed : o.seeds) {
    RunContext ctx;
    ctx.params = resolve_params(e, user_params);
    ctx.seed = seed;
    ctx.n_samples = o.n_samples;
    ctx.workers = o.workers;
    ctx.out_dir = o.out_dir;
    ctx.emit_csv = o.emit_csv;
    if (o.seeds.size() > 1) ctx.file_suffix = "_seed" + std::to_string(seed);
    if (o.checkpoint && !o.out_dir.empty())
      ctx.checkpoint_dir = (fs::path(o.out_dir) / "checkpoints" / e.name).string();
    for (auto& r : e.run(ctx)) {
      if (o.seeds.size() > 1) r.test = "seed " + std::to_string(seed) + ": " + r.test;
      rep.results.push_back(std::move(r));
    }
  }
  rep.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    if (o.emit_json) {
      std::ofstream f(fs::path(o.out_dir) / "report.json");
      report::write_json(f, rep);
    }
    if (o.emit_csv) {
      std::ofstream f(fs::path(o.out_dir) / "results.csv");
      report::write_results_csv(f, rep);
    }
  }
  return rep;
}

}  // namespace polymer::experiments
