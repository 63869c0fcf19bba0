#include <algorithm>
#include <cmath>
#include <string>

#include "common.hpp"
#include "polymer/errors.hpp"
#include "polymer/lattice.hpp"
#include "polymer/lpp.hpp"
#include "polymer/stationary.hpp"

namespace polymer::experiments {

namespace {
std::string point(double a, double u) { return "alpha=" + fmt_g(a) + ",u=" + fmt_g(u); }

template <class T>
std::vector<T> vec(const json& j) {
  return j.get<std::vector<T>>();
}

// log Z(m+k, m) - log Z(m, m) for k in offsets
void ratio_process(const lattice::PartitionGrid& g, int m, const std::vector<int>& offsets,
                   double* out) {
  for (std::size_t i = 0; i < offsets.size(); ++i)
    out[i] = g.log_z(m + offsets[i], m) - g.log_z(m, m);
}

// m-invariance: pairwise two-sample KS between the per-m tables, offset by offset
void pairwise_m(std::vector<NamedKs>& out, const std::string& prefix, const std::vector<int>& ms,
                const std::vector<std::vector<double>>& tables, std::size_t width,
                const std::vector<int>& offsets, std::uint64_t seed) {
  for (std::size_t a = 0; a < ms.size(); ++a)
    for (std::size_t b = a + 1; b < ms.size(); ++b)
      for (std::size_t k = 0; k < offsets.size(); ++k)
        out.push_back(two_sample(prefix + " m=" + std::to_string(ms[a]) + " vs m=" +
                                     std::to_string(ms[b]) + " k=" + std::to_string(offsets[k]),
                                 column(tables[a], width, k), column(tables[b], width, k), seed));
}
}  // namespace

Records run_burke(const RunContext& ctx) {
  const auto& p = ctx.params;
  std::vector<std::pair<double, double>> grid;
  for (double a : vec<double>(p["alpha_grid"])) {
    for (double u : vec<double>(p["u_grid"])) grid.emplace_back(a, u);
    for (double f : vec<double>(p["u_alpha_fractions"])) grid.emplace_back(a, f * a);
  }
  for (auto [a, u] : grid)
    if (!(u > -a && u < a)) throw ParameterError("burke: need u in (-alpha, alpha) at " + point(a, u));
  const std::size_t N = ctx.samples(1000000);

  Records recs;
  auto b = lattice::burke_step(2.0, 1.0, 0.5);
  double err = std::max({std::fabs(b.U - 1.5), std::fabs(b.V - 0.75), std::fabs(b.w - 2.0 / 3.0)});
  recs.push_back(check_le("burke_step(2,1,0.5) = (1.5,0.75,2/3)", err, 1e-14));

  auto suite = ks_suite(
      [&](std::uint64_t seed) {
        std::vector<NamedKs> out;
        for (std::size_t g = 0; g < grid.size(); ++g) {
          auto [a, u] = grid[g];
          auto t = replicate(
              N, 3, seed, 0x4255524b00ull + g,
              [a = a, u = u](std::size_t, RngStream& rng, double* o) {
                double U = log_sample_inverse_gamma(a + u, rng);
                double V = log_sample_inverse_gamma(a - u, rng);
                double w = log_sample_inverse_gamma(2.0 * a, rng);
                auto r = lattice::burke_step_log(U, V, w);
                o[0] = r.U;
                o[1] = r.V;
                o[2] = r.w;
              },
              ctx.opts("burke" + std::to_string(g)));
          out.push_back(one_sample("U' ~ IG(a+u) " + point(a, u), column(t, 3, 0), log_ig_cdf(a + u), seed));
          out.push_back(one_sample("V' ~ IG(a-u) " + point(a, u), column(t, 3, 1), log_ig_cdf(a - u), seed));
          out.push_back(one_sample("w' ~ IG(2a) " + point(a, u), column(t, 3, 2), log_ig_cdf(2 * a), seed));
        }
        return out;
      },
      ctx.seed);
  recs.insert(recs.end(), suite.begin(), suite.end());
  return recs;
}

Records run_one_row(const RunContext& ctx) {
  const auto& p = ctx.params;
  const double alpha = p["alpha"], u = p["u"];
  const auto ms = vec<int>(p["m_list"]);
  const auto offsets = vec<int>(p["offsets"]);
  if (ms.empty() || offsets.empty()) throw ParameterError("one-row: empty m_list or offsets");
  const int kmax = std::max(3, *std::max_element(offsets.begin(), offsets.end()));
  const std::size_t N = ctx.samples(200000);
  const std::size_t K = offsets.size(), W = K + 4;
  // down-right path (1,1) -> (2,1) -> (2,0) -> (3,0) relative to (m,m)
  lattice::DownRightPath path{{{1, 1}, {2, 1}, {2, 0}, {3, 0}}};
  path.validate();

  if (auto f = ctx.csv("grid")) {
    RngStream rng(ctx.seed, stream_id_for(0x47524944ull, 0));
    lattice::write_grid_csv(*f, lattice::one_row_stationary_grid(alpha, u, 12, 6, rng));
  }

  return ks_suite(
      [&](std::uint64_t seed) {
        std::vector<std::vector<double>> tables;
        std::vector<NamedKs> out;
        for (int m : ms) {
          auto t = replicate(
              N, W, seed, 0x4f4e4500ull + m,
              [&, m](std::size_t, RngStream& rng, double* o) {
                auto g = lattice::one_row_stationary_grid(alpha, u, m + kmax, m + 1, rng);
                ratio_process(g, m, offsets, o);
                auto inc = lattice::increments_along_path(g, path, m);
                o[K] = g.log_z(m + 1, m) - g.log_z(m, m);  // first horizontal step off the diagonal
                o[K + 1] = inc[1];                          // (m+1,m+1) -> (m+2,m+1)
                o[K + 2] = inc[1] - inc[2];                 // vertical (m+2,m+1) over (m+2,m)
                o[K + 3] = inc[3] - inc[2];                 // (m+2,m) -> (m+3,m)
              },
              ctx.opts("one_row_m" + std::to_string(m)));
          const std::string ms_ = " m=" + std::to_string(m);
          out.push_back(one_sample("diagonal step ~ IG(a-u)" + ms_, column(t, W, K), log_ig_cdf(alpha - u), seed));
          out.push_back(one_sample("path right step 1 ~ IG(a-u)" + ms_, column(t, W, K + 1), log_ig_cdf(alpha - u), seed));
          out.push_back(one_sample("path down step ~ IG(a+u)" + ms_, column(t, W, K + 2), log_ig_cdf(alpha + u), seed));
          out.push_back(one_sample("path right step 2 ~ IG(a-u)" + ms_, column(t, W, K + 3), log_ig_cdf(alpha - u), seed));
          tables.push_back(std::move(t));
        }
        pairwise_m(out, "ratio process", ms, tables, W, offsets, seed);
        return out;
      },
      ctx.seed);
}

Records run_two_row(const RunContext& ctx) {
  const auto& p = ctx.params;
  const double alpha = p["alpha"], u = p["u"], v = p["v"];
  const auto ms = vec<int>(p["m_list"]);
  const auto offsets = vec<int>(p["offsets"]);
  if (ms.empty() || offsets.empty()) throw ParameterError("two-row: empty m_list or offsets");
  for (int m : ms)
    if (m < 2) throw ParameterError("two-row: m must be >= 2");
  const int kmax = *std::max_element(offsets.begin(), offsets.end());
  const std::size_t N = ctx.samples(200000);
  const std::size_t K = offsets.size();
  stationary::DiscreteStationaryParams sp{alpha, u, v};
  sp.validate();

  return ks_suite(
      [&](std::uint64_t seed) {
        std::vector<std::vector<double>> tables;
        std::vector<NamedKs> out;
        for (int m : ms) {
          tables.push_back(replicate(
              N, K, seed, 0x54574f00ull + m,
              [&, m](std::size_t, RngStream& rng, double* o) {
                ratio_process(lattice::two_row_stationary_grid(alpha, u, v, m + kmax, m, rng), m, offsets, o);
              },
              ctx.opts("two_row_m" + std::to_string(m))));
        }
        pairwise_m(out, "ratio process", ms, tables, K, offsets, seed);
        auto direct = replicate(
            N, K, seed, 0x5a555600ull,
            [&](std::size_t, RngStream& rng, double* o) {
              auto path = stationary::sample_zuv_path(sp, kmax, rng);
              for (std::size_t i = 0; i < K; ++i) o[i] = path.log_values[offsets[i]];
            },
            ctx.opts("two_row_direct"));
        auto it = std::find(ms.begin(), ms.end(), 2);
        const std::size_t ref = it == ms.end() ? 0 : static_cast<std::size_t>(it - ms.begin());
        for (std::size_t k = 0; k < K; ++k)
          out.push_back(two_sample("m=" + std::to_string(ms[ref]) + " ratio vs direct z_{u,v} k=" +
                                       std::to_string(offsets[k]),
                                   column(tables[ref], K, k), column(direct, K, k), seed));
        return out;
      },
      ctx.seed);
}

Records run_permutation(const RunContext& ctx) {
  const auto& p = ctx.params;
  lattice::OctantParams op;
  op.alpha_circ = p["alpha_circ"];
  op.alphas = vec<double>(p["alphas"]);
  const int m = p["row_m"], kmax = p["max_offset"];
  if (static_cast<int>(op.alphas.size()) < m + kmax) throw ParameterError("permutation: alphas too short");
  op.validate();
  std::vector<int> offsets;
  for (int k = 0; k <= kmax; ++k) offsets.push_back(k);
  const auto perms = p["permutations"].get<std::vector<std::vector<int>>>();
  const std::size_t N = ctx.samples(200000);

  Records recs;
  {
    std::vector<int> id(m);
    for (int i = 0; i < m; ++i) id[i] = i + 1;
    auto s = lattice::permutation_symmetry_experiment(op, id, m, offsets, 2000, ctx.seed, ctx.seed, ctx.workers);
    double diff = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k)
      for (std::size_t r = 0; r < s.original[k].size(); ++r)
        diff = std::max(diff, std::fabs(s.original[k][r] - s.permuted[k][r]));
    recs.push_back(check_le("identity permutation with equal seeds reproduces samples", diff, 0.0));
  }
  auto suite = ks_suite(
      [&](std::uint64_t seed) {
        std::vector<NamedKs> out;
        for (std::size_t q = 0; q < perms.size(); ++q) {
          auto s = lattice::permutation_symmetry_experiment(op, perms[q], m, offsets, N, seed,
                                                            mix_seed(seed, 0x5045 + q), ctx.workers);
          std::string name = "sigma=(";
          for (std::size_t i = 0; i < perms[q].size(); ++i) name += (i ? "," : "") + std::to_string(perms[q][i]);
          name += ")";
          for (std::size_t k = 0; k < offsets.size(); ++k)
            out.push_back(two_sample(name + " log Z(m+" + std::to_string(offsets[k]) + ",m)",
                                     s.original[k], s.permuted[k], seed));
        }
        return out;
      },
      ctx.seed);
  recs.insert(recs.end(), suite.begin(), suite.end());
  return recs;
}

Records run_zuv(const RunContext& ctx) {
  const auto& p = ctx.params;
  const double alpha = p["alpha"];
  const int tail_k = p["tail_k"], a_n = p["a_limit_n"];
  const double tail_tol = p["tail_tolerance"], a_tol = p["a_limit_tolerance"];
  const std::size_t N = ctx.samples(200000);
  using stationary::DiscreteStationaryParams;
  const std::vector<int> ks = {1, 4, 8};
  long violations = 0;

  auto suite = ks_suite(
      [&](std::uint64_t seed) {
        std::vector<NamedKs> out;
        auto path_table = [&](DiscreteStationaryParams sp, int kmax, std::uint64_t tag) {
          return replicate(
              N, kmax + 1, seed, tag,
              [&, sp, kmax](std::size_t, RngStream& rng, double* o) {
                auto path = stationary::sample_zuv_path(sp, kmax, rng);
                std::copy(path.log_values.begin(), path.log_values.end(), o);
              },
              ctx.opts("zuv_" + std::to_string(tag)));
        };
        auto ratio = [](const std::vector<double>& t, std::size_t w, int k) {
          std::vector<double> out(t.size() / w);
          for (std::size_t r = 0; r < out.size(); ++r) out[r] = t[r * w + k + 1] - t[r * w + k];
          return out;
        };
        // u + v = 0 and u = v: multiplicative IG(alpha - u) walks
        for (auto [u, v, label] : {std::tuple{0.5, -0.5, "u+v=0"}, std::tuple{-0.3, -0.3, "u=v"}}) {
          auto t = path_table({alpha, u, v}, 8, label[1] == '+' ? 0x5a303100ull : 0x5a303200ull);
          for (int k : {0, 3, 7})
            out.push_back(one_sample(std::string(label) + " ratio k=" + std::to_string(k) + " ~ IG(a-u)",
                                     ratio(t, 9, k), log_ig_cdf(alpha - u), seed));
        }
        // v -> -v
        {
          auto a = path_table({alpha, 1.0, 0.4}, 8, 0x5a303300ull);
          auto b = path_table({alpha, 1.0, -0.4}, 8, 0x5a303400ull);
          for (int k : ks)
            out.push_back(two_sample("v=0.4 vs v=-0.4 log z(" + std::to_string(k) + ")",
                                     column(a, 9, k), column(b, 9, k), seed));
        }
        // p/r/a representation
        {
          DiscreteStationaryParams sp{alpha, 0.8, -0.4};
          auto a = replicate(
              N, 8, seed, 0x5a303500ull,
              [&](std::size_t, RngStream& rng, double* o) {
                auto path = stationary::sample_zuv_path(sp, 8, rng);
                double worst = 0.0;  // z >= r2 pathwise
                for (int k = 0; k <= 8; ++k) worst = std::min(worst, path.log_values[k] - path.aux[k]);
                o[0] = path.log_values[1];
                o[1] = path.log_values[4];
                o[2] = path.log_values[8];
                o[3] = worst;
              },
              ctx.opts("zuv_path_a"));
          auto b = replicate(
              N, 8, seed, 0x5a303600ull,
              [&](std::size_t, RngStream& rng, double* o) {
                auto pra = stationary::sample_zuv_pra(sp, 8, rng);
                o[0] = pra.z.log_values[1];
                o[1] = pra.z.log_values[4];
                o[2] = pra.z.log_values[8];
                o[3] = pra.log_r[2] - pra.log_r[1];
                o[4] = pra.log_r[6] - pra.log_r[5];
              },
              ctx.opts("zuv_pra"));
          for (int i = 0; i < 3; ++i)
            out.push_back(two_sample("p*a vs direct log z(" + std::to_string(ks[i]) + ")",
                                     column(a, 8, i), column(b, 8, i), seed));
          auto bp = [&](double y) { return beta_prime_cdf(alpha - sp.v, alpha + sp.v, std::exp(y)); };
          out.push_back(one_sample("r(2)/r(1) ~ Beta'(a-v,a+v)", column(b, 8, 3), bp, seed));
          out.push_back(one_sample("r(6)/r(5) ~ Beta'(a-v,a+v)", column(b, 8, 4), bp, seed));
          violations = 0;
          for (double w : column(a, 8, 3)) violations += w < -1e-12;
        }
        // tail ratio law
        {
          const double u = 0.5, v = -0.4;
          DiscreteStationaryParams sp{alpha, u, v};
          auto t = replicate(
              N, 1, seed, 0x5a303700ull,
              [&](std::size_t, RngStream& rng, double* o) {
                auto path = stationary::sample_zuv_path(sp, tail_k + 1, rng);
                o[0] = path.log_values[tail_k + 1] - path.log_values[tail_k];
              },
              ctx.opts("zuv_tail"));
          auto c = one_sample("tail ratio k=" + std::to_string(tail_k) + " ~ IG(a+v)", t,
                              log_ig_cdf(alpha + v), seed);
          c.ks.threshold += tail_tol;
          out.push_back(c);
        }
        // a(n) limit, v > 0
        {
          const double u = 1.0, v = 0.4;
          DiscreteStationaryParams sp{alpha, u, v};
          auto t = replicate(
              N, 1, seed, 0x5a303800ull,
              [&](std::size_t, RngStream& rng, double* o) {
                o[0] = stationary::sample_zuv_pra(sp, a_n, rng).log_a[a_n];
              },
              ctx.opts("zuv_a_limit"));
          auto cdf = [&](double y) {
            double x = std::expm1(y);
            return x <= 0.0 ? 0.0 : beta_prime_cdf(u - v, 2.0 * v, x);
          };
          auto c = one_sample("a(" + std::to_string(a_n) + ") ~ 1 + G_{u-v}/G_{2v}", t, cdf, seed);
          c.ks.threshold += a_tol;
          out.push_back(c);
        }
        return out;
      },
      ctx.seed);
  suite.insert(suite.begin(), check_le("z_{u,v} >= r2 pathwise (violating replicas)",
                                       static_cast<double>(violations), 0.0));
  return suite;
}

Records run_lpp(const RunContext& ctx) {
  const auto& p = ctx.params;
  lpp::LppStationaryParams base;
  base.q = p["q"];
  base.r = p["r"];
  base.s = p["s"];
  base.a = p["a"];
  base.u = p["u"];
  base.v = p["v"];
  const auto offsets = vec<int>(p["offsets"]);
  const int kmax = *std::max_element(offsets.begin(), offsets.end());
  const std::size_t N = ctx.samples(200000);
  const std::size_t K = offsets.size();
  struct KindSpec {
    std::string name;
    lpp::StationaryKind kind;
    std::vector<int> ms;
  };
  const std::vector<KindSpec> kinds = {{"geom_one", lpp::StationaryKind::GeomOne, {1, 2, 4}},
                                       {"geom_two", lpp::StationaryKind::GeomTwo, {2, 3, 5}},
                                       {"exp_one", lpp::StationaryKind::ExpOne, {1, 2, 4}},
                                       {"exp_two", lpp::StationaryKind::ExpTwo, {2, 3, 5}}};

  lpp::LppGeomParams gperm;
  gperm.q_circ = p["perm_q_circ"];
  gperm.qs = vec<double>(p["perm_qs"]);
  gperm.validate();
  const int prow = p["perm_row_m"];
  const auto perms = p["permutations"].get<std::vector<std::vector<int>>>();
  if (prow < 1 || prow + 2 > static_cast<int>(gperm.qs.size()))
    throw ParameterError("lpp: perm_qs must have at least perm_row_m + 2 entries");
  for (auto pm : perms) {
    std::sort(pm.begin(), pm.end());
    for (int k = 1; k <= static_cast<int>(pm.size()); ++k)
      if (static_cast<int>(pm.size()) != prow || pm[k - 1] != k)
        throw ParameterError("lpp: permutations must permute 1..perm_row_m");
  }

  auto recs = ks_suite(
      [&](std::uint64_t seed) {
        std::vector<NamedKs> out;
        for (std::size_t q = 0; q < kinds.size(); ++q) {
          const auto& ks = kinds[q];
          std::vector<std::vector<double>> tables;
          for (int m : ks.ms) {
            auto prm = base;
            prm.max_n = m + kmax;
            prm.max_m = m;
            tables.push_back(replicate(
                N, K + 1, seed, 0x4c505000ull + 16 * q + m,
                [&, prm, m](std::size_t, RngStream& rng, double* o) {
                  auto g = lpp::stationary_lpp_grid(ks.kind, prm, rng);
                  ratio_process(g, m, offsets, o);
                  o[K] = g.log_z(m + 1, m) - g.log_z(m, m);
                },
                ctx.opts("lpp_" + ks.name + std::to_string(m))));
          }
          pairwise_m(out, ks.name, ks.ms, tables, K + 1, offsets, seed);
          if (ks.kind == lpp::StationaryKind::ExpOne) {
            const double rate = base.a - base.u;
            for (std::size_t i = 0; i < ks.ms.size(); ++i)
              out.push_back(one_sample("exp_one increment ~ Exp(a-u) m=" + std::to_string(ks.ms[i]),
                                       column(tables[i], K + 1, K),
                                       [rate](double x) { return exponential_cdf(rate, x); }, seed));
          }
        }
        // geometric analogue of the permutation symmetry: law of (G(m,m),...,G(m+k,m))
        // under permutations of q_1..q_m
        for (std::size_t pi = 0; pi < perms.size(); ++pi) {
          lpp::LppGeomParams perm = gperm;
          for (int k = 1; k <= static_cast<int>(perms[pi].size()); ++k)
            perm.qs[k - 1] = gperm.qs[perms[pi][k - 1] - 1];
          perm.validate();
          auto sample = [&](const lpp::LppGeomParams& gp, std::uint64_t sd, std::uint64_t tag) {
            return replicate(
                N, 3, sd, tag,
                [&](std::size_t, RngStream& rng, double* o) {
                  auto w = lpp::sample_geometric_weights(gp, rng, prow);
                  auto g = lpp::lpp_recurrence(w, prow + 2, prow);
                  for (int k = 0; k < 3; ++k) o[k] = g.log_z(prow + k, prow);
                },
                ctx.opts("lpp_perm" + std::to_string(tag & 0xff)));
          };
          auto a = sample(gperm, seed, 0x4c505080ull + pi);
          auto b = sample(perm, mix_seed(seed, 0x4750 + pi), 0x4c505090ull + pi);
          std::string ptxt;
          for (int x : perms[pi]) ptxt += std::to_string(x);
          for (int k = 0; k < 3; ++k)
            out.push_back(two_sample("geom permutation " + ptxt + ": G(m+" + std::to_string(k) + ",m), m=" +
                                         std::to_string(prow),
                                     column(a, 3, k), column(b, 3, k), seed));
        }
        return out;
      },
      ctx.seed);

  // log-gamma -> exponential LPP limit (resolution study plus the smallest-eps gate)
  const auto eps = vec<double>(p["eps_list"]);
  const std::size_t NL = p["limit_samples"].get<std::size_t>();
  const double tol = p["limit_tolerance"];
  std::vector<double> as(4, base.a);
  auto rep = lpp::loggamma_to_exp_limit_check(base.a, as, eps, 4, 3, NL, ctx.seed, ctx.workers);
  if (auto f = ctx.csv("eps_limit")) {
    *f << "epsilon,ks_statistic,threshold\n";
    for (const auto& r : rep.rows) *f << r.epsilon << ',' << r.ks_statistic << ',' << r.threshold << "\n";
  }
  const auto& last = rep.rows.back();
  recs.push_back(check_le("eps log z(4,3) vs E(4,3) at eps=" + fmt_g(last.epsilon), last.ks_statistic,
                          last.threshold + tol, "finite-eps tolerance " + fmt_g(tol)));
  recs.push_back(check_le("eps log w11 vs Exp(a_circ+a_1) at eps=" + fmt_g(last.epsilon), rep.ks_single_site,
                          rep.single_site_threshold + rep.single_site_bias,
                          "threshold + exact finite-eps bias " + fmt_g(rep.single_site_bias)));
  recs.push_back(check_le("eps log w11 vs its exact finite-eps law", rep.ks_single_site_exact,
                          rep.single_site_threshold));
  return recs;
}

}  // namespace polymer::experiments
