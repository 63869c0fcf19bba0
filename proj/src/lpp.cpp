#include "polymer/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/replicate.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/stats.hpp"

namespace polymer::lpp {

using lattice::kNegInf;

double LppGeomParams::q(int i, int j) const {
  if (j < 1 || i < j || i > static_cast<int>(qs.size())) throw RangeError("LppGeomParams::q");
  return i == j ? q_circ * qs[i - 1] : qs[i - 1] * qs[j - 1];
}

void LppGeomParams::validate() const {
  if (qs.empty()) throw ParameterError("LppGeomParams: empty q list");
  if (!(q_circ > 0.0)) throw ParameterError("LppGeomParams: q_circ must be positive");
  for (int i = 1; i <= static_cast<int>(qs.size()); ++i) {
    if (!(qs[i - 1] > 0.0)) throw ParameterError("LppGeomParams: q_i must be positive");
    for (int j = 1; j <= i; ++j) {
      if (exemptions.count({i, j})) continue;
      double v = q(i, j);
      if (!(v > 0.0 && v < 1.0))
        throw ParameterError("LppGeomParams: product at (" + std::to_string(i) + "," +
                             std::to_string(j) + ") = " + std::to_string(v) + " not in (0,1)");
    }
  }
}

double LppExpParams::rate(int i, int j) const {
  if (j < 1 || i < j || i > static_cast<int>(as.size())) throw RangeError("LppExpParams::rate");
  return i == j ? a_circ + as[i - 1] : as[i - 1] + as[j - 1];
}

void LppExpParams::validate() const {
  if (as.empty()) throw ParameterError("LppExpParams: empty rate list");
  for (int i = 1; i <= static_cast<int>(as.size()); ++i)
    for (int j = 1; j <= i; ++j) {
      if (exemptions.count({i, j})) continue;
      if (!(rate(i, j) > 0.0))
        throw ParameterError("LppExpParams: rate at (" + std::to_string(i) + "," +
                             std::to_string(j) + ") must be positive");
    }
}

LppWeights::LppWeights(int n, std::set<Site> pinned)
    : n_(n), rows_(n), w_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0), pinned_(std::move(pinned)) {}

double LppWeights::at(int i, int j) const {
  if (!contains(i, j)) throw RangeError("LppWeights: site outside window");
  return w_[static_cast<std::size_t>(i) * (i - 1) / 2 + (j - 1)];
}

void LppWeights::set(int i, int j, double v) {
  if (!contains(i, j)) throw RangeError("LppWeights: site outside window");
  w_[static_cast<std::size_t>(i) * (i - 1) / 2 + (j - 1)] = v;
}

LppWeights sample_geometric_weights(const LppGeomParams& p, RngStream& rng, int max_rows) {
  p.validate();
  const int n = static_cast<int>(p.qs.size());
  LppWeights w(n, p.exemptions);
  w.limit_rows(max_rows > 0 ? std::min(max_rows, n) : n);
  for (int j = 1; j <= w.rows(); ++j)
    for (int i = j; i <= n; ++i) {
      if (w.pinned(i, j)) continue;
      w.set(i, j, static_cast<double>(sample_geometric(p.q(i, j), rng)));
    }
  return w;
}

LppWeights sample_exponential_weights(const LppExpParams& p, RngStream& rng, int max_rows) {
  p.validate();
  const int n = static_cast<int>(p.as.size());
  LppWeights w(n, p.exemptions);
  w.limit_rows(max_rows > 0 ? std::min(max_rows, n) : n);
  for (int j = 1; j <= w.rows(); ++j)
    for (int i = j; i <= n; ++i) {
      if (w.pinned(i, j)) continue;
      w.set(i, j, sample_exponential(p.rate(i, j), rng));
    }
  return w;
}

LppGrid lpp_recurrence(const LppWeights& w, int max_n, int max_m) {
  if (max_m < 1 || max_n < max_m) throw RangeError("lpp_recurrence: need max_n >= max_m >= 1");
  if (max_n > w.size() || max_m > w.rows()) throw RangeError("lpp_recurrence: window too large");
  LppGrid g(max_n, max_m);
  for (int m = 1; m <= max_m; ++m)
    for (int n = m; n <= max_n; ++n) {
      double prev;
      if (n == 1)
        prev = 0.0;
      else if (n == m)
        prev = g.log_z(n, m - 1);
      else
        prev = std::max(g.log_z(n - 1, m), g.log_z(n, m - 1));
      g.set(n, m, w.at(n, m) + prev);
    }
  return g;
}

namespace {
void enumerate_max(const LppWeights& w, int i, int j, double acc, double& best, long& count) {
  acc += w.at(i, j);
  if (i == 1 && j == 1) {
    best = std::max(best, acc);
    if (++count > 1000000) throw InstanceTooLargeError("lpp_bruteforce: > 1e6 paths");
    return;
  }
  if (i - 1 >= j) enumerate_max(w, i - 1, j, acc, best, count);
  if (j - 1 >= 1) enumerate_max(w, i, j - 1, acc, best, count);
}
}  // namespace

double lpp_bruteforce(const LppWeights& w, int n, int m) {
  if (m < 1 || n < m) return kNegInf;
  double best = kNegInf;
  long count = 0;
  enumerate_max(w, n, m, 0.0, best, count);
  return best;
}

StationaryKind parse_kind(const std::string& s) {
  if (s == "geom_one") return StationaryKind::GeomOne;
  if (s == "geom_two") return StationaryKind::GeomTwo;
  if (s == "exp_one") return StationaryKind::ExpOne;
  if (s == "exp_two") return StationaryKind::ExpTwo;
  throw ParameterError("unknown LPP stationary kind '" + s + "'");
}

LppGeomParams geom_params(StationaryKind kind, const LppStationaryParams& p) {
  LppGeomParams g;
  int n = std::max(p.max_n, 2);
  g.q_circ = p.r;
  g.qs.assign(n, p.q);
  if (kind == StationaryKind::GeomOne) {
    if (!(p.r > 0.0 && p.r < 1.0 && p.q > 0.0 && p.q < 1.0 && p.q / p.r < 1.0))
      throw ParameterError("geom_one: need q, r in (0,1) and q/r < 1");
    g.qs[0] = 1.0 / p.r;
    g.exemptions = {{1, 1}};
  } else if (kind == StationaryKind::GeomTwo) {
    if (!(p.q * p.r < 1.0 && p.q * p.s < 1.0 && p.q / p.s < 1.0 && p.r / p.s < 1.0 &&
          p.q > 0.0 && p.r > 0.0 && p.s > 0.0))
      throw ParameterError("geom_two: need qr, qs, q/s, r/s in (0,1)");
    g.qs[0] = p.s;
    g.qs[1] = 1.0 / p.s;
    g.exemptions = {{1, 1}, {2, 1}};
  } else {
    throw ParameterError("geom_params: not a geometric kind");
  }
  return g;
}

LppExpParams exp_params(StationaryKind kind, const LppStationaryParams& p) {
  LppExpParams e;
  int n = std::max(p.max_n, 2);
  e.a_circ = p.u;
  e.as.assign(n, p.a);
  if (kind == StationaryKind::ExpOne) {
    if (!(p.a > 0.0 && p.u > -p.a && p.u < p.a)) throw ParameterError("exp_one: need u in (-a, a)");
    e.as[0] = -p.u;
    e.exemptions = {{1, 1}};
  } else if (kind == StationaryKind::ExpTwo) {
    if (!(p.a + p.u > 0.0 && p.a + p.v > 0.0 && p.a - p.v > 0.0 && p.u - p.v > 0.0))
      throw ParameterError("exp_two: need a+u > 0, a+-v > 0, u-v > 0");
    e.as[0] = p.v;
    e.as[1] = -p.v;
    e.exemptions = {{1, 1}, {2, 1}};
  } else {
    throw ParameterError("exp_params: not an exponential kind");
  }
  return e;
}

LppGrid stationary_lpp_grid(StationaryKind kind, const LppStationaryParams& p, RngStream& rng) {
  LppWeights w;
  if (kind == StationaryKind::GeomOne || kind == StationaryKind::GeomTwo)
    w = sample_geometric_weights(geom_params(kind, p), rng, p.max_m);
  else
    w = sample_exponential_weights(exp_params(kind, p), rng, p.max_m);
  return lpp_recurrence(w, p.max_n, p.max_m);
}

LimitCheckReport loggamma_to_exp_limit_check(double a_circ, const std::vector<double>& as,
                                             const std::vector<double>& eps_list, int n, int m,
                                             std::size_t n_samples, std::uint64_t seed,
                                             int workers) {
  if (eps_list.empty()) throw ParameterError("limit check: empty epsilon list");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1])) throw ParameterError("limit check: epsilon grid must decrease");
  if (static_cast<int>(as.size()) < n || m < 1 || n < m) throw ParameterError("limit check: bad (n,m)");
  LppExpParams ep{a_circ, std::vector<double>(as.begin(), as.begin() + n), {}};
  ep.validate();

  auto exp_table = replicate(
      n_samples, 1, seed, 0x4c505045ull,
      [&](std::size_t, RngStream& rng, double* out) {
        auto w = sample_exponential_weights(ep, rng, m);
        out[0] = lpp_recurrence(w, n, m).log_z(n, m);
      },
      {workers});
  stats::SampleSet exp_set("E(n,m)", seed, exp_table);

  LimitCheckReport rep;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const double eps = eps_list[e];
    lattice::OctantParams op;
    op.alpha_circ = eps * a_circ;
    for (int i = 0; i < n; ++i) op.alphas.push_back(eps * as[i]);
    auto lg = replicate(
        n_samples, 2, seed, 0x4c4f4700ull + e,
        [&](std::size_t, RngStream& rng, double* out) {
          auto f = lattice::sample_weight_field(op, rng, m);
          out[0] = eps * lattice::partition_recurrence(f, n, m).log_z(n, m);
          out[1] = eps * f.log_w(1, 1);
        },
        {workers});
    stats::SampleSet lg_set("eps log z", seed, column(lg, 2, 0));
    auto ks = stats::ks_two_sample(lg_set, exp_set);
    rep.rows.push_back({eps, ks.statistic, ks.threshold});
    if (e + 1 == eps_list.size()) {
      const double rate = a_circ + as[0];
      stats::SampleSet site("eps log w11", seed, column(lg, 2, 1));
      auto ks1 = stats::ks_one_sample(site, [rate](double x) { return exponential_cdf(rate, x); });
      const double theta = eps * rate;
      auto exact = [theta, eps](double x) {
        // P(eps log w <= x) = P(w <= e^{x/eps}) = Q(theta, e^{-x/eps})
        double t = -x / eps;
        if (t > 700.0) return 0.0;
        return special::gamma_q(theta, std::exp(t));
      };
      auto ks2 = stats::ks_one_sample(site, exact);
      double bias = 0.0;
      for (double x = -2.0; x <= 40.0 / rate; x += 1e-3)
        bias = std::max(bias, std::fabs(exact(x) - exponential_cdf(rate, x)));
      rep.ks_single_site = ks1.statistic;
      rep.ks_single_site_exact = ks2.statistic;
      rep.single_site_threshold = ks1.threshold;
      rep.single_site_bias = bias;
    }
  }
  return rep;
}

}  // namespace polymer::lpp
