#include "polymer/kpz.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/replicate.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/stationary.hpp"

namespace polymer::kpz {

using lattice::WeightField;
using special::logaddexp;

double KpzScalingConfig::alpha() const { return stationary::alpha_n(n); }

void KpzScalingConfig::validate() const {
  if (n < 1) throw ParameterError("kpz: n must be positive");
  if (!(v <= std::min(0.0, u))) throw ParameterError("kpz: need v <= min(0, u)");
  if (!(v < u)) throw ParameterError("kpz: the two-row grid needs v < u");
  const double s = std::sqrt(static_cast<double>(n));
  for (double T : T_grid) {
    double t = n * T / 2.0;
    if (T < 0 || std::fabs(t - std::round(t)) > 1e-9) throw ParameterError("kpz: nT/2 must be a nonnegative integer");
  }
  for (double X : X_grid) {
    double y = s * X;
    if (X < 0 || std::fabs(y - std::round(y)) > 1e-9) throw ParameterError("kpz: sqrt(n) X must be a nonnegative integer");
  }
}

namespace {
double log_c(double alpha) { return std::log((2.0 * alpha - 1.0) / 2.0); }

void require_alpha(double alpha) {
  if (!(alpha > 0.5)) throw ParameterError("tilde z: need alpha > 1/2");
}

double log_tilde_from_grid(const lattice::PartitionGrid& g, const WeightField& f, double alpha,
                           int t, int y) {
  double lz = g.log_z(t + y + 2, t + 2);
  return (2.0 * t + y) * log_c(alpha) + lz - f.log_w(1, 1) - f.log_w(2, 2);
}
}  // namespace

std::vector<double> scaled_stationary_process(const KpzScalingConfig& cfg, double T,
                                              const std::vector<double>& X_list, RngStream& rng,
                                              bool interpolate) {
  cfg.validate();
  const double s = std::sqrt(static_cast<double>(cfg.n));
  double tt = cfg.n * T / 2.0;
  if (T < 0 || std::fabs(tt - std::round(tt)) > 1e-9)
    throw ParameterError("scaled_stationary_process: nT/2 must be a nonnegative integer");
  const int t = static_cast<int>(std::round(tt));
  int ymax = 0;
  for (double X : X_list) {
    if (X < 0) throw ParameterError("scaled_stationary_process: X must be nonnegative");
    double y = s * X;
    if (std::fabs(y - std::round(y)) > 1e-9 && !interpolate)
      throw ParameterError("scaled_stationary_process: sqrt(n) X must be an integer");
    ymax = std::max(ymax, static_cast<int>(std::ceil(y - 1e-9)));
  }
  const double alpha = cfg.alpha();
  auto f = sample_tilde_field(alpha, cfg.u, cfg.v, t, ymax, rng);
  auto g = lattice::partition_recurrence(f, t + ymax + 2, t + 2);
  std::vector<double> out;
  for (double X : X_list) {
    double y = s * X;
    double yr = std::round(y);
    if (std::fabs(y - yr) <= 1e-9) {
      out.push_back(log_tilde_from_grid(g, f, alpha, t, static_cast<int>(yr)));
    } else {
      int lo = static_cast<int>(std::floor(y));
      double w = y - lo;
      double a = log_tilde_from_grid(g, f, alpha, t, lo), b = log_tilde_from_grid(g, f, alpha, t, lo + 1);
      out.push_back(logaddexp(std::log1p(-w) + a, std::log(w) + b));
    }
  }
  return out;
}

WeightField sample_tilde_field(double alpha, double u, double v, int t_max, int y_max,
                               RngStream& rng) {
  require_alpha(alpha);
  if (t_max < 0 || y_max < 0) throw ParameterError("sample_tilde_field: negative window");
  auto params = lattice::two_row_params(alpha, u, v, t_max + y_max + 2);
  return lattice::sample_weight_field(params, rng, t_max + 2);
}

double log_tilde_z(const WeightField& field, double alpha, int t, int y) {
  require_alpha(alpha);
  if (t < 0 || y < 0) throw ParameterError("tilde z: t, y must be nonnegative");
  double lz = lattice::point_to_point_partition(field, {1, 1}, {t + y + 2, t + 2});
  return (2.0 * t + y) * log_c(alpha) + lz - field.log_w(1, 1) - field.log_w(2, 2);
}

double log_tilde_z_initial(const WeightField& field, double alpha, int x) {
  return log_tilde_z(field, alpha, 0, x + 1);
}

double log_tilde_z_decomposed(const WeightField& field, double alpha, int t, int y) {
  require_alpha(alpha);
  if (t == 0) {
    if (y < 1) throw ParameterError("tilde z decomposition: t = 0 needs y >= 1");
    return log_tilde_z_initial(field, alpha, y - 1);
  }
  const double lc = log_c(alpha);
  double acc = lattice::kNegInf;
  for (int x = 0; x <= t + y - 1; ++x) {
    const int a = x + 3, b = 3, a2 = t + y + 2, b2 = t + 2;
    double prop = (a2 - a + b2 - b + 1) * lc + lattice::point_to_point_partition(field, {a, b}, {a2, b2});
    acc = logaddexp(acc, log_tilde_z_initial(field, alpha, x) + prop);
  }
  return acc;
}

double normalized_tilde_z(double alpha, double u, double v, int t, int y, RngStream& rng) {
  auto f = sample_tilde_field(alpha, u, v, t, y, rng);
  return log_tilde_z(f, alpha, t, y);
}

double matching_beta(double alpha) {
  require_alpha(alpha);
  return 1.0 / std::sqrt(2.0 * alpha - 1.0);
}

FrameworkWeights framework_from_field(const WeightField& field, double alpha, long t_max) {
  const double beta = matching_beta(alpha);
  const double log_bar = -std::log(2.0 * alpha - 1.0);  // log of the bulk mean
  const int W = static_cast<int>(t_max);
  std::vector<double> bvals(t_max, 1.0);
  std::vector<double> om(static_cast<std::size_t>(t_max) * (W + 1), 0.0);
  for (long r = 0; r < t_max; ++r) {
    if (r % 2 == 0) {
      int i = static_cast<int>(r / 2) + 3;
      if (field.contains(i, i)) bvals[r] = std::exp(field.log_w(i, i) - log_bar) / 2.0;
    }
    for (int w = 1; w <= W; ++w) {
      if ((r + w) % 2 != 0) continue;
      int i = static_cast<int>((r + w) / 2) + 3, j = static_cast<int>((r - w) / 2) + 3;
      if (w > r || !field.contains(i, j)) continue;
      om[static_cast<std::size_t>(r) * (W + 1) + w] = (std::exp(field.log_w(i, j) - log_bar) - 1.0) / beta;
    }
  }
  return {she::BoundaryWeights::from_values(0, std::move(bvals)),
          she::BulkWeights(beta, 0, t_max, W, std::move(om))};
}

FrameworkWeights sample_framework_weights(double alpha, double u, long t_max, RngStream& rng) {
  const double beta = matching_beta(alpha);
  auto bw = she::BoundaryWeights::sample_scaled_inverse_gamma((2.0 * alpha - 1.0) / 2.0, alpha + u,
                                                              0, t_max, rng);
  auto bulk = she::BulkWeights::sample_factor_law(beta, 2.0 * alpha - 1.0, 2.0 * alpha, 0, t_max,
                                                  static_cast<int>(t_max), rng);
  return {std::move(bw), std::move(bulk)};
}

double log_matching_rhs(const FrameworkWeights& fw, const std::vector<double>& log_init, int t,
                        int y) {
  if (t < 1 || y < 0) throw ParameterError("matching identity needs t >= 1, y >= 0");
  const long tp = 2L * t + y - 2;
  if (static_cast<long>(log_init.size()) < t + y) throw ParameterError("matching: initial data too short");
  double shift = *std::max_element(log_init.begin(), log_init.begin() + (t + y));
  std::map<int, double> init;
  for (int x = 0; x <= t + y - 1; ++x) init[x] = std::exp(log_init[x] - shift);
  auto res = she::partition_with_initial_data(she::InitialKind::Diagonal, init, fw.boundary, fw.bulk,
                                              tp, y, t + y);
  double endpoint = y == 0 ? fw.boundary.at(tp) : fw.bulk.factor(tp, y);
  double pref = y == 0 ? 1.0 : 0.5;
  return std::log(pref * endpoint * res.value) + shift;
}

// ----------------------------------------------------------------- moments

double exact_bulk_moment(double n, int N) {
  using boost::multiprecision::cpp_bin_float_50;
  using mp = cpp_bin_float_50;
  mp s2 = 2 * boost::multiprecision::sqrt(mp(n));  // 2 sqrt(n)
  mp sum = 0, binom = 1, ig = 1;                   // ig = E[IG(2 sqrt(n)+1)^k]
  for (int k = 0; k <= N; ++k) {
    if (k > 0) {
      binom = binom * (N - k + 1) / k;
      ig = ig / (s2 - (k - 1));
    }
    mp term = binom * boost::multiprecision::pow(s2, k) * ig;
    sum += ((N - k) % 2 == 0) ? term : mp(-term);
  }
  return static_cast<double>(boost::multiprecision::pow(s2, N) * sum /
                             boost::multiprecision::pow(s2, N / 2.0));
}

BulkMomentReport bulk_weight_matching_moments(double n, std::size_t mc_draws, std::uint64_t seed) {
  if (n < 4) throw ParameterError("bulk moments need n >= 4");
  BulkMomentReport rep;
  rep.n = n;
  rep.mean_exact = exact_bulk_moment(n, 1);
  rep.var_exact = exact_bulk_moment(n, 2) - rep.mean_exact * rep.mean_exact;
  const double s2 = 2.0 * std::sqrt(n);
  rep.var_formula = s2 / (s2 - 1.0);
  for (int N = 1; N <= 8; ++N) {
    double dfact = 1.0;
    for (int k = N - 1; k > 1; k -= 2) dfact *= k;
    double limit = N % 2 == 0 ? dfact : 0.0;
    double rate = N % 2 == 0 ? std::pow(n, -0.5) : std::pow(n, -0.25);
    double ex = exact_bulk_moment(n, N);
    rep.moments.push_back({N, ex, limit, std::fabs(ex - limit) / rate});
  }
  if (mc_draws > 0) {
    const double scale = std::sqrt(2.0) * std::pow(n, 0.25);
    auto table = replicate(mc_draws, 1, seed, 0x424d4f4dull, [&](std::size_t, RngStream& rng, double* out) {
      out[0] = scale * (s2 * sample_inverse_gamma(s2 + 1.0, rng) - 1.0);
    });
    for (int N = 1; N <= 8; ++N) {
      double m = 0.0, m2 = 0.0;
      for (double w : table) {
        double p = std::pow(w, N);
        m += p;
        m2 += p * p;
      }
      const double cnt = static_cast<double>(table.size());
      m /= cnt;
      rep.mc_moments.push_back(m);
      rep.mc_se.push_back(std::sqrt(std::max(0.0, m2 / cnt - m * m) / cnt));
    }
  }
  return rep;
}

BoundaryMomentReport boundary_weight_matching_moments(double n, double u) {
  BoundaryMomentReport rep;
  rep.n = n;
  rep.u = u;
  rep.mu = u - 0.5;
  const double s = std::sqrt(n);
  if (!(s + rep.mu > 1.0)) throw ParameterError("boundary moments need sqrt(n) + mu > 1");
  const double alpha = stationary::alpha_n(n);
  const double scale = (2.0 * alpha - 1.0) / 2.0;
  rep.mean_exact = scale * inverse_gamma_moment(alpha + u, 1);
  rep.var_exact = scale * scale * (inverse_gamma_moment(alpha + u, 2) -
                                   std::pow(inverse_gamma_moment(alpha + u, 1), 2));
  rep.mu_recovered = s * (1.0 - rep.mean_exact);
  rep.mean_gap_scaled = std::fabs(rep.mu_recovered - rep.mu) * s;
  rep.var_scaled = rep.var_exact * s;
  return rep;
}

MatchingReport matching_identity_check(double alpha, double u, double v, int t, int y,
                                       std::size_t n_samples, std::uint64_t seed, int workers) {
  if (t < 1 || t > 5 || y < 0 || y > 4) throw ParameterError("matching identity: window guard t in [1,5], y in [0,4]");
  const long tp = 2L * t + y - 2;
  auto lhs = replicate(
      n_samples, 1, seed, 0x4d4c4853ull,
      [&](std::size_t, RngStream& rng, double* out) {
        auto f = sample_tilde_field(alpha, u, v, t, y, rng);
        out[0] = log_tilde_z(f, alpha, t, y);
      },
      {workers});
  const double lc = log_c(alpha);
  auto rhs = replicate(
      n_samples, 1, seed, 0x4d524853ull,
      [&](std::size_t, RngStream& rng, double* out) {
        auto path = stationary::sample_zuv_path({alpha, u, v}, t + y, rng);
        std::vector<double> init(t + y);
        for (int x = 0; x < t + y; ++x) init[x] = (x + 1) * lc + path.log_values[x + 1];
        auto fw = sample_framework_weights(alpha, u, tp + 1, rng);
        out[0] = log_matching_rhs(fw, init, t, y);
      },
      {workers});
  return {std::move(lhs), std::move(rhs)};
}

}  // namespace polymer::kpz
