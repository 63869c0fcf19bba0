#include "polymer/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/special_functions.hpp"

namespace polymer::stationary {

using special::logaddexp;
namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int grid_index(double x, double step, const char* what) {
  double k = x / step;
  double r = std::round(k);
  if (std::fabs(k - r) > 1e-9 * std::max(1.0, std::fabs(k)) || r < 0)
    throw ParameterError(std::string(what) + ": point " + std::to_string(x) +
                         " is not on the grid");
  return static_cast<int>(r);
}
}  // namespace

void DiscreteStationaryParams::validate() const {
  if (!(alpha > 0.0)) throw ParameterError("z_{u,v}: alpha must be positive");
  if (!(u > -alpha) || !(v > -alpha)) throw ParameterError("z_{u,v}: need u, v > -alpha");
  if (!(v < alpha)) throw ParameterError("z_{u,v}: need v < alpha");
  if (v > u) throw ParameterError("z_{u,v}: need v <= u");
}

void ContinuumStationaryParams::validate() const {
  if (!(delta > 0.0) || !(x_max > 0.0)) throw ParameterError("H_{u,v}: delta and x_max must be positive");
  if (v > u) throw ParameterError("H_{u,v}: need u >= v");
  if (!std::isfinite(u) || !std::isfinite(v)) throw ParameterError("H_{u,v}: non-finite drift");
}

int ContinuumStationaryParams::steps() const {
  return static_cast<int>(std::llround(x_max / delta));
}

StationaryPath sample_zuv_path(const DiscreteStationaryParams& p, int k_max, RngStream& rng) {
  p.validate();
  if (k_max < 0) throw ParameterError("sample_zuv_path: k_max must be >= 0");
  const bool has_sum = p.u > p.v;
  const double log_varpi = has_sum ? log_sample_inverse_gamma(p.u - p.v, rng) : 0.0;
  StationaryPath out;
  out.coords.resize(k_max + 1);
  out.log_values.resize(k_max + 1);
  out.aux.resize(k_max + 1);
  double lr1 = 0.0, lr2 = 0.0, lsum = kNegInf;
  out.coords[0] = 0;
  out.log_values[0] = 0.0;
  out.aux[0] = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    lr1 += log_sample_inverse_gamma(p.alpha + p.v, rng);
    lsum = logaddexp(lsum, lr1 - lr2);  // r1(k) / r2(k-1)
    lr2 += log_sample_inverse_gamma(p.alpha - p.v, rng);
    out.coords[k] = k;
    out.aux[k] = lr2;
    out.log_values[k] = has_sum ? lr2 + logaddexp(0.0, lsum - log_varpi) : lr2;
  }
  return out;
}

PraPath sample_zuv_pra(const DiscreteStationaryParams& p, int k_max, RngStream& rng) {
  p.validate();
  if (k_max < 0) throw ParameterError("sample_zuv_pra: k_max must be >= 0");
  const bool has_sum = p.u > p.v;
  const double log_varpi = has_sum ? log_sample_inverse_gamma(p.u - p.v, rng) : 0.0;
  PraPath out;
  out.log_p.assign(k_max + 1, 0.0);
  out.log_r.assign(k_max + 1, 0.0);
  out.log_a.assign(k_max + 1, 0.0);
  out.z.coords.resize(k_max + 1);
  out.z.log_values.assign(k_max + 1, 0.0);
  double lp = 0.0, lr = 0.0, lsum = kNegInf, prev_log_xi = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double log_zeta = log_sample_inverse_gamma(p.alpha + p.v, rng);
    double log_xi = log_sample_inverse_gamma(p.alpha - p.v, rng);
    lr = k == 1 ? log_zeta : lr + log_zeta - prev_log_xi;  // r(k) = zeta_1 prod zeta_i/xi_{i-1}
    lp += log_xi;
    lsum = logaddexp(lsum, lr);
    prev_log_xi = log_xi;
    out.log_p[k] = lp;
    out.log_r[k] = lr;
    out.log_a[k] = has_sum ? logaddexp(0.0, lsum - log_varpi) : 0.0;
    out.z.log_values[k] = lp + out.log_a[k];
  }
  for (int k = 0; k <= k_max; ++k) out.z.coords[k] = k;
  return out;
}

namespace {

// Shared core for the H_{u,v} samplers. `on_step(j, fine, coarse, ref)` is
// called for j = 0..J with the value on the delta grid, the value with a
// 2*delta Riemann sum (only meaningful at even j), and the reference walk.
template <class F>
void huv_core(const ContinuumStationaryParams& p, bool pitman, int J, RngStream& rng, F&& on_step) {
  p.validate();
  const bool has_sum = p.u > p.v;
  const double log_varpi = has_sum ? log_sample_inverse_gamma(p.u - p.v, rng) : 0.0;
  const double d = p.delta;
  const double log_d = std::log(d), log_2d = std::log(2.0 * d);
  const double sd = pitman ? std::sqrt(0.5 * d) : std::sqrt(d);
  // defhuv: (b1, b2) = (B1, B2); Pitman: (b1, b2) = (beta1, beta2)
  const double drift1 = pitman ? 0.0 : -p.v * d;
  const double drift2 = p.v * d;
  double b1 = 0.0, b2 = 0.0, li = kNegInf, li2 = kNegInf;
  auto value = [&](double log_int) {
    double base = pitman ? b1 + b2 : b2;
    return has_sum ? base + logaddexp(0.0, log_int - log_varpi) : base;
  };
  on_step(0, 0.0, 0.0, 0.0);
  for (int j = 1; j <= J; ++j) {
    // left endpoint integrand at (j-1) delta
    double e = pitman ? -2.0 * b2 : b1 - b2;
    li = logaddexp(li, log_d + e);
    if ((j - 1) % 2 == 0) li2 = logaddexp(li2, log_2d + e);
    b1 += drift1 + sd * rng.normal();
    b2 += drift2 + sd * rng.normal();
    on_step(j, value(li), value(li2), pitman ? b1 + b2 : b2);
  }
}

StationaryPath huv_path(const ContinuumStationaryParams& p, bool pitman, RngStream& rng) {
  const int J = p.steps();
  StationaryPath out;
  out.coords.resize(J + 1);
  out.log_values.resize(J + 1);
  out.aux.resize(J + 1);
  huv_core(p, pitman, J, rng, [&](int j, double fine, double, double ref) {
    out.coords[j] = j * p.delta;
    out.log_values[j] = fine;
    out.aux[j] = ref;
  });
  return out;
}

HuvPoints huv_points(const ContinuumStationaryParams& p, bool pitman, const std::vector<double>& xs,
                     RngStream& rng) {
  std::vector<int> idx;
  int J = 0;
  for (double x : xs) {
    int k = grid_index(x, 2.0 * p.delta, "H_{u,v} points");
    idx.push_back(2 * k);
    J = std::max(J, 2 * k);
  }
  HuvPoints out;
  out.fine.assign(xs.size(), 0.0);
  out.coarse.assign(xs.size(), 0.0);
  huv_core(p, pitman, J, rng, [&](int j, double fine, double coarse, double) {
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (idx[i] == j) {
        out.fine[i] = fine;
        out.coarse[i] = coarse;
      }
  });
  return out;
}

}  // namespace

StationaryPath sample_Huv_path(const ContinuumStationaryParams& p, RngStream& rng) {
  return huv_path(p, false, rng);
}

StationaryPath sample_Huv_pitman(const ContinuumStationaryParams& p, RngStream& rng) {
  return huv_path(p, true, rng);
}

HuvPoints sample_Huv_points(const ContinuumStationaryParams& p, const std::vector<double>& xs,
                            RngStream& rng) {
  return huv_points(p, false, xs, rng);
}

HuvPoints sample_Huv_pitman_points(const ContinuumStationaryParams& p,
                                   const std::vector<double>& xs, RngStream& rng) {
  return huv_points(p, true, xs, rng);
}

StationaryPath scaled_initial_data(int n, double u, double v, const std::vector<double>& X_grid,
                                   RngStream& rng) {
  if (n < 1) throw ParameterError("scaled_initial_data: n must be positive");
  const double s = std::sqrt(static_cast<double>(n));
  std::vector<int> ks;
  int kmax = 0;
  for (double X : X_grid) {
    int k = grid_index(X, 1.0 / s, "scaled_initial_data");
    ks.push_back(k);
    kmax = std::max(kmax, k);
  }
  DiscreteStationaryParams p{alpha_n(n), u, v};
  auto path = sample_zuv_path(p, kmax, rng);
  StationaryPath out;
  out.coords = X_grid;
  for (int k : ks) out.log_values.push_back(k * std::log(s) + path.log_values[k]);
  return out;
}

double second_moment_analytic(int n, double u, double v, double X) {
  if (n < 1) throw ParameterError("second_moment_analytic: n must be positive");
  if (v > u) throw ParameterError("second_moment_analytic: need v <= u");
  const double s = std::sqrt(static_cast<double>(n));
  const int K = grid_index(X, 1.0 / s, "second_moment_analytic");
  const double a = alpha_n(n);
  if (!(a + v > 2.0) || !(a - v > 2.0))
    throw MomentDivergenceError("second_moment_analytic: need alpha_n +- v > 2");
  const double M1p = inverse_gamma_moment(a + v, 1), M2p = inverse_gamma_moment(a + v, 2);
  const double M1m = inverse_gamma_moment(a - v, 1), M2m = inverse_gamma_moment(a - v, 2);
  const double nn = static_cast<double>(n);
  const double cross = nn * M1p * M1m, sq_p = nn * M2p, sq_m = nn * M2m;
  // 1/varpi ~ Gamma(u - v)
  const double e1 = u - v, e2 = (u - v) * (u - v + 1.0);

  long double t1 = std::pow(static_cast<long double>(sq_m), K);
  if (u == v || K == 0) return static_cast<double>(t1);
  long double t2 = 0.0L;
  for (int l = 1; l <= K; ++l)
    t2 += std::pow(static_cast<long double>(cross), l) *
          std::pow(static_cast<long double>(sq_m), K + 1 - l);
  t2 *= 2.0L * e1 / (nn * M1m);  // 2 E[A B]
  long double t3 = 0.0L;
  for (int l = 1; l <= K; ++l)
    for (int l2 = 1; l2 <= K; ++l2) {
      int lo = std::min(l, l2), hi = std::max(l, l2);
      t3 += std::pow(static_cast<long double>(sq_p), lo) *
            std::pow(static_cast<long double>(cross), hi - lo) *
            std::pow(static_cast<long double>(sq_m), K + 1 - hi);
    }
  t3 *= e2 / nn;
  return static_cast<double>(t1 + t2 + t3);
}

}  // namespace polymer::stationary
