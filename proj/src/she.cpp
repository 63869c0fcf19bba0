#include "polymer/she.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <ostream>
#include <string>

#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/stationary.hpp"

namespace polymer::she {

// ---------------------------------------------------------------- weights

BoundaryWeights BoundaryWeights::constant(double gamma) {
  if (!(gamma >= 0.0)) throw ParameterError("boundary weight must be nonnegative");
  BoundaryWeights b;
  b.gamma_ = gamma;
  return b;
}

BoundaryWeights BoundaryWeights::from_values(long first_time, std::vector<double> values) {
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("boundary weights must be finite and nonnegative");
  BoundaryWeights b;
  b.constant_ = false;
  b.first_ = first_time;
  b.values_ = std::move(values);
  return b;
}

BoundaryWeights BoundaryWeights::sample_scaled_inverse_gamma(double scale, double theta, long t0,
                                                             long t1, RngStream& rng) {
  std::vector<double> v;
  v.reserve(std::max<long>(0, t1 - t0));
  for (long i = t0; i < t1; ++i) v.push_back(scale * sample_inverse_gamma(theta, rng));
  return from_values(t0, std::move(v));
}

double BoundaryWeights::at(long i) const {
  if (constant_) return gamma_;
  if (i < first_ || i >= first_ + static_cast<long>(values_.size()))
    throw RangeError("boundary weight missing at time " + std::to_string(i));
  return values_[i - first_];
}

bool BoundaryWeights::covers(long s, long t) const {
  return constant_ || t <= s || (s >= first_ && t <= first_ + static_cast<long>(values_.size()));
}

double BoundaryWeights::max_value(long s, long t) const {
  if (constant_) return gamma_;
  double m = 0.0;
  for (long i = s; i < t; ++i) m = std::max(m, at(i));
  return m;
}

BulkWeights BulkWeights::zero(double beta) {
  BulkWeights b(beta, 0, 0, 0, {});
  b.zero_ = true;
  return b;
}

BulkWeights::BulkWeights(double beta, long t0, long t1, int max_x, std::vector<double> omega)
    : zero_(false), beta_(beta), t0_(t0), t1_(t1), max_x_(max_x), omega_(std::move(omega)) {
  if (t1 < t0 || max_x < 0) throw ParameterError("BulkWeights: bad window");
  if (omega_.size() != static_cast<std::size_t>(t1 - t0) * (max_x + 1))
    throw ParameterError("BulkWeights: value count does not match window");
  for (long r = t0; r < t1; ++r) omega_[static_cast<std::size_t>(r - t0) * (max_x + 1)] = 0.0;
}

BulkWeights BulkWeights::sample_factor_law(double beta, double scale, double theta, long t0,
                                           long t1, int max_x, RngStream& rng) {
  if (beta == 0.0) throw ParameterError("sample_factor_law: beta must be nonzero");
  std::vector<double> om(static_cast<std::size_t>(t1 - t0) * (max_x + 1), 0.0);
  for (long r = t0; r < t1; ++r)
    for (int x = 1; x <= max_x; ++x)
      om[static_cast<std::size_t>(r - t0) * (max_x + 1) + x] =
          (scale * sample_inverse_gamma(theta, rng) - 1.0) / beta;
  return BulkWeights(beta, t0, t1, max_x, std::move(om));
}

BulkWeights BulkWeights::sample_rademacher(double beta, long t0, long t1, int max_x, RngStream& rng) {
  std::vector<double> om(static_cast<std::size_t>(t1 - t0) * (max_x + 1), 0.0);
  for (long r = t0; r < t1; ++r)
    for (int x = 1; x <= max_x; ++x)
      om[static_cast<std::size_t>(r - t0) * (max_x + 1) + x] = (rng.next_u32() & 1u) ? 1.0 : -1.0;
  BulkWeights b(beta, t0, t1, max_x, std::move(om));
  b.validate();
  return b;
}

double BulkWeights::omega(long r, int x) const {
  if (x == 0 || zero_) return 0.0;
  if (r < t0_ || r >= t1_ || x < 0 || x > max_x_)
    throw RangeError("bulk weight missing at (" + std::to_string(r) + "," + std::to_string(x) + ")");
  return omega_[static_cast<std::size_t>(r - t0_) * (max_x_ + 1) + x];
}

bool BulkWeights::covers(long s, long t, int max_x) const {
  return zero_ || t <= s || (s >= t0_ && t <= t1_ && max_x <= max_x_);
}

double BulkWeights::max_factor() const {
  double m = 1.0;
  if (zero_) return m;
  for (double w : omega_) m = std::max(m, 1.0 + beta_ * w);
  return m;
}

void BulkWeights::validate() const {
  if (zero_) return;
  for (double w : omega_)
    if (1.0 + beta_ * w < 0.0) throw ParameterError("bulk weights violate 1 + beta omega >= 0");
}

// ---------------------------------------------------------------- DP core

namespace {

bool parity_ok(long s, int x, long t, int y) { return ((s + x + t + y) % 2 + 2) % 2 == 0; }

void check_args(long s, int x, long t, int y, bool allow_equal = false) {
  if (allow_equal ? t < s : t <= s) throw ParameterError("kernel: need t > s");
  if (x < 0 || y < 0) throw ParameterError("kernel: positions must be nonnegative");
}

// One time step r -> r+1 of the weighted reflected walk.
void step(const std::vector<double>& f, std::vector<double>& g, long r, const BoundaryWeights& w,
          const BulkWeights& bulk, int cap) {
  const int len = static_cast<int>(f.size());
  const int glen = std::min(len + 1, cap + 1);
  g.assign(glen, 0.0);
  if (len > 0 && f[0] != 0.0 && glen > 1) g[1] += f[0] * w.at(r);
  for (int x = 1; x < len; ++x) {
    double c = f[x];
    if (c == 0.0) continue;
    if (!bulk.is_zero()) c *= bulk.factor(r, x);
    c *= 0.5;
    g[x - 1] += c;
    if (x + 1 < glen) g[x + 1] += c;
  }
}

std::vector<double> propagate(std::vector<double> f, long r0, long r1, const BoundaryWeights& w,
                              const BulkWeights& bulk, int cap) {
  std::vector<double> g;
  for (long r = r0; r < r1; ++r) {
    step(f, g, r, w, bulk, cap);
    f.swap(g);
  }
  return f;
}

constexpr int kNoCap = 1 << 30;

}  // namespace

std::vector<double> partition_row(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                                  long t, int max_x) {
  check_args(s, x, t, 0, true);
  if (!w.covers(s, t)) throw RangeError("boundary weights do not cover the time window");
  int cap = max_x < 0 ? kNoCap : max_x;
  if (x > cap) throw ParameterError("partition_row: start outside the capped window");
  if (!bulk.covers(s, t, std::min<long>(cap, x + (t - s))))
    throw RangeError("bulk weights do not cover the window");
  std::vector<double> f(x + 1, 0.0);
  f[x] = 1.0;
  return propagate(std::move(f), s, t, w, bulk, cap);
}

KernelValue reflected_kernel(long s, int x, long t, int y) {
  return boundary_kernel(BoundaryWeights::constant(1.0), s, x, t, y);
}

KernelValue boundary_kernel(const BoundaryWeights& w, long s, int x, long t, int y) {
  check_args(s, x, t, y);
  if (!parity_ok(s, x, t, y)) return {0.0, true};
  auto row = partition_row(w, BulkWeights::zero(), s, x, t);
  return {y < static_cast<int>(row.size()) ? row[y] : 0.0, false};
}

double modified_partition_direct(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                                 long t, int y) {
  check_args(s, x, t, y);
  if (!parity_ok(s, x, t, y)) return 0.0;
  auto row = partition_row(w, bulk, s, x, t);
  return y < static_cast<int>(row.size()) ? row[y] : 0.0;
}

namespace {

// Boundary-kernel table between every pair of space-time points in
// [s, t] x [0, W], with K(r,w -> r,w') = delta.
class KernelCache {
 public:
  KernelCache(const BoundaryWeights& bw, long s, long t, int W) : s_(s), t_(t), W_(W) {
    const auto zero = BulkWeights::zero();
    rows_.resize(static_cast<std::size_t>(t - s) * (W + 1));
    for (long r = s; r < t; ++r)
      for (int w = 0; w <= W; ++w) {
        auto& store = rows_[static_cast<std::size_t>(r - s) * (W + 1) + w];
        store.assign(static_cast<std::size_t>(t - r) * (W + 1), 0.0);
        std::vector<double> f(w + 1, 0.0), g;
        f[w] = 1.0;
        for (long r2 = r; r2 < t; ++r2) {
          step(f, g, r2, bw, zero, W);
          f.swap(g);
          for (int y = 0; y < static_cast<int>(f.size()); ++y)
            store[static_cast<std::size_t>(r2 - r) * (W + 1) + y] = f[y];
        }
      }
  }
  double operator()(long r, int w, long r2, int w2) const {
    if (r2 == r) return w == w2 ? 1.0 : 0.0;
    if (w2 > W_ || w > W_) return 0.0;
    const auto& store = rows_[static_cast<std::size_t>(r - s_) * (W_ + 1) + w];
    return store[static_cast<std::size_t>(r2 - r - 1) * (W_ + 1) + w2];
  }

 private:
  long s_, t_;
  int W_;
  std::vector<std::vector<double>> rows_;
};

struct ChaosWalker {
  const KernelCache& K;
  const BulkWeights& bulk;
  long s, t;
  int y, W;
  long double total = 0.0L;
  long cells = 0;

  void visit(long r_prev, int w_prev, long double acc, bool root) {
    double fin = K(r_prev, w_prev, t, y);
    if (fin != 0.0) {
      total += acc * fin;
      ++cells;
    }
    for (long r = root ? s : r_prev + 1; r < t; ++r)
      for (int w = 1; w <= W; ++w) {
        double k = K(r_prev, w_prev, r, w);
        if (k == 0.0) continue;
        visit(r, w, acc * k * bulk.beta() * bulk.omega(r, w), false);
      }
  }
};

}  // namespace

double modified_partition_chaos(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                                long t, int y, long* cells) {
  check_args(s, x, t, y);
  if (t - s > 12) throw InstanceTooLargeError("chaos series guarded to t - s <= 12");
  const int W = x + static_cast<int>(t - s);
  KernelCache K(w, s, t, W);
  ChaosWalker walker{K, bulk, s, t, y, W};
  walker.visit(s, x, 1.0L, true);
  if (cells) *cells = walker.cells;
  return static_cast<double>(walker.total);
}

double modified_partition_mild(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                               long t, int y) {
  check_args(s, x, t, y);
  const int W = x + static_cast<int>(t - s);
  KernelCache K(w, s, t, W);
  // Z[r - s][w] = z(s, x; r, w)
  std::vector<std::vector<double>> Z(t - s, std::vector<double>(W + 1, 0.0));
  Z[0][x] = 1.0;
  auto mild = [&](long r, int yy) {
    double v = K(s, x, r, yy);
    for (long r2 = s; r2 < r; ++r2)
      for (int ww = 1; ww <= W; ++ww) {
        double z = Z[r2 - s][ww];
        if (z == 0.0) continue;
        v += K(r2, ww, r, yy) * bulk.beta() * bulk.omega(r2, ww) * z;
      }
    return v;
  };
  for (long r = s + 1; r < t; ++r)
    for (int yy = 0; yy <= W; ++yy) Z[r - s][yy] = mild(r, yy);
  return y <= W ? mild(t, y) : 0.0;
}

// ---------------------------------------------------------- initial data

InitialDataResult partition_with_initial_data(InitialKind kind, const std::map<int, double>& init,
                                              const BoundaryWeights& w, const BulkWeights& bulk,
                                              long t, int y, int x_truncation) {
  if (t < 0 || y < 0 || x_truncation < 0) throw ParameterError("initial data: bad arguments");
  InitialDataResult res;
  res.truncation_warning = x_truncation < y + t;
  int max_x = 0;
  for (const auto& [x, v] : init) {
    if (x < 0 || !(v >= 0.0)) throw ParameterError("initial data must be nonnegative on x >= 0");
    if (kind == InitialKind::Vertical && x % 2 != 0)
      throw ParameterError("vertical initial data lives on even sites");
    if (x <= x_truncation) max_x = std::max(max_x, x);
  }
  const double growth = std::max({1.0, w.max_value(0, t), bulk.max_factor()});
  if (kind == InitialKind::Vertical) {
    std::vector<double> f(max_x + 1, 0.0);
    for (const auto& [x, v] : init) {
      if (x <= x_truncation) {
        f[x] = v;
      } else if (std::abs(x - y) <= t && t > 0) {
        double tau = static_cast<double>(t), d = x - y;
        res.tail_bound += v * std::pow(growth, tau) * 2.0 * kEnvelopeC / std::sqrt(tau) *
                          std::exp(-d * d / (kEnvelopeC * tau));
      }
    }
    f = propagate(std::move(f), 0, t, w, bulk, kNoCap);
    res.value = y < static_cast<int>(f.size()) ? f[y] : 0.0;
  } else {
    std::vector<double> f(1, 0.0), g;
    for (long r = 0; r <= t; ++r) {
      auto it = init.find(static_cast<int>(r));
      if (it != init.end() && r <= x_truncation) {
        if (static_cast<int>(f.size()) <= r) f.resize(r + 1, 0.0);
        f[r] += it->second;
      }
      if (r < t) {
        step(f, g, r, w, bulk, kNoCap);
        f.swap(g);
      }
    }
    for (const auto& [x, v] : init) {
      if (x <= x_truncation || x > t) continue;
      double tau = static_cast<double>(t - x), d = x - y;
      if (tau > 0 && std::abs(d) <= tau)
        res.tail_bound += v * std::pow(growth, tau) * 2.0 * kEnvelopeC / std::sqrt(tau) *
                          std::exp(-d * d / (kEnvelopeC * tau));
      else if (tau == 0 && x == y)
        res.tail_bound += v;
    }
    res.value = y < static_cast<int>(f.size()) ? f[y] : 0.0;
  }
  return res;
}

// ---------------------------------------------------------- scaled sheet

double ScalingParams::beta_n() const { return std::pow(n, -0.25) * beta / std::sqrt(2.0); }
double ScalingParams::boundary_level() const { return 1.0 - mu / std::sqrt(static_cast<double>(n)); }

BoundaryWeights sample_random_boundary(int n, double mu, long t0, long t1, RngStream& rng) {
  const double a = stationary::alpha_n(n);
  const double u = mu + 0.5;
  if (!(a + u > 0.0)) throw ParameterError("random boundary: need alpha_n + u > 0");
  return BoundaryWeights::sample_scaled_inverse_gamma((2.0 * a - 1.0) / 2.0, a + u, t0, t1, rng);
}

namespace {
long exact_int(double v, const char* what) {
  double r = std::round(v);
  if (std::fabs(v - r) > 1e-9 * std::max(1.0, std::fabs(v)))
    throw ParameterError(std::string(what) + " is not on the lattice");
  return static_cast<long>(r);
}
}  // namespace

double scaled_sheet(const ScalingParams& p, double S, double X, double T, double Y,
                    BoundaryMode mode, RngStream& rng, const SheetOptions& opt) {
  if (p.n < 1) throw ParameterError("scaled_sheet: n must be positive");
  if (!(T > S)) throw ParameterError("scaled_sheet: need S < T");
  if (X < 0 || Y < 0) throw ParameterError("scaled_sheet: X, Y must be nonnegative");
  const double sq = std::sqrt(static_cast<double>(p.n));
  const long s0 = exact_int(p.n * S, "nS"), t0 = exact_int(p.n * T, "nT");
  const double xs = sq * X, ys = sq * Y;

  std::vector<int> xcs;
  std::vector<double> xws;
  double xr = std::round(xs);
  if (std::fabs(xs - xr) < 1e-9) {
    xcs = {static_cast<int>(xr)};
    xws = {1.0};
  } else {
    if (!opt.interpolate) throw ParameterError("scaled_sheet: sqrt(n) X is not an integer");
    int lo = static_cast<int>(std::floor(xs));
    xcs = {lo, lo + 1};
    xws = {lo + 1 - xs, xs - lo};
  }
  const int x_hi = xcs.back();
  const int cap = static_cast<int>(std::min<double>(
      x_hi + static_cast<double>(t0 - s0),
      std::ceil(x_hi + opt.band_sigmas * std::sqrt(static_cast<double>(t0 - s0))) + 2));

  BoundaryWeights bw = mode == BoundaryMode::Deterministic
                           ? BoundaryWeights::constant(p.boundary_level())
                           : sample_random_boundary(p.n, p.mu, s0, t0, rng);
  BulkWeights bulk = BulkWeights::zero();
  const double bn = p.beta_n();
  if (bn != 0.0) {
    if (opt.bulk_law == BulkLaw::LogGamma) {
      // 1 + beta_n omega = 1 + beta (2 sqrt(n) IG(2 sqrt(n) + 1) - 1)
      if (p.beta > 1.0 || p.beta < 0.0)
        throw ParameterError("log-gamma bulk law needs 0 <= beta <= 1 (use Rademacher)");
      std::vector<double> om(static_cast<std::size_t>(t0 - s0) * (cap + 1), 0.0);
      const double omega_scale = std::sqrt(2.0) * std::pow(p.n, 0.25);
      for (long r = s0; r < t0; ++r)
        for (int x = 1; x <= cap; ++x)
          om[static_cast<std::size_t>(r - s0) * (cap + 1) + x] =
              omega_scale * (2.0 * sq * sample_inverse_gamma(2.0 * sq + 1.0, rng) - 1.0);
      bulk = BulkWeights(bn, s0, t0, cap, std::move(om));
    } else {
      if (bn > 1.0) throw ParameterError("Rademacher bulk needs beta_n <= 1");
      bulk = BulkWeights::sample_rademacher(bn, s0, t0, cap, rng);
    }
  }

  double value = 0.0;
  for (std::size_t i = 0; i < xcs.size(); ++i) {
    auto row = partition_row(bw, bulk, s0, xcs[i], t0, cap);
    auto read = [&](int y) {
      double v = y < static_cast<int>(row.size()) ? row[y] : 0.0;
      return 0.5 * sq * v * (y == 0 ? 2.0 : 1.0);
    };
    const long par = ((s0 + xcs[i] + t0) % 2 + 2) % 2;  // admissible y have this parity
    double yv;
    double yr = std::round(ys);
    if (std::fabs(ys - yr) < 1e-9 && (static_cast<long>(yr) % 2) == par) {
      yv = read(static_cast<int>(yr));
    } else {
      if (!opt.interpolate) throw ParameterError("scaled_sheet: (T,Y) off the parity lattice");
      long lo = static_cast<long>(std::floor(ys));
      if (((lo % 2) + 2) % 2 != par) --lo;
      if (lo < 0) {
        yv = read(static_cast<int>(lo + 2));
      } else {
        double wgt = (ys - lo) / 2.0;
        yv = (1.0 - wgt) * read(static_cast<int>(lo)) + wgt * read(static_cast<int>(lo + 2));
      }
    }
    value += xws[i] * yv;
  }
  return value;
}

// ---------------------------------------------------------- Robin kernel

namespace {
double gauss(double tau, double d) { return std::exp(-d * d / (2.0 * tau)) / std::sqrt(2.0 * M_PI * tau); }
}  // namespace

double robin_heat_kernel(double mu, double S, double X, double T, double Y) {
  if (!(T > S)) throw ParameterError("robin_heat_kernel: need T > S");
  const double tau = T - S;
  const double sum = X + Y;
  double val = gauss(tau, X - Y) + gauss(tau, sum);
  if (mu != 0.0) {
    const double z = (sum + mu * tau) / std::sqrt(tau);
    double tilt;
    if (z > -30.0)
      tilt = std::sqrt(tau) * gauss(tau, sum) * special::mills_ratio(z);
    else
      tilt = std::exp(mu * sum + 0.5 * mu * mu * tau) * special::normal_sf(z);
    val -= 2.0 * mu * tilt;
  }
  return val;
}

double robin_pde_residual(double mu, double S, double X, double T, double Y, double h) {
  auto P = [&](double t, double y) { return robin_heat_kernel(mu, S, X, t, y); };
  double dt = (P(T + h, Y) - P(T - h, Y)) / (2.0 * h);
  double dyy = (P(T, Y + h) - 2.0 * P(T, Y) + P(T, Y - h)) / (h * h);
  return dt - 0.5 * dyy;
}

double robin_boundary_residual(double mu, double S, double X, double T, double h) {
  auto P = [&](double y) { return robin_heat_kernel(mu, S, X, T, y); };
  double dy = (-3.0 * P(0.0) + 4.0 * P(h) - P(2.0 * h)) / (2.0 * h);
  return dy - mu * P(0.0);
}

double robin_mass(double mu, double S, double X, double T) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double y) { return robin_heat_kernel(mu, S, X, T, y); }, 1e-13);
}

double robin_first_moment(double mu, double S, double X, double T) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double y) { return y * robin_heat_kernel(mu, S, X, T, y); }, 1e-13);
}

// ---------------------------------------------------------- monotonicity

MonotoneReport monotone_coupling_check(const BoundaryWeights& low, const BoundaryWeights& mid,
                                       const BoundaryWeights& high, const BulkWeights& bulk,
                                       const MonotoneWindow& win) {
  for (long i = 0; i < win.t_max; ++i)
    if (!(low.at(i) <= mid.at(i) && mid.at(i) <= high.at(i)))
      throw ParameterError("monotone_coupling_check: boundaries are not ordered at time " +
                           std::to_string(i));
  MonotoneReport rep;
  for (long s = 0; s <= win.s_max; ++s)
    for (int x = 0; x <= win.x_max; ++x) {
      std::vector<double> fl(x + 1, 0.0), fm, fh, g;
      fl[x] = 1.0;
      fm = fl;
      fh = fl;
      for (long r = s; r < win.t_max; ++r) {
        step(fl, g, r, low, bulk, kNoCap);
        fl.swap(g);
        step(fm, g, r, mid, bulk, kNoCap);
        fm.swap(g);
        step(fh, g, r, high, bulk, kNoCap);
        fh.swap(g);
        for (std::size_t y = 0; y < fm.size(); ++y) {
          if (!parity_ok(s, x, r + 1, static_cast<int>(y))) continue;
          ++rep.checked;
          if (fl[y] > fm[y] || fm[y] > fh[y]) ++rep.violations;
          if (fl[y] < fm[y] && fm[y] < fh[y]) ++rep.strict;
        }
      }
    }
  return rep;
}

// ---------------------------------------------------------- tables

double KernelTable::at(long t, int y) const {
  if (t <= s || t - s > static_cast<long>(rows.size())) throw RangeError("KernelTable: time outside table");
  const auto& row = rows[t - s - 1];
  return y >= 0 && y < static_cast<int>(row.size()) ? row[y] : 0.0;
}

KernelTable kernel_table(const BoundaryWeights& w, long s, int x, long t_max) {
  check_args(s, x, t_max, 0);
  KernelTable tab{s, x, {}};
  std::vector<double> f(x + 1, 0.0), g;
  f[x] = 1.0;
  auto zero = BulkWeights::zero();
  for (long r = s; r < t_max; ++r) {
    step(f, g, r, w, zero, kNoCap);
    f.swap(g);
    tab.rows.push_back(f);
  }
  return tab;
}

void write_kernel_csv(std::ostream& os, const KernelTable& table) {
  os << "s,x,t,y,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t y = 0; y < table.rows[i].size(); ++y) {
      long t = table.s + static_cast<long>(i) + 1;
      if (!parity_ok(table.s, table.x, t, static_cast<int>(y))) continue;
      os << table.s << ',' << table.x << ',' << t << ',' << y << ',' << table.rows[i][y] << '\n';
    }
}

// ---------------------------------------------------------- second moment

double partition_second_moment(double gamma, double beta, double sigma2, long s, int x, long t,
                               int y, int max_x) {
  check_args(s, x, t, y);
  const int W = max_x < 0 ? x + static_cast<int>(t - s) : max_x;
  const std::size_t D = W + 1;
  std::vector<double> f(D * D, 0.0), g(D * D);
  f[x * D + x] = 1.0;
  const double pair = 1.0 + beta * beta * sigma2;
  // transition weights of a single walk from a
  auto moves = [&](int a, int* to, double* wt) {
    if (a == 0) {
      to[0] = 1;
      wt[0] = gamma;
      return 1;
    }
    to[0] = a - 1;
    wt[0] = 0.5;
    to[1] = a + 1;
    wt[1] = 0.5;
    return 2;
  };
  int lo_a = x, hi_a = x;
  for (long r = s; r < t; ++r) {
    std::fill(g.begin(), g.end(), 0.0);
    for (int a = std::max(0, lo_a); a <= std::min(W, hi_a); ++a)
      for (int b = std::max(0, lo_a); b <= std::min(W, hi_a); ++b) {
        double c = f[a * D + b];
        if (c == 0.0) continue;
        if (a == b && a > 0) c *= pair;
        int ta[2], tb[2];
        double wa[2], wb[2];
        int na = moves(a, ta, wa), nb = moves(b, tb, wb);
        for (int i = 0; i < na; ++i)
          for (int j = 0; j < nb; ++j)
            if (ta[i] <= W && tb[j] <= W) g[ta[i] * D + tb[j]] += c * wa[i] * wb[j];
      }
    f.swap(g);
    lo_a = std::max(0, lo_a - 1);
    hi_a = std::min(W, hi_a + 1);
  }
  return y <= W ? f[y * D + y] : 0.0;
}

}  // namespace polymer::she
