#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "polymer/rng.hpp"

namespace polymer::she {

// Boundary weights X(i), collected whenever the walk sits at 0 at time i.
class BoundaryWeights {
 public:
  static BoundaryWeights constant(double gamma);
  static BoundaryWeights from_values(long first_time, std::vector<double> values);
  // scale * IG(theta), i.i.d. over times [t0, t1)
  static BoundaryWeights sample_scaled_inverse_gamma(double scale, double theta, long t0, long t1,
                                                     RngStream& rng);

  double at(long i) const;
  bool covers(long s, long t) const;  // all of [s, t)
  bool is_constant() const { return constant_; }
  double max_value(long s, long t) const;

 private:
  bool constant_ = true;
  double gamma_ = 1.0;
  long first_ = 0;
  std::vector<double> values_;
};

// Bulk disorder omega(r, x) on times [t0, t1) and positions 0..max_x;
// omega(r, 0) = 0 always. The zero field needs no storage.
class BulkWeights {
 public:
  static BulkWeights zero(double beta = 0.0);
  BulkWeights(double beta, long t0, long t1, int max_x, std::vector<double> omega);
  // omega = (scale * IG(theta) - 1) / beta, so 1 + beta omega ~ scale IG(theta)
  static BulkWeights sample_factor_law(double beta, double scale, double theta, long t0, long t1,
                                       int max_x, RngStream& rng);
  static BulkWeights sample_rademacher(double beta, long t0, long t1, int max_x, RngStream& rng);

  double beta() const { return beta_; }
  bool is_zero() const { return zero_; }
  double omega(long r, int x) const;
  double factor(long r, int x) const { return 1.0 + beta_ * omega(r, x); }
  bool covers(long s, long t, int max_x) const;
  int max_x() const { return max_x_; }
  double max_factor() const;
  void validate() const;  // 1 + beta omega >= 0

 private:
  bool zero_ = true;
  double beta_ = 0.0;
  long t0_ = 0, t1_ = 0;
  int max_x_ = 0;
  std::vector<double> omega_;
};

struct KernelValue {
  double value = 0.0;
  bool off_parity = false;
};

KernelValue reflected_kernel(long s, int x, long t, int y);
KernelValue boundary_kernel(const BoundaryWeights& w, long s, int x, long t, int y);

// sum over paths of prod_{r=s}^{t-1} (1 + beta omega(r, S_r)) under P_X
double modified_partition_direct(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                                 long t, int y);
// chaos expansion; guarded to t - s <= 12. `cells` receives the number of
// (k, r, w) tuples with nonzero kernel product and positive positions.
double modified_partition_chaos(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                                long t, int y, long* cells = nullptr);
double modified_partition_mild(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x,
                               long t, int y);

// Row of z(s, x; t, .) for positions 0..x+(t-s), optionally capped at max_x.
std::vector<double> partition_row(const BoundaryWeights& w, const BulkWeights& bulk, long s,
                                  int x, long t, int max_x = -1);

enum class InitialKind { Vertical, Diagonal };
struct InitialDataResult {
  double value = 0.0;
  double tail_bound = 0.0;       // envelope bound on the discarded x > truncation terms
  bool truncation_warning = false;
};
InitialDataResult partition_with_initial_data(InitialKind kind, const std::map<int, double>& init,
                                              const BoundaryWeights& w, const BulkWeights& bulk,
                                              long t, int y, int x_truncation);

// Envelope constant for sqrt(n)/2 p 2^{1{Y=0}} <= C tau^{-1/2} exp(-d^2/(C tau)),
// frozen from the calibration run documented in the README.
constexpr double kEnvelopeC = 3.0;

struct ScalingParams {
  int n = 256;
  double mu = 0.0;
  double beta = 0.0;
  double beta_n() const;          // n^{-1/4} beta / sqrt(2)
  double boundary_level() const;  // 1 - n^{-1/2} mu
};

enum class BoundaryMode { Deterministic, Random };
enum class BulkLaw { LogGamma, Rademacher };
struct SheetOptions {
  BulkLaw bulk_law = BulkLaw::LogGamma;
  bool interpolate = true;
  double band_sigmas = 10.0;  // DP window: x + band_sigmas sqrt(n (T-S))
};
double scaled_sheet(const ScalingParams& p, double S, double X, double T, double Y,
                    BoundaryMode mode, RngStream& rng, const SheetOptions& opt = {});

// Random boundary law ((2 alpha_n - 1)/2) IG(alpha_n + u), u = mu + 1/2.
BoundaryWeights sample_random_boundary(int n, double mu, long t0, long t1, RngStream& rng);

double robin_heat_kernel(double mu, double S, double X, double T, double Y);
// (d/dT - 1/2 d^2/dY^2) P by central differences
double robin_pde_residual(double mu, double S, double X, double T, double Y, double h);
// d/dY P(Y=0) - mu P(Y=0), second-order one-sided difference
double robin_boundary_residual(double mu, double S, double X, double T, double h);
// int_0^inf P dY
double robin_mass(double mu, double S, double X, double T);
// first moment int_0^inf Y P dY
double robin_first_moment(double mu, double S, double X, double T);

struct MonotoneWindow {
  long s_max = 4;
  int x_max = 4;
  long t_max = 12;
};
struct MonotoneReport {
  long checked = 0;
  long violations = 0;
  long strict = 0;  // points where low < mid < high strictly
};
MonotoneReport monotone_coupling_check(const BoundaryWeights& low, const BoundaryWeights& mid,
                                       const BoundaryWeights& high, const BulkWeights& bulk,
                                       const MonotoneWindow& window);

// p(s, x; t, y) for t in (s, t_max]; rows[t - s - 1][y]
struct KernelTable {
  long s = 0;
  int x = 0;
  std::vector<std::vector<double>> rows;
  double at(long t, int y) const;
};
KernelTable kernel_table(const BoundaryWeights& w, long s, int x, long t_max);
void write_kernel_csv(std::ostream& os, const KernelTable& table);

// E[z(s,x;t,y)^2] for i.i.d. mean-zero bulk with variance sigma2 and constant boundary gamma.
double partition_second_moment(double gamma, double beta, double sigma2, long s, int x, long t,
                               int y, int max_x = -1);

}  // namespace polymer::she
