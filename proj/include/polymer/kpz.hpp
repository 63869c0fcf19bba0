#pragma once
#include <cstdint>
#include <vector>

#include "polymer/lattice.hpp"
#include "polymer/rng.hpp"
#include "polymer/she.hpp"

namespace polymer::kpz {

// alpha_n = 1/2 + sqrt(n) and mu = u - 1/2 are derived, never stored.
struct KpzScalingConfig {
  int n = 256;
  double u = 1.0;
  double v = -0.5;
  std::vector<double> T_grid;
  std::vector<double> X_grid;
  double alpha() const;
  double mu() const { return u - 0.5; }
  void validate() const;
};

// H^(n)(T, X_i) for all X_i from one shared two-row grid. With `interpolate`,
// off-lattice X are handled by linear interpolation of e^H.
std::vector<double> scaled_stationary_process(const KpzScalingConfig& cfg, double T,
                                              const std::vector<double>& X_list, RngStream& rng,
                                              bool interpolate = false);

// Two-row field covering every point needed for tilde z(t, y), t <= t_max, y <= y_max.
lattice::WeightField sample_tilde_field(double alpha, double u, double v, int t_max, int y_max,
                                        RngStream& rng);
// log of ((2 alpha - 1)/2)^{2t+y} z^stat(t+y+2, t+2) / (varpi_11 varpi_22)
double log_tilde_z(const lattice::WeightField& field, double alpha, int t, int y);
// tilde z(x) := tilde z(0, x+1)
double log_tilde_z_initial(const lattice::WeightField& field, double alpha, int x);
// sum_{x=0}^{t+y-1} tilde z(x) tilde z_u(x+3, 3; t+y+2, t+2); t = 0 returns tilde z(y-1)
double log_tilde_z_decomposed(const lattice::WeightField& field, double alpha, int t, int y);
double normalized_tilde_z(double alpha, double u, double v, int t, int y, RngStream& rng);

// Framework weights read off rows >= 3 of a log-gamma field through
// (i, j) -> (r, w) = (i + j - 6, i - j): 1 + beta omega = varpi / varpi_bar,
// X(r) = varpi_ii / (2 varpi_bar), with beta = (2 alpha - 1)^{-1/2}.
struct FrameworkWeights {
  she::BoundaryWeights boundary;
  she::BulkWeights bulk;
};
double matching_beta(double alpha);
FrameworkWeights framework_from_field(const lattice::WeightField& field, double alpha, long t_max);
FrameworkWeights sample_framework_weights(double alpha, double u, long t_max, RngStream& rng);
// log of (2^{1{y=0}}/2) * endpoint factor * z^diag(2t+y-2, y) with initial data exp(log_init)
double log_matching_rhs(const FrameworkWeights& fw, const std::vector<double>& log_init, int t,
                        int y);

struct MomentLine {
  int order;
  double exact;
  double limit;       // Gaussian moment (N-1)!! for even N, 0 for odd N
  double scaled_gap;  // |exact - limit| * rate(n)^{-1}
};
struct BulkMomentReport {
  double n;
  double mean_exact;
  double var_exact;
  double var_formula;  // 2 sqrt(n) / (2 sqrt(n) - 1)
  std::vector<MomentLine> moments;  // N = 1..8, exact in 50-digit arithmetic
  std::vector<double> mc_moments;   // N = 1..8, empty if no draws requested
  std::vector<double> mc_se;
};
// omega^(n) = sqrt(2) n^{1/4} (2 sqrt(n) IG(2 sqrt(n) + 1) - 1)
double exact_bulk_moment(double n, int N);
BulkMomentReport bulk_weight_matching_moments(double n, std::size_t mc_draws = 0,
                                              std::uint64_t seed = 1);

struct BoundaryMomentReport {
  double n, u, mu;
  double mean_exact;       // sqrt(n) / (sqrt(n) + mu)
  double var_exact;        // n / ((sqrt(n)+mu)^2 (sqrt(n)+mu-1))
  double mu_recovered;     // sqrt(n) (1 - mean)
  double mean_gap_scaled;  // |sqrt(n)(1 - mean) - mu| * sqrt(n)
  double var_scaled;       // var * sqrt(n)
};
BoundaryMomentReport boundary_weight_matching_moments(double n, double u);

struct MatchingReport {
  std::vector<double> lhs;  // log tilde z(t, y), log-gamma side
  std::vector<double> rhs;  // log of the framework side
};
MatchingReport matching_identity_check(double alpha, double u, double v, int t, int y,
                                       std::size_t n_samples, std::uint64_t seed, int workers = 0);

}  // namespace polymer::kpz
