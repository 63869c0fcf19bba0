#pragma once
#include <cmath>
#include <vector>

#include "polymer/rng.hpp"

namespace polymer::stationary {

// alpha > 0, u, v > -alpha, v < alpha, v <= u; u = v drops the 1/varpi term.
struct DiscreteStationaryParams {
  double alpha = 1.0;
  double u = 0.0;
  double v = 0.0;
  void validate() const;
};

// Brownian drifts -v (B1) and v (B2); varpi ~ IG(u - v); u >= v.
struct ContinuumStationaryParams {
  double u = 0.0;
  double v = 0.0;
  double delta = 1.0 / 1024.0;
  double x_max = 2.0;
  void validate() const;
  int steps() const;
};

// coords are k (discrete) or X (continuum); aux carries a coupled reference
// path when the sampler has one (B2 for H_{u,v}, log r2 for z_{u,v}).
struct StationaryPath {
  std::vector<double> coords;
  std::vector<double> log_values;
  std::vector<double> aux;
};

StationaryPath sample_zuv_path(const DiscreteStationaryParams& params, int k_max, RngStream& rng);

struct PraPath {
  StationaryPath z;            // log p(k) + log a(k)
  std::vector<double> log_p;   // k = 0..k_max
  std::vector<double> log_r;   // k = 1..k_max stored at index k (index 0 unused)
  std::vector<double> log_a;   // k = 0..k_max
};
PraPath sample_zuv_pra(const DiscreteStationaryParams& params, int k_max, RngStream& rng);

StationaryPath sample_Huv_path(const ContinuumStationaryParams& params, RngStream& rng);
StationaryPath sample_Huv_pitman(const ContinuumStationaryParams& params, RngStream& rng);

// H_{u,v} at the requested X values from one Brownian path, evaluated with the
// Riemann step delta (fine) and with step 2*delta on the same path (coarse).
struct HuvPoints {
  std::vector<double> fine;
  std::vector<double> coarse;
};
HuvPoints sample_Huv_points(const ContinuumStationaryParams& params, const std::vector<double>& xs,
                            RngStream& rng);
HuvPoints sample_Huv_pitman_points(const ContinuumStationaryParams& params,
                                   const std::vector<double>& xs, RngStream& rng);

inline double alpha_n(double n) { return 0.5 + std::sqrt(n); }

// log of sqrt(n)^{sqrt(n) X} z_{u,v;alpha_n}(sqrt(n) X) jointly over the grid.
StationaryPath scaled_initial_data(int n, double u, double v, const std::vector<double>& X_grid,
                                   RngStream& rng);

// E[(e^{H^(n)(0,X)})^2] from the M_k(+-v) expansion.
double second_moment_analytic(int n, double u, double v, double X);

}  // namespace polymer::stationary
