#pragma once
#include <cstdint>
#include <utility>

#include "polymer/rng.hpp"

namespace polymer {

// Shape parameter of Gamma^{-1}(theta): density x^{-theta-1} e^{-1/x} / Gamma(theta).
struct InvGammaParam {
  double theta;
  explicit InvGammaParam(double t);
};

// --- samplers -------------------------------------------------------------
double sample_gamma(double a, RngStream& rng);
// log of a Gamma(a) draw, computed without underflow for tiny shapes.
double log_sample_gamma(double a, RngStream& rng);
double sample_inverse_gamma(double theta, RngStream& rng);
double log_sample_inverse_gamma(double theta, RngStream& rng);
double sample_beta_prime(double a, double b, RngStream& rng);
std::int64_t sample_geometric(double q, RngStream& rng);
double sample_exponential(double a, RngStream& rng);

// --- exact formulas -------------------------------------------------------
// E[X^k] = 1/((theta-1)...(theta-k)) for X ~ IG(theta); theta <= k throws.
double inverse_gamma_moment(double theta, int k);
// (E[log X], var(log X)) = (-psi(theta), psi'(theta)).
std::pair<double, double> inverse_gamma_log_moments(double theta);

// --- CDFs ------------------------------------------------------------------
double gamma_cdf(double a, double x);
double inverse_gamma_cdf(double theta, double x);
double beta_prime_cdf(double a, double b, double x);
double geometric_cdf(double q, double k);  // P(g <= floor(k))
double exponential_cdf(double a, double x);

}  // namespace polymer
