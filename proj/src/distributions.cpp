#include "polymer/distributions.hpp"

#include <cmath>
#include <string>

#include "polymer/errors.hpp"
#include "polymer/special_functions.hpp"

namespace polymer {

namespace {
void require_positive(double a, const char* what) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw ParameterError(std::string(what) + ": parameter must be positive and finite, got " +
                         std::to_string(a));
}

// Marsaglia-Tsang for a >= 1; returns log of the draw.
double log_gamma_mt(double a, RngStream& rng) {
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}
}  // namespace

InvGammaParam::InvGammaParam(double t) : theta(t) { require_positive(t, "InvGammaParam"); }

double log_sample_gamma(double a, RngStream& rng) {
  require_positive(a, "gamma");
  if (a >= 1.0) return log_gamma_mt(a, rng);
  // boosting: G_a = G_{a+1} U^{1/a}
  double lg = log_gamma_mt(a + 1.0, rng);
  return lg + std::log(rng.uniform()) / a;
}

double sample_gamma(double a, RngStream& rng) { return std::exp(log_sample_gamma(a, rng)); }

double sample_inverse_gamma(double theta, RngStream& rng) {
  require_positive(theta, "inverse_gamma");
  return 1.0 / sample_gamma(theta, rng);
}

double log_sample_inverse_gamma(double theta, RngStream& rng) {
  require_positive(theta, "inverse_gamma");
  return -log_sample_gamma(theta, rng);
}

double sample_beta_prime(double a, double b, RngStream& rng) {
  require_positive(a, "beta_prime a");
  require_positive(b, "beta_prime b");
  double la = log_sample_gamma(a, rng);
  double lb = log_sample_gamma(b, rng);
  return std::exp(la - lb);
}

std::int64_t sample_geometric(double q, RngStream& rng) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("geometric: q must lie in (0,1)");
  // P(g >= k) = q^k, so g = floor(log U / log q).
  return static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / std::log(q)));
}

double sample_exponential(double a, RngStream& rng) {
  require_positive(a, "exponential");
  return -std::log(rng.uniform()) / a;
}

double inverse_gamma_moment(double theta, int k) {
  require_positive(theta, "inverse_gamma_moment");
  if (k < 1) throw ParameterError("inverse_gamma_moment: k must be a positive integer");
  if (theta <= k)
    throw MomentDivergenceError("inverse_gamma_moment: E[X^" + std::to_string(k) +
                                "] diverges for theta=" + std::to_string(theta));
  double denom = 1.0;
  for (int j = 1; j <= k; ++j) denom *= theta - j;
  return 1.0 / denom;
}

std::pair<double, double> inverse_gamma_log_moments(double theta) {
  require_positive(theta, "inverse_gamma_log_moments");
  return {-special::digamma(theta), special::trigamma(theta)};
}

double gamma_cdf(double a, double x) { return special::gamma_p(a, x); }

double inverse_gamma_cdf(double theta, double x) {
  if (x <= 0.0) return 0.0;
  return special::gamma_q(theta, 1.0 / x);
}

double beta_prime_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  return special::beta_inc(a, b, x / (1.0 + x));
}

double geometric_cdf(double q, double k) {
  if (k < 0.0) return 0.0;
  return 1.0 - std::pow(q, std::floor(k) + 1.0);
}

double exponential_cdf(double a, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-a * x); }

}  // namespace polymer
