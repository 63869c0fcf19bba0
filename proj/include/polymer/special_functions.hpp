#pragma once

namespace polymer::special {

double digamma(double x);
double trigamma(double x);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b).
double beta_inc(double a, double b, double x);

double normal_cdf(double x);
// Upper tail Q(z) = 1 - Phi(z), accurate far into the tail.
double normal_sf(double z);
// Mills ratio Q(z)/phi(z).
double mills_ratio(double z);

// log(exp(a) + exp(b)), tolerant of -inf.
double logaddexp(double a, double b);

}  // namespace polymer::special
