#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/stats.hpp"

using namespace polymer;

namespace {
template <class F>
stats::SampleSet draw(std::size_t n, std::uint64_t stream, F f) {
  RngStream rng(11, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = f(rng);
  return stats::SampleSet("d", 11, std::move(v));
}
}  // namespace

TEST_CASE("inverse-gamma moments") {
  CHECK(inverse_gamma_moment(3, 1) == doctest::Approx(0.5));
  CHECK(inverse_gamma_moment(4, 2) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(inverse_gamma_moment(1.5, 2), MomentDivergenceError);
  CHECK_THROWS_AS(InvGammaParam(0.0), ParameterError);
}

TEST_CASE("inverse-gamma log moments") {
  auto [m, v] = inverse_gamma_log_moments(1.0);
  CHECK(m == doctest::Approx(0.5772156649015329).epsilon(1e-13));
  CHECK(v == doctest::Approx(1.6449340668482264).epsilon(1e-13));
  for (double th : {0.7, 2.0, 10.0}) {
    auto [mm, vv] = inverse_gamma_log_moments(th);
    CHECK(mm == doctest::Approx(-boost::math::digamma(th)).epsilon(1e-12));
    CHECK(vv == doctest::Approx(boost::math::trigamma(th)).epsilon(1e-12));
    auto s = draw(400000, 10 + static_cast<std::uint64_t>(th * 10),
                  [&](RngStream& r) { return log_sample_inverse_gamma(th, r); });
    CHECK(stats::moment_compare(s, 1, mm).pass);
    double mean = 0, ss = 0;
    for (double x : s.values()) mean += x;
    mean /= s.size();
    std::vector<double> c;
    for (double x : s.values()) c.push_back((x - mean) * (x - mean));
    CHECK(stats::moment_compare(stats::SampleSet("c", 0, c), 1, vv).pass);
    (void)ss;
  }
  auto [big, _] = inverse_gamma_log_moments(1e6);
  CHECK(std::abs(big + std::log(1e6)) < 1e-6);
}

TEST_CASE("inverse-gamma sampler") {
  auto s = draw(1000000, 1, [](RngStream& r) { return sample_inverse_gamma(3.0, r); });
  CHECK(stats::moment_compare(s, 1, 0.5).pass);
  auto s4 = draw(1000000, 2, [](RngStream& r) { return sample_inverse_gamma(4.0, r); });
  CHECK(stats::moment_compare(s4, 2, 1.0 / 6.0).pass);
  auto ks = stats::ks_one_sample(s, [](double x) { return inverse_gamma_cdf(3.0, x); });
  CHECK(ks.pass());
}

TEST_CASE("log sampler is the log of the sampler on paired streams") {
  RngStream a(5, 9), b(5, 9);
  for (int i = 0; i < 1000; ++i) {
    double th = 0.3 + 0.01 * i;
    CHECK(std::exp(log_sample_inverse_gamma(th, a)) == doctest::Approx(sample_inverse_gamma(th, b)).epsilon(1e-12));
  }
}

TEST_CASE("log-gamma draws stay finite for tiny shapes") {
  RngStream r(3, 3);
  for (int i = 0; i < 10000; ++i) CHECK(std::isfinite(log_sample_gamma(1e-3, r)));
}

TEST_CASE("other samplers") {
  auto g = draw(1000000, 3, [](RngStream& r) { return sample_gamma(2.5, r); });
  CHECK(stats::moment_compare(g, 1, 2.5).pass);
  CHECK(stats::ks_one_sample(g, [](double x) { return gamma_cdf(2.5, x); }).pass());
  auto bp = draw(500000, 4, [](RngStream& r) { return sample_beta_prime(2.0, 4.0, r); });
  CHECK(stats::moment_compare(bp, 1, 2.0 / 3.0).pass);
  CHECK(stats::ks_one_sample(bp, [](double x) { return beta_prime_cdf(2.0, 4.0, x); }).pass());
  auto geo = draw(500000, 5, [](RngStream& r) { return static_cast<double>(sample_geometric(0.5, r)); });
  CHECK(stats::moment_compare(geo, 1, 1.0).pass);
  CHECK(stats::ks_one_sample(geo, [](double x) { return geometric_cdf(0.5, x); },
                             [](double x) { return geometric_cdf(0.5, std::ceil(x) - 1.0); })
            .pass());
  auto ex = draw(500000, 6, [](RngStream& r) { return sample_exponential(2.0, r); });
  CHECK(stats::moment_compare(ex, 1, 0.5).pass);
  CHECK(stats::ks_one_sample(ex, [](double x) { return exponential_cdf(2.0, x); }).pass());
}

TEST_CASE("CDF edge cases") {
  CHECK(inverse_gamma_cdf(2.0, 0.0) == 0.0);
  CHECK(geometric_cdf(0.5, 0.0) == doctest::Approx(0.5));
  CHECK(geometric_cdf(0.5, -1.0) == 0.0);
  CHECK(beta_prime_cdf(1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(exponential_cdf(2.0, std::log(2.0) / 2.0) == doctest::Approx(0.5));
}
