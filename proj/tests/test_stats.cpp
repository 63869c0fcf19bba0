#include <cmath>
#include <vector>

#include "doctest.h"
#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/stats.hpp"

using namespace polymer;
using stats::SampleSet;

namespace {
SampleSet normals(std::uint64_t seed, std::size_t n, double shift = 0.0) {
  RngStream r(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = r.normal() + shift;
  return SampleSet("n", seed, std::move(v));
}
}  // namespace

TEST_CASE("kolmogorov distribution") {
  CHECK(stats::kolmogorov_critical(1e-3) == doctest::Approx(1.9495).epsilon(1e-4));
  CHECK(stats::kolmogorov_sf(stats::kolmogorov_critical(0.05)) == doctest::Approx(0.05));
  CHECK(stats::ks_threshold(1e5) == doctest::Approx(1.94947 / std::sqrt(1e5)).epsilon(1e-4));
}

TEST_CASE("two-sample KS degenerate cases") {
  auto a = normals(1, 1000);
  CHECK(stats::ks_two_sample(a, a).statistic == 0.0);
  SampleSet lo("lo", 0, {1, 2, 3}), hi("hi", 0, {4, 5, 6});
  CHECK(stats::ks_two_sample(lo, hi).statistic == 1.0);
  CHECK_THROWS_AS(SampleSet("bad", 0, {1.0, NAN}), ParameterError);
}

TEST_CASE("two-sample KS calibration at the 0.1% level") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 200; ++s)
    rejections += !stats::ks_two_sample(normals(2 * s + 100, 20000), normals(2 * s + 101, 20000)).pass();
  // expected 0.2 rejections; 3 or more has probability ~1e-3
  CHECK(rejections <= 2);
  CHECK_FALSE(stats::ks_two_sample(normals(1, 100000), normals(2, 100000, 0.05)).pass());
}

TEST_CASE("one-sample KS") {
  auto a = normals(5, 100000);
  auto r = stats::ks_one_sample(a, special::normal_cdf);
  CHECK(r.pass());
  CHECK(r.statistic < 5.0 / std::sqrt(1e5));
  CHECK_FALSE(stats::ks_one_sample(a, [](double x) { return special::normal_cdf(x - 0.05); }).pass());
  RngStream rng(6, 0);
  std::vector<double> v(100000);
  for (auto& x : v) x = sample_inverse_gamma(3.0, rng);
  CHECK(stats::ks_one_sample(SampleSet("ig", 6, v), [](double x) { return special::gamma_q(3.0, 1.0 / x); }).pass());
}

TEST_CASE("moment_compare") {
  SampleSet c("c", 0, std::vector<double>(100, 2.5));
  auto m = stats::moment_compare(c, 1, 2.5);
  CHECK(m.pass);
  CHECK(m.estimate == 2.5);
  CHECK(m.se == 0.0);
  RngStream rng(7, 0);
  std::vector<double> v(1000000);
  for (auto& x : v) x = sample_inverse_gamma(4.0, rng);
  CHECK(stats::moment_compare(SampleSet("ig", 7, v), 2, 1.0 / 6.0).pass);
  for (auto& x : v) x = sample_inverse_gamma(2.5, rng);
  CHECK(stats::moment_compare(SampleSet("ig", 7, v), 3, 0.0).se_blowup);
}

TEST_CASE("empirical CDF dump") {
  auto d = stats::empirical_cdf_dump(SampleSet("e", 0, {3, 1, 2, 2}));
  REQUIRE(d.size() == 3);
  CHECK(d[0].first == 1);
  CHECK(d[0].second == doctest::Approx(0.25));
  CHECK(d[1].second == doctest::Approx(0.75));
  CHECK(d[2].second == doctest::Approx(1.0));
}

TEST_CASE("suite multiplicity policy") {
  stats::KsResult ok{0.001, 1e5, 1, 0.006}, marginal{0.0065, 1e5, 0, 0.006}, bad{0.01, 1e5, 0, 0.006};
  CHECK(stats::evaluate_suite({ok, ok}) == stats::SuiteVerdict::Pass);
  CHECK(stats::evaluate_suite({ok, marginal}) == stats::SuiteVerdict::MarginalRetry);
  CHECK(stats::evaluate_suite({marginal, marginal}) == stats::SuiteVerdict::Fail);
  CHECK(stats::evaluate_suite({ok, bad}) == stats::SuiteVerdict::Fail);

  int calls = 0;
  auto run = stats::run_suite(
      [&](std::uint64_t s) {
        ++calls;
        return s == 1 ? std::vector<stats::KsResult>{marginal} : std::vector<stats::KsResult>{ok};
      },
      1);
  CHECK(calls == 2);
  CHECK(run.retried);
  CHECK(run.pass);
  CHECK(run.seed_used == mix_seed(1, 0x7265747279));
  auto fail = stats::run_suite([&](std::uint64_t) { return std::vector<stats::KsResult>{marginal}; }, 1);
  CHECK_FALSE(fail.pass);
}
