#include <cmath>
#include <vector>

#include "doctest.h"
#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/stationary.hpp"
#include "polymer/stats.hpp"

using namespace polymer;
using namespace polymer::stationary;

namespace {
stats::SampleSet at(const std::vector<StationaryPath>& paths, std::size_t k) {
  std::vector<double> v;
  for (const auto& p : paths) v.push_back(p.log_values[k]);
  return stats::SampleSet("k", 0, v);
}

double ig_moment(double th, int k) {
  double d = 1.0;
  for (int i = 1; i <= k; ++i) d *= th - i;
  return 1.0 / d;
}

// E[z(K)^2] by expanding z(K) = r2(K) + (1/varpi) sum_l r1(l) r2(K)/r2(l-1) into
// monomials in the independent zeta_i ~ IG(a+v), xi_i ~ IG(a-v) and counting exponents.
double second_moment_by_monomials(double a, double u, double v, int K) {
  const double e[3] = {1.0, u - v, (u - v) * (u - v + 1.0)};
  double total = 0.0;
  for (int l = 0; l <= K; ++l)
    for (int l2 = 0; l2 <= K; ++l2) {
      double term = e[(l > 0) + (l2 > 0)];
      for (int i = 1; i <= K; ++i) {
        int ez = (l > 0 && i <= l) + (l2 > 0 && i <= l2);
        int ex = (i >= std::max(l, 1)) + (i >= std::max(l2, 1));
        term *= ig_moment(a + v, ez) * ig_moment(a - v, ex);
      }
      total += term;
    }
  return total;
}
}  // namespace

TEST_CASE("z_{u,v} at k = 0 is one") {
  RngStream r(1, 1);
  auto p = sample_zuv_path({1.5, 0.3, -0.2}, 5, r);
  CHECK(p.log_values[0] == 0.0);
  CHECK(p.log_values.size() == 6);
}

TEST_CASE("z_{u,v} matches its defining sum on paired streams") {
  const double a = 1.5, u = 0.4, v = -0.2;
  RngStream r(2, 1), q(2, 1);
  for (int rep = 0; rep < 50; ++rep) {
    auto p = sample_zuv_path({a, u, v}, 8, r);
    const double varpi = sample_inverse_gamma(u - v, q);
    double r1 = 1.0, r2 = 1.0, sum = 0.0;
    for (int k = 1; k <= 8; ++k) {
      r1 *= sample_inverse_gamma(a + v, q);
      sum += r1 / r2;
      r2 *= sample_inverse_gamma(a - v, q);
      CHECK(p.log_values[k] == doctest::Approx(std::log(r2 * (1.0 + sum / varpi))).epsilon(1e-10));
      CHECK(p.log_values[k] >= p.aux[k]);
    }
  }
}

TEST_CASE("z_{u,u} is a multiplicative random walk") {
  const double a = 1.5, u = 0.3;
  RngStream r(3, 1);
  std::vector<double> ratio;
  for (int i = 0; i < 100000; ++i) {
    auto p = sample_zuv_path({a, u, u}, 3, r);
    ratio.push_back(std::exp(p.log_values[3] - p.log_values[2]));
  }
  CHECK(stats::ks_one_sample(stats::SampleSet("r", 3, ratio), [&](double x) { return inverse_gamma_cdf(a - u, x); })
            .pass());
}

TEST_CASE("p/r/a construction agrees in law with the direct sampler") {
  const DiscreteStationaryParams p{1.5, 0.8, -0.4};
  RngStream r(4, 1), q(4, 2);
  std::vector<StationaryPath> direct, pra;
  for (int i = 0; i < 60000; ++i) {
    direct.push_back(sample_zuv_path(p, 8, r));
    pra.push_back(sample_zuv_pra(p, 8, q).z);
  }
  for (std::size_t k : {1u, 4u, 8u}) CHECK(stats::ks_two_sample(at(direct, k), at(pra, k)).pass());
}

TEST_CASE("parameter validation") {
  RngStream r(5, 1);
  CHECK_THROWS_AS(sample_zuv_path({1.0, 0.0, 0.5}, 3, r), ParameterError);
  CHECK_THROWS_AS(sample_zuv_path({1.0, 0.0, -1.0}, 3, r), ParameterError);
  CHECK_THROWS_AS(second_moment_analytic(4, 1.0, -0.5, 0.5), MomentDivergenceError);
}

TEST_CASE("H_{u,u} is Brownian with drift v") {
  ContinuumStationaryParams p{-0.3, -0.3, 1.0 / 256, 1.0};
  RngStream r(6, 1);
  std::vector<double> end, incs;
  for (int i = 0; i < 20000; ++i) {
    auto h = sample_Huv_path(p, r);
    end.push_back(h.log_values.back());
    incs.push_back((h.log_values[1] - h.log_values[0]) / std::sqrt(p.delta));
  }
  CHECK(stats::ks_one_sample(stats::SampleSet("H", 6, end), [](double x) { return 0.5 * std::erfc(-(x + 0.3) / std::sqrt(2.0)); })
            .pass());
  CHECK(stats::ks_one_sample(stats::SampleSet("i", 6, incs), [&](double x) {
          return 0.5 * std::erfc(-(x + 0.3 * std::sqrt(p.delta)) / std::sqrt(2.0));
        }).pass());
}

TEST_CASE("H_{u,v} dominates B2 pathwise and both samplers agree in law") {
  ContinuumStationaryParams p{1.0, -0.5, 1.0 / 256, 1.0};
  RngStream r(7, 1), q(7, 2);
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    auto h = sample_Huv_path(p, r);
    for (std::size_t k = 0; k < h.log_values.size(); ++k) REQUIRE(h.log_values[k] >= h.aux[k] - 1e-12);
    a.push_back(h.log_values.back());
    b.push_back(sample_Huv_pitman(p, q).log_values.back());
  }
  CHECK(stats::ks_two_sample(stats::SampleSet("a", 7, a), stats::SampleSet("b", 7, b)).pass());
}

TEST_CASE("fine and coarse Riemann sums share one path") {
  ContinuumStationaryParams p{1.0, -0.5, 1.0 / 1024, 2.0};
  RngStream r(8, 1);
  auto pts = sample_Huv_points(p, {0.5, 1.0, 2.0}, r);
  REQUIRE(pts.fine.size() == 3);
  REQUIRE(pts.coarse.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pts.fine[i] - pts.coarse[i]) < 0.05);
}

TEST_CASE("scaled initial data") {
  RngStream r(9, 1);
  auto d = scaled_initial_data(64, 1.0, -0.5, {0.0, 0.5, 1.0}, r);
  CHECK(d.log_values[0] == 0.0);
  CHECK(d.log_values.size() == 3);
  CHECK_THROWS_AS(scaled_initial_data(64, 1.0, -0.5, {0.3}, r), ParameterError);
}

TEST_CASE("second moment against a monomial expansion") {
  CHECK(second_moment_analytic(64, 1.0, -0.5, 0.0) == 1.0);
  for (auto [n, u, v, X] : std::vector<std::tuple<int, double, double, double>>{
           {64, 1.0, -0.5, 0.5}, {256, 1.0, -0.5, 0.5}, {256, 2.0, -1.0, 0.25}, {16, 0.5, -0.5, 1.0}, {100, 0.7, 0.3, 0.6}}) {
    const double s = std::sqrt(double(n)), a = alpha_n(n);
    const int K = static_cast<int>(std::lround(X * s));
    const double oracle = std::pow(double(n), K) * second_moment_by_monomials(a, u, v, K);
    CHECK(second_moment_analytic(n, u, v, X) == doctest::Approx(oracle).epsilon(1e-10));
  }
  const int n = 64;
  const double a = alpha_n(n), v = -0.4;
  CHECK(second_moment_analytic(n, v, v, 0.5) == doctest::Approx(std::pow(n * ig_moment(a - v, 2), 4)).epsilon(1e-12));
}

TEST_CASE("second moment against Monte Carlo") {
  const int n = 64;
  RngStream r(10, 1);
  std::vector<double> v;
  for (int i = 0; i < 400000; ++i) v.push_back(std::exp(2.0 * scaled_initial_data(n, 1.0, -0.5, {0.5}, r).log_values[0]));
  CHECK(stats::moment_compare(stats::SampleSet("m", 10, v), 1, second_moment_analytic(n, 1.0, -0.5, 0.5)).pass);
}
