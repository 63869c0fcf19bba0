#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/lattice.hpp"
#include "polymer/stats.hpp"

using namespace polymer;
using namespace polymer::lattice;

namespace {
// Enumerates every up-right octant path from `a` to `b` and sums exp(sum of log-weights).
double enumerate(const WeightField& f, Site a, Site b, long* count = nullptr) {
  std::vector<double> terms;
  std::function<void(int, int, double)> go = [&](int i, int j, double acc) {
    acc += f.log_w(i, j);
    if (i == b.first && j == b.second) {
      terms.push_back(acc);
      return;
    }
    if (i + 1 <= b.first) go(i + 1, j, acc);
    if (j + 1 <= b.second && j + 1 <= i) go(i, j + 1, acc);
  };
  go(a.first, a.second, 0.0);
  if (count) *count = static_cast<long>(terms.size());
  if (terms.empty()) return kNegInf;
  double mx = terms[0];
  for (double t : terms) mx = std::max(mx, t);
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

OctantParams homogeneous(double ac, double a, int n) {
  OctantParams p;
  p.alpha_circ = ac;
  p.alphas.assign(n, a);
  return p;
}
}  // namespace

TEST_CASE("all-ones weights count paths") {
  auto f = constant_field(homogeneous(1.0, 1.0, 8), 0.0);
  auto g = partition_recurrence(f, 8, 8);
  CHECK(g.log_z(3, 2) == doctest::Approx(std::log(2.0)));
  for (int n = 1; n <= 8; ++n) CHECK(g.log_z(n, 1) == doctest::Approx(0.0));
  CHECK(partition_bruteforce(f, 2, 1) == doctest::Approx(0.0));
  CHECK(partition_bruteforce(f, 3, 2) == doctest::Approx(std::log(2.0)));
  CHECK(g.log_z(2, 3) == kNegInf);
  CHECK(g.log_z(9, 1) == kNegInf);
}

TEST_CASE("recurrence and brute force agree with an independent enumeration") {
  RngStream rng(3, 1);
  auto f = sample_weight_field(homogeneous(0.8, 1.1, 11), rng);
  auto g = partition_recurrence(f, 11, 11);
  for (int n = 1; n <= 11; ++n)
    for (int m = 1; m <= n && n + m <= 12; ++m) {
      const double e = enumerate(f, {1, 1}, {n, m});
      CHECK(std::abs(g.log_z(n, m) - e) <= 1e-10 * std::max(1.0, std::abs(e)));
      CHECK(std::abs(partition_bruteforce(f, n, m) - e) <= 1e-10 * std::max(1.0, std::abs(e)));
    }
}

TEST_CASE("pinned sites carry weight one") {
  RngStream rng(4, 1);
  auto p = one_row_params(1.5, 0.4, 6);
  auto f = sample_weight_field(p, rng);
  CHECK(f.pinned(1, 1));
  CHECK(f.log_w(1, 1) == 0.0);
  CHECK(p.theta(2, 1) == doctest::Approx(1.5 - 0.4));
  CHECK(p.theta(3, 3) == doctest::Approx(1.9));
  CHECK(p.theta(4, 3) == doctest::Approx(3.0));

  auto h = homogeneous(0.3, 1.2, 5);
  CHECK(h.theta(4, 2) == doctest::Approx(2.4));
  CHECK(h.theta(4, 4) == doctest::Approx(1.5));

  auto t1 = two_row_params(1.5, 0.5, -0.3, 6);
  CHECK(t1.exemptions.count({2, 1}) == 1);
  CHECK(t1.exemptions.count({1, 1}) == 0);
  auto t3 = two_row_params(1.5, 0.3, -0.6, 6);
  CHECK(t3.exemptions.count({1, 1}) == 1);
  CHECK_THROWS_AS(two_row_params(1.5, 0.3, 0.3, 6), ParameterError);
  CHECK_THROWS_AS(one_row_params(1.0, 1.0, 4), ParameterError);
}

TEST_CASE("point-to-point partition and composition over a cut") {
  RngStream rng(5, 1);
  auto f = sample_weight_field(homogeneous(1.0, 1.3, 9), rng);
  CHECK(point_to_point_partition(f, {4, 2}, {4, 2}) == doctest::Approx(f.log_w(4, 2)));
  CHECK(point_to_point_partition(f, {4, 2}, {3, 3}) == kNegInf);
  const Site end{8, 5};
  const double full = enumerate(f, {1, 1}, end);
  CHECK(point_to_point_partition(f, {1, 1}, end) == doctest::Approx(full).epsilon(1e-12));
  for (int c = 3; c <= 12; ++c) {
    double acc = kNegInf;
    for (int j = 1; j <= 5; ++j) {
      int i = c - j;
      if (i < j || i > 8) continue;
      double a = point_to_point_partition(f, {1, 1}, {i, j}), b = point_to_point_partition(f, {i, j}, end);
      if (a == kNegInf || b == kNegInf) continue;
      double t = a + b - f.log_w(i, j);
      acc = acc == kNegInf ? t : std::max(acc, t) + std::log1p(std::exp(-std::abs(acc - t)));
    }
    CHECK(acc == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("paths through a pinned near-divergent site") {
  // all paths to (m, m) pass (m, m-1); with its weight scaled by K the partition is
  // dominated by those paths as K grows
  auto f = constant_field(homogeneous(1.0, 1.0, 6), 0.0);
  const double K = 1e8;
  f.set_log_w(5, 4, std::log(K));
  long through = 0, all = 0;
  auto g = partition_recurrence(f, 6, 6);
  enumerate(constant_field(homogeneous(1.0, 1.0, 6), 0.0), {1, 1}, {5, 4}, &through);
  enumerate(constant_field(homogeneous(1.0, 1.0, 6), 0.0), {1, 1}, {5, 5}, &all);
  CHECK(through == all);
  CHECK(g.log_z(5, 5) == doctest::Approx(std::log(K * through)).epsilon(1e-12));
}

TEST_CASE("burke step") {
  auto t = burke_step(2.0, 1.0, 0.5);
  CHECK(t.U == doctest::Approx(1.5));
  CHECK(t.V == doctest::Approx(0.75));
  CHECK(t.w == doctest::Approx(2.0 / 3.0));
  auto s = burke_step(3.0, 3.0, 0.7);
  CHECK(s.U == doctest::Approx(1.4));
  CHECK(s.V == doctest::Approx(1.4));
  CHECK(s.w == doctest::Approx(1.5));
  auto l = burke_step_log(std::log(2.0), std::log(1.0), std::log(0.5));
  CHECK(std::exp(l.U) == doctest::Approx(1.5));
  CHECK(std::exp(l.w) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("burke fixed point in law") {
  const double a = 1.5, u = 0.3;
  RngStream rng(6, 1);
  std::vector<double> U, V, W;
  for (int i = 0; i < 100000; ++i) {
    auto t = burke_step(sample_inverse_gamma(a + u, rng), sample_inverse_gamma(a - u, rng),
                        sample_inverse_gamma(2 * a, rng));
    U.push_back(t.U);
    V.push_back(t.V);
    W.push_back(t.w);
  }
  CHECK(stats::ks_one_sample(stats::SampleSet("U", 6, U), [&](double x) { return inverse_gamma_cdf(a + u, x); }).pass());
  CHECK(stats::ks_one_sample(stats::SampleSet("V", 6, V), [&](double x) { return inverse_gamma_cdf(a - u, x); }).pass());
  CHECK(stats::ks_one_sample(stats::SampleSet("W", 6, W), [&](double x) { return inverse_gamma_cdf(2 * a, x); }).pass());
}

TEST_CASE("increments along a path") {
  auto f = constant_field(homogeneous(1.0, 1.0, 12), 0.0);
  auto g = partition_recurrence(f, 12, 12);
  DownRightPath single{{{0, 0}}};
  auto z = increments_along_path(g, single, 3);
  REQUIRE(z.size() == 1);
  CHECK(z[0] == 0.0);
  DownRightPath p{{{0, 0}, {1, 0}, {2, 0}, {2, -1}}};
  auto inc = increments_along_path(g, p, 3);
  long c0, c1, c2, c3;
  enumerate(f, {1, 1}, {3, 3}, &c0);
  enumerate(f, {1, 1}, {4, 3}, &c1);
  enumerate(f, {1, 1}, {5, 3}, &c2);
  enumerate(f, {1, 1}, {5, 2}, &c3);
  CHECK(inc[1] == doctest::Approx(std::log(double(c1) / c0)));
  CHECK(inc[2] == doctest::Approx(std::log(double(c2) / c0)));
  CHECK(inc[3] == doctest::Approx(std::log(double(c3) / c0)));
}

TEST_CASE("row-by-row sampling does not depend on the row cap") {
  auto p = homogeneous(1.0, 1.0, 8);
  RngStream a(9, 1), b(9, 1);
  auto full = sample_weight_field(p, a);
  auto cap = sample_weight_field(p, b, 3);
  for (int j = 1; j <= 3; ++j)
    for (int i = j; i <= 8; ++i) CHECK(full.log_w(i, j) == cap.log_w(i, j));
}

TEST_CASE("permutations") {
  OctantParams p = homogeneous(0.7, 1.0, 5);
  p.alphas = {0.4, 1.1, 1.6, 1.3, 1.3};
  auto q = permute_params(p, {3, 2, 1}, 3);
  CHECK(q.alphas[0] == 1.6);
  CHECK(q.alphas[2] == 0.4);
  CHECK_THROWS_AS(permute_params(p, {1, 2, 4, 3}, 3), ParameterError);
  auto s = permutation_symmetry_experiment(p, {1, 2, 3}, 3, {0, 1, 2}, 200, 42, 42);
  CHECK(s.original == s.permuted);
}
