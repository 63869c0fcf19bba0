#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "polymer/errors.hpp"
#include "polymer/she.hpp"

using namespace polymer;
using namespace polymer::she;

namespace {
struct Path {
  std::vector<int> pos;  // positions at times s..t
  double weight;         // product of transition weights
};

// Every path of the weighted reflected walk from (s, x) over t - s steps.
std::vector<Path> all_paths(const BoundaryWeights& w, long s, int x, long t) {
  std::vector<Path> out;
  std::function<void(long, std::vector<int>&, double)> go = [&](long r, std::vector<int>& pos, double wt) {
    if (r == t) {
      out.push_back({pos, wt});
      return;
    }
    int cur = pos.back();
    if (cur == 0) {
      pos.push_back(1);
      go(r + 1, pos, wt * w.at(r));
      pos.pop_back();
      return;
    }
    for (int d : {-1, 1}) {
      pos.push_back(cur + d);
      go(r + 1, pos, wt * 0.5);
      pos.pop_back();
    }
  };
  std::vector<int> pos{x};
  go(s, pos, 1.0);
  return out;
}

double brute(const BoundaryWeights& w, const BulkWeights& bulk, long s, int x, long t, int y) {
  double z = 0.0;
  for (const auto& p : all_paths(w, s, x, t)) {
    if (p.pos.back() != y) continue;
    double f = p.weight;
    for (long r = s; r < t; ++r) f *= bulk.factor(r, p.pos[r - s]);
    z += f;
  }
  return z;
}

BulkWeights random_bulk(double beta, long t0, long t1, int mx, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> om(static_cast<std::size_t>(t1 - t0) * (mx + 1));
  for (auto& o : om) o = (2.0 * rng.uniform() - 1.0) * 0.9 / beta;
  return BulkWeights(beta, t0, t1, mx, std::move(om));
}

BoundaryWeights random_boundary(long t0, long t1, std::uint64_t seed) {
  RngStream rng(seed, 1);
  std::vector<double> v(t1 - t0);
  for (auto& x : v) x = 0.3 + 1.4 * rng.uniform();
  return BoundaryWeights::from_values(t0, v);
}

bool reach(long r, int w, long r2, int w2) {
  const long d = r2 - r;
  return d >= std::abs(w - w2) && (d - (w2 - w)) % 2 == 0;
}

// Number of (k, r_1 < ... < r_k, w_1..w_k) with w_i >= 1 whose kernel chain from
// (s, x) through the insertions to (t, y) is nonzero; the first insertion may sit at (s, x).
long chaos_cells(long s, int x, long t, int y) {
  const int W = x + static_cast<int>(t - s);
  std::vector<std::vector<long>> f(t - s, std::vector<long>(W + 1, 0));
  long total = reach(s, x, t, y);
  for (long r = s; r < t; ++r)
    for (int w = 1; w <= W; ++w) {
      long c = (r == s) ? (w == x) : reach(s, x, r, w);
      for (long r0 = s; r0 < r; ++r0)
        for (int w0 = 1; w0 <= W; ++w0)
          if (reach(r0, w0, r, w)) c += f[r0 - s][w0];
      f[r - s][w] = c;
      if (reach(r, w, t, y)) total += c;
    }
  return total;
}

double phi(double tau, double x) { return std::exp(-x * x / (2 * tau)) / std::sqrt(2 * M_PI * tau); }
}  // namespace

TEST_CASE("reflected kernel small cases") {
  CHECK(reflected_kernel(0, 0, 1, 1).value == 1.0);
  CHECK(reflected_kernel(0, 0, 2, 0).value == 0.5);
  CHECK(reflected_kernel(0, 0, 2, 2).value == 0.5);
  CHECK(reflected_kernel(0, 0, 2, 1).off_parity);
  double mass = 0.0;
  for (int y = 0; y <= 10; ++y) mass += reflected_kernel(0, 3, 7, y).value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(reflected_kernel(2, 0, 2, 0), ParameterError);
}

TEST_CASE("boundary kernel against path enumeration") {
  CHECK(boundary_kernel(BoundaryWeights::constant(0.7), 0, 0, 2, 0).value == doctest::Approx(0.35));
  for (int y = 0; y <= 12; ++y)
    CHECK(boundary_kernel(BoundaryWeights::constant(1.0), 1, 2, 9, y).value == reflected_kernel(1, 2, 9, y).value);
  auto w = random_boundary(0, 12, 1);
  for (long s : {0L, 2L})
    for (int x : {0, 1, 3})
      for (long t = s + 1; t <= s + 10; ++t)
        for (int y = 0; y <= x + (t - s); ++y)
          CHECK(boundary_kernel(w, s, x, t, y).value ==
                doctest::Approx(brute(w, BulkWeights::zero(), s, x, t, y)).epsilon(1e-13));
}

TEST_CASE("direct, chaos and mild evaluations agree with enumeration") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const long s = 1, t = 1 + 2 + static_cast<long>(seed);
    const int x = static_cast<int>(seed % 3);
    auto w = random_boundary(s, t, seed);
    auto bulk = random_bulk(0.6, s, t, x + (t - s), seed);
    for (int y = (x + t - s) % 2; y <= x + (t - s); y += 2) {
      const double b = brute(w, bulk, s, x, t, y);
      CHECK(modified_partition_direct(w, bulk, s, x, t, y) == doctest::Approx(b).epsilon(1e-12));
      CHECK(modified_partition_chaos(w, bulk, s, x, t, y) == doctest::Approx(b).epsilon(1e-12));
      CHECK(modified_partition_mild(w, bulk, s, x, t, y) == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero bulk reduces to the boundary kernel") {
  auto w = random_boundary(0, 8, 3);
  auto zero = BulkWeights::zero(0.5);
  long cells = -1;
  CHECK(modified_partition_direct(w, zero, 0, 1, 7, 2) == boundary_kernel(w, 0, 1, 7, 2).value);
  CHECK(modified_partition_chaos(w, zero, 0, 1, 7, 2, &cells) == doctest::Approx(boundary_kernel(w, 0, 1, 7, 2).value));
  CHECK(cells == chaos_cells(0, 1, 7, 2));
  modified_partition_chaos(w, zero, 1, 0, 8, 3, &cells);
  CHECK(cells == chaos_cells(1, 0, 8, 3));
  CHECK_THROWS_AS(modified_partition_chaos(w, zero, 0, 1, 13, 2), InstanceTooLargeError);
}

TEST_CASE("one-step mild unroll") {
  auto w = random_boundary(0, 4, 4);
  auto bulk = random_bulk(0.5, 0, 4, 6, 4);
  CHECK(modified_partition_mild(w, bulk, 2, 3, 3, 4) == doctest::Approx(0.5 * bulk.factor(2, 3)));
  CHECK(modified_partition_mild(w, bulk, 2, 0, 3, 1) == doctest::Approx(w.at(2)));
}

TEST_CASE("composition law") {
  auto w = random_boundary(0, 10, 5);
  auto bulk = random_bulk(0.7, 0, 10, 12, 5);
  const double full = modified_partition_direct(w, bulk, 0, 2, 10, 2);
  for (long r = 1; r < 10; ++r) {
    auto row = partition_row(w, bulk, 0, 2, r);
    double acc = 0.0;
    for (int x = 0; x < static_cast<int>(row.size()); ++x)
      if (row[x] != 0.0) acc += row[x] * modified_partition_direct(w, bulk, r, x, 10, 2);
    CHECK(acc == doctest::Approx(full).epsilon(1e-13));
  }
}

TEST_CASE("initial data") {
  auto w = random_boundary(0, 8, 6);
  auto bulk = random_bulk(0.5, 0, 8, 20, 6);
  auto v = partition_with_initial_data(InitialKind::Vertical, {{2, 1.0}}, w, bulk, 6, 2, 8);
  CHECK(v.value == doctest::Approx(modified_partition_direct(w, bulk, 0, 2, 6, 2)));
  std::map<int, double> ones;
  double sum = 0.0;
  for (int x = 0; x <= 12; x += 2) {
    ones[x] = 1.0;
    sum += boundary_kernel(w, 0, x, 6, 4).value;
  }
  auto c = partition_with_initial_data(InitialKind::Vertical, ones, w, BulkWeights::zero(), 6, 4, 12);
  CHECK(c.value == doctest::Approx(sum));
  CHECK(partition_with_initial_data(InitialKind::Vertical, {{2, 1.0}}, w, bulk, 6, 2, 3).truncation_warning);
}

TEST_CASE("second moment against pairs of paths") {
  const double gamma = 0.8, beta = 0.6, sigma2 = 1.0;
  auto w = BoundaryWeights::constant(gamma);
  for (auto [s, x, t, y] : std::vector<std::tuple<long, int, long, int>>{{0, 0, 6, 0}, {0, 1, 7, 2}, {1, 3, 7, 1}}) {
    auto paths = all_paths(w, s, x, t);
    double m2 = 0.0;
    for (const auto& a : paths) {
      if (a.pos.back() != y) continue;
      for (const auto& b : paths) {
        if (b.pos.back() != y) continue;
        double f = a.weight * b.weight;
        for (long r = s; r < t; ++r)
          if (a.pos[r - s] == b.pos[r - s] && a.pos[r - s] > 0) f *= 1.0 + beta * beta * sigma2;
        m2 += f;
      }
    }
    CHECK(partition_second_moment(gamma, beta, sigma2, s, x, t, y) == doctest::Approx(m2).epsilon(1e-12));
  }
}

TEST_CASE("Robin kernel") {
  // mu = 0: Neumann reflection
  CHECK(robin_heat_kernel(0.0, 0.0, 0.3, 1.0, 0.7) == doctest::Approx(phi(1.0, -0.4) + phi(1.0, 1.0)).epsilon(1e-14));
  CHECK(robin_mass(0.0, 0.0, 0.4, 0.8) == doctest::Approx(1.0).epsilon(1e-8));
  // independent representation: phi(X-Y) + phi(X+Y) - 2 mu int_0^inf e^{-mu z} phi(X+Y+z) dz
  for (double mu : {-1.0, -0.5, 0.5, 2.0})
    for (double Y : {0.0, 0.3, 1.2}) {
      const double X = 0.5, tau = 0.75;
      const int N = 400000;
      const double L = 40.0, h = L / N;
      double integral = 0.0;
      for (int i = 0; i <= N; ++i) {
        const double z = i * h;
        integral += (i == 0 || i == N ? 0.5 : 1.0) * std::exp(-mu * z) * phi(tau, X + Y + z);
      }
      integral *= h;
      const double ref = phi(tau, X - Y) + phi(tau, X + Y) - 2.0 * mu * integral;
      CHECK(robin_heat_kernel(mu, 0.0, X, tau, Y) == doctest::Approx(ref).epsilon(1e-7));
    }
  for (double mu : {-1.0, 0.0, 2.0}) {
    CHECK(std::abs(robin_boundary_residual(mu, 0.0, 0.5, 1.0, 1e-4)) < 1e-6);
    CHECK(std::abs(robin_pde_residual(mu, 0.0, 0.5, 1.0, 0.4, 1e-3)) < 1e-5);
  }
}

TEST_CASE("monotone coupling") {
  RngStream rng(7, 0);
  auto bulk = BulkWeights::sample_rademacher(0.5, 0, 12, 20, rng);
  auto c = BoundaryWeights::constant(1.0);
  auto same = monotone_coupling_check(c, c, c, bulk, {});
  CHECK(same.violations == 0);
  CHECK(same.strict == 0);
  auto rep = monotone_coupling_check(BoundaryWeights::constant(0.5), c, BoundaryWeights::constant(1.5), bulk, {});
  CHECK(rep.violations == 0);
  CHECK(rep.strict > 0);
}

TEST_CASE("scaled sheet at beta = 0 approaches the Robin kernel") {
  ScalingParams p;
  p.n = 1 << 14;
  p.mu = 0.0;
  RngStream rng(8, 0);
  for (double Y : {0.0, 0.5, 1.0}) {
    const double sheet = scaled_sheet(p, 0.0, 0.5, 1.0, Y, BoundaryMode::Deterministic, rng);
    CHECK(sheet == doctest::Approx(robin_heat_kernel(0.0, 0.0, 0.5, 1.0, Y)).epsilon(0.02));
  }
  CHECK(p.boundary_level() == 1.0);
  p.mu = 1.0;
  p.n = 256;
  CHECK(p.boundary_level() == doctest::Approx(1.0 - 1.0 / 16.0));
  p.beta = 1.0;
  CHECK(p.beta_n() == doctest::Approx(0.25 / std::sqrt(2.0)));
}

TEST_CASE("kernel table") {
  auto tab = kernel_table(BoundaryWeights::constant(1.0), 0, 0, 4);
  CHECK(tab.at(2, 0) == 0.5);
  CHECK(tab.at(4, 4) == doctest::Approx(0.125));
}
