#include "polymer/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "polymer/distributions.hpp"
#include "polymer/errors.hpp"
#include "polymer/replicate.hpp"
#include "polymer/special_functions.hpp"

namespace polymer::lattice {

using special::logaddexp;

double OctantParams::theta(int i, int j) const {
  if (j < 1 || i < j || i > size()) throw RangeError("OctantParams::theta: site off the octant");
  return i == j ? alpha_circ + alphas[i - 1] : alphas[i - 1] + alphas[j - 1];
}

void OctantParams::validate() const {
  if (alphas.empty()) throw ParameterError("OctantParams: empty alpha list");
  for (int i = 1; i <= size(); ++i)
    for (int j = 1; j <= i; ++j) {
      if (exemptions.count({i, j})) continue;
      double t = theta(i, j);
      if (!(t > 0.0) || !std::isfinite(t))
        throw ParameterError("OctantParams: parameter sum at site (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is " + std::to_string(t) +
                             " (must be > 0 unless exempted)");
    }
  for (const auto& [i, j] : exemptions)
    if (j < 1 || i < j || i > size()) throw ParameterError("OctantParams: exemption off octant");
}

WeightField::WeightField(OctantParams params) : params_(std::move(params)) {
  n_ = params_.size();
  rows_ = n_;
  log_w_.assign(static_cast<std::size_t>(n_) * (n_ + 1) / 2, 0.0);
  pinned_.assign(log_w_.size(), 0);
  for (const auto& s : params_.exemptions)
    if (s.second >= 1 && s.first >= s.second && s.first <= n_) pinned_[index(s.first, s.second)] = 1;
}

std::size_t WeightField::index(int i, int j) const {
  return static_cast<std::size_t>(i) * (i - 1) / 2 + (j - 1);
}

double WeightField::log_w(int i, int j) const {
  if (!contains(i, j)) throw RangeError("WeightField: site outside sampled window");
  return log_w_[index(i, j)];
}

bool WeightField::pinned(int i, int j) const {
  if (!contains(i, j)) throw RangeError("WeightField: site outside sampled window");
  return pinned_[index(i, j)] != 0;
}

void WeightField::set_log_w(int i, int j, double v) {
  if (!contains(i, j)) throw RangeError("WeightField: site outside sampled window");
  log_w_[index(i, j)] = v;
}

WeightField sample_weight_field(const OctantParams& params, RngStream& rng, int max_rows) {
  params.validate();
  WeightField f(params);
  f.rows_ = max_rows > 0 ? std::min(max_rows, f.n_) : f.n_;
  for (int j = 1; j <= f.rows_; ++j)
    for (int i = j; i <= f.n_; ++i) {
      auto k = f.index(i, j);
      if (f.pinned_[k]) continue;
      f.log_w_[k] = log_sample_inverse_gamma(params.theta(i, j), rng);
    }
  return f;
}

WeightField constant_field(const OctantParams& params, double log_w) {
  WeightField f(params);
  for (int j = 1; j <= f.size(); ++j)
    for (int i = j; i <= f.size(); ++i)
      if (!f.pinned(i, j)) f.set_log_w(i, j, log_w);
  return f;
}

PartitionGrid::PartitionGrid(int max_n, int max_m)
    : max_n_(max_n), max_m_(max_m),
      v_(static_cast<std::size_t>(max_n + 1) * (max_m + 1), kNegInf) {}

double PartitionGrid::log_z(int n, int m) const {
  if (m < 1 || n < m || n > max_n_ || m > max_m_) return kNegInf;
  return v_[static_cast<std::size_t>(m) * (max_n_ + 1) + n];
}

void PartitionGrid::set(int n, int m, double v) {
  if (m < 1 || n < m || n > max_n_ || m > max_m_) throw RangeError("PartitionGrid::set");
  v_[static_cast<std::size_t>(m) * (max_n_ + 1) + n] = v;
}

PartitionGrid partition_recurrence(const WeightField& field, int max_n, int max_m) {
  if (max_m < 1 || max_n < max_m) throw RangeError("partition_recurrence: need max_n >= max_m >= 1");
  if (max_n > field.size() || max_m > field.rows())
    throw RangeError("partition_recurrence: field does not cover the requested window");
  PartitionGrid g(max_n, max_m);
  for (int m = 1; m <= max_m; ++m)
    for (int n = m; n <= max_n; ++n) {
      double w = field.log_w(n, m);
      double v;
      if (n == 1)
        v = w;
      else if (n == m)
        v = w + g.log_z(n, m - 1);
      else
        v = w + logaddexp(g.log_z(n - 1, m), g.log_z(n, m - 1));
      g.set(n, m, v);
    }
  return g;
}

namespace {
double count_paths(int n, int m) {
  // up-right octant paths from (1,1) to (n,m)
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  c[1][1] = 1.0;
  for (int j = 1; j <= m; ++j)
    for (int i = j; i <= n; ++i) {
      if (i == 1 && j == 1) continue;
      double s = 0.0;
      if (i - 1 >= j) s += c[i - 1][j];
      if (j - 1 >= 1) s += c[i][j - 1];
      c[i][j] = s;
    }
  return c[n][m];
}

void enumerate(const WeightField& f, int i, int j, double acc, std::vector<double>& out) {
  acc += f.log_w(i, j);
  if (i == 1 && j == 1) {
    out.push_back(acc);
    return;
  }
  if (i - 1 >= j) enumerate(f, i - 1, j, acc, out);
  if (j - 1 >= 1) enumerate(f, i, j - 1, acc, out);
}
}  // namespace

double partition_bruteforce(const WeightField& field, int n, int m) {
  if (m < 1 || n < m) return kNegInf;
  if (!field.contains(n, m)) throw RangeError("partition_bruteforce: site outside field");
  if (count_paths(n, m) > 1e6) throw InstanceTooLargeError("partition_bruteforce: > 1e6 paths");
  std::vector<double> sums;
  enumerate(field, n, m, 0.0, sums);
  double mx = *std::max_element(sums.begin(), sums.end());
  double s = 0.0;
  for (double x : sums) s += std::exp(x - mx);
  return mx + std::log(s);
}

double point_to_point_partition(const WeightField& field, Site start, Site end) {
  auto [a, b] = start;
  auto [a2, b2] = end;
  if (b < 1 || a < b || b2 < 1 || a2 < b2) throw RangeError("point_to_point_partition: off octant");
  if (a2 < a || b2 < b) return kNegInf;
  if (!field.contains(a2, b2) || !field.contains(a, b))
    throw RangeError("point_to_point_partition: outside field");
  const int W = a2 - a + 1, H = b2 - b + 1;
  std::vector<double> z(static_cast<std::size_t>(W) * H, kNegInf);
  auto at = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(j - b) * W + (i - a)]; };
  for (int j = b; j <= b2; ++j)
    for (int i = std::max(a, j); i <= a2; ++i) {
      double prev;
      if (i == a && j == b)
        prev = 0.0;
      else {
        prev = kNegInf;
        if (i - 1 >= a && i - 1 >= j) prev = logaddexp(prev, at(i - 1, j));
        if (j - 1 >= b) prev = logaddexp(prev, at(i, j - 1));
      }
      at(i, j) = prev == kNegInf ? kNegInf : prev + field.log_w(i, j);
    }
  return at(a2, b2);
}

BurkeTriple burke_step_log(double lu, double lv, double lw) {
  return {lw + logaddexp(0.0, lu - lv), lw + logaddexp(0.0, lv - lu), -logaddexp(-lu, -lv)};
}

BurkeTriple burke_step(double U, double V, double w) {
  if (!(U > 0.0) || !(V > 0.0) || !(w > 0.0)) throw ParameterError("burke_step: inputs must be positive");
  auto r = burke_step_log(std::log(U), std::log(V), std::log(w));
  return {std::exp(r.U), std::exp(r.V), std::exp(r.w)};
}

OctantParams one_row_params(double alpha, double u, int n) {
  if (!(alpha > 0.0) || !(u > -alpha && u < alpha))
    throw ParameterError("one-row: need alpha > 0 and u in (-alpha, alpha)");
  OctantParams p;
  p.alpha_circ = u;
  p.alphas.assign(std::max(n, 1), alpha);
  p.alphas[0] = -u;
  p.exemptions = {{1, 1}};
  return p;
}

OctantParams two_row_params(double alpha, double u, double v, int n) {
  if (!(alpha > 0.0)) throw ParameterError("two-row: need alpha > 0");
  if (!(u > -alpha)) throw ParameterError("two-row: need u > -alpha");
  if (!(v > -alpha && v < alpha)) throw ParameterError("two-row: need v in (-alpha, alpha)");
  if (!(v < u)) throw ParameterError("two-row: need v < u (v = u only via the direct sampler)");
  OctantParams p;
  p.alpha_circ = u;
  p.alphas.assign(std::max(n, 2), alpha);
  p.alphas[0] = v;
  p.alphas[1] = -v;
  p.exemptions = {{2, 1}};
  if (u + v <= 0.0) p.exemptions.insert({1, 1});
  return p;
}

StationarySample sample_one_row(double alpha, double u, int max_n, int max_m, RngStream& rng) {
  auto f = sample_weight_field(one_row_params(alpha, u, max_n), rng, max_m);
  auto g = partition_recurrence(f, max_n, max_m);
  return {std::move(f), std::move(g)};
}

StationarySample sample_two_row(double alpha, double u, double v, int max_n, int max_m,
                                RngStream& rng) {
  if (max_n < 2) throw RangeError("two-row grid needs max_n >= 2");
  auto f = sample_weight_field(two_row_params(alpha, u, v, max_n), rng, max_m);
  auto g = partition_recurrence(f, max_n, max_m);
  return {std::move(f), std::move(g)};
}

PartitionGrid one_row_stationary_grid(double alpha, double u, int max_n, int max_m,
                                      RngStream& rng) {
  return sample_one_row(alpha, u, max_n, max_m, rng).grid;
}

PartitionGrid two_row_stationary_grid(double alpha, double u, double v, int max_n, int max_m,
                                      RngStream& rng) {
  return sample_two_row(alpha, u, v, max_n, max_m, rng).grid;
}

void DownRightPath::validate() const {
  if (points.empty()) throw ParameterError("DownRightPath: empty");
  for (std::size_t i = 1; i < points.size(); ++i) {
    int dn = points[i].first - points[i - 1].first;
    int dm = points[i].second - points[i - 1].second;
    if (!((dn == 1 && dm == 0) || (dn == 0 && dm == -1)))
      throw ParameterError("DownRightPath: steps must be (1,0) or (0,-1)");
  }
}

std::vector<double> increments_along_path(const PartitionGrid& grid, const DownRightPath& path,
                                          int m) {
  path.validate();
  std::vector<double> out;
  out.reserve(path.points.size());
  double base = 0.0;
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    int n = m + path.points[i].first, mm = m + path.points[i].second;
    double v = grid.log_z(n, mm);
    if (!std::isfinite(v)) throw RangeError("increments_along_path: point outside grid");
    if (i == 0) base = v;
    out.push_back(v - base);
  }
  return out;
}

OctantParams permute_params(const OctantParams& params, const std::vector<int>& perm, int row_m) {
  const int L = static_cast<int>(perm.size());
  if (L > params.size()) throw ParameterError("permutation longer than the alpha list");
  std::vector<int> seen(L + 1, 0), inv(params.size() + 1);
  for (int k = 1; k <= params.size(); ++k) inv[k] = k;
  for (int k = 1; k <= L; ++k) {
    int s = perm[k - 1];
    if (s < 1 || s > L || seen[s]++) throw ParameterError("not a permutation of 1..L");
    if (s != k && (k > row_m || s > row_m))
      throw ParameterError("permutation may only act on indices 1..m");
    inv[s] = k;
  }
  OctantParams out = params;
  for (int k = 1; k <= L; ++k) out.alphas[k - 1] = params.alphas[perm[k - 1] - 1];
  out.exemptions.clear();
  for (auto [i, j] : params.exemptions) {
    if (i == j) {
      out.exemptions.insert({inv[i], inv[i]});
    } else {
      int a = inv[i], b = inv[j];
      out.exemptions.insert({std::max(a, b), std::min(a, b)});
    }
  }
  out.validate();
  return out;
}

PermutationSamples permutation_symmetry_experiment(const OctantParams& params,
                                                   const std::vector<int>& permutation,
                                                   int row_m, const std::vector<int>& offsets,
                                                   std::size_t n_samples,
                                                   std::uint64_t seed_original,
                                                   std::uint64_t seed_permuted, int workers) {
  if (offsets.empty()) throw ParameterError("permutation experiment: no offsets");
  int kmax = *std::max_element(offsets.begin(), offsets.end());
  if (*std::min_element(offsets.begin(), offsets.end()) < 0)
    throw ParameterError("permutation experiment: negative offset");
  if (row_m + kmax > params.size()) throw ParameterError("permutation experiment: alpha list too short");
  OctantParams permuted = permute_params(params, permutation, row_m);
  params.validate();
  const std::size_t w = offsets.size();
  auto run = [&](const OctantParams& p, std::uint64_t seed) {
    OctantParams trimmed = p;
    trimmed.alphas.resize(row_m + kmax);
    std::set<Site> ex;
    for (auto s : trimmed.exemptions)
      if (s.first <= row_m + kmax) ex.insert(s);
    trimmed.exemptions = ex;
    auto table = replicate(
        n_samples, w, seed, 0x5045524dull,
        [&](std::size_t, RngStream& rng, double* out) {
          auto f = sample_weight_field(trimmed, rng, row_m);
          auto g = partition_recurrence(f, row_m + kmax, row_m);
          for (std::size_t c = 0; c < w; ++c) out[c] = g.log_z(row_m + offsets[c], row_m);
        },
        {workers});
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < w; ++c) cols.push_back(column(table, w, c));
    return cols;
  };
  return {run(params, seed_original), run(permuted, seed_permuted)};
}

void write_grid_csv(std::ostream& os, const PartitionGrid& grid) {
  os << "n,m,log_z\n";
  os.precision(17);
  for (int m = 1; m <= grid.max_m(); ++m)
    for (int n = m; n <= grid.max_n(); ++n) os << n << ',' << m << ',' << grid.log_z(n, m) << '\n';
}

}  // namespace polymer::lattice
