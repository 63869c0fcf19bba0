#pragma once
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "polymer/rng.hpp"

namespace polymer::lattice {

using Site = std::pair<int, int>;  // (i, j) with i >= j >= 1
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// alpha_circ on the diagonal, alphas[i-1] = alpha_i. Exempted sites are the
// divergent ones (parameter sum 0); they are pinned to weight 1.
struct OctantParams {
  double alpha_circ = 0.0;
  std::vector<double> alphas;
  std::set<Site> exemptions;

  int size() const { return static_cast<int>(alphas.size()); }
  // inverse-gamma parameter of site (i,j)
  double theta(int i, int j) const;
  void validate() const;
};

class WeightField {
 public:
  WeightField() = default;
  explicit WeightField(OctantParams params);

  int size() const { return n_; }
  int rows() const { return rows_; }
  const OctantParams& params() const { return params_; }
  bool contains(int i, int j) const { return j >= 1 && j <= rows_ && i >= j && i <= n_; }
  double log_w(int i, int j) const;
  bool pinned(int i, int j) const;
  // Direct write access for deterministic constructions and perturbation tests.
  void set_log_w(int i, int j, double v);

 private:
  friend WeightField sample_weight_field(const OctantParams&, RngStream&, int);
  std::size_t index(int i, int j) const;

  OctantParams params_;
  int n_ = 0;
  int rows_ = 0;
  std::vector<double> log_w_;
  std::vector<char> pinned_;
};

// Samples rows j = 1..max_rows (all rows when max_rows <= 0). Sites are drawn
// row by row, so a row's values do not depend on max_rows.
WeightField sample_weight_field(const OctantParams& params, RngStream& rng, int max_rows = 0);
// Every non-pinned site gets the same log-weight (pinned sites stay 0).
WeightField constant_field(const OctantParams& params, double log_w);

class PartitionGrid {
 public:
  PartitionGrid() = default;
  PartitionGrid(int max_n, int max_m);
  int max_n() const { return max_n_; }
  int max_m() const { return max_m_; }
  // -inf off the octant or outside the window
  double log_z(int n, int m) const;
  void set(int n, int m, double v);

 private:
  int max_n_ = 0, max_m_ = 0;
  std::vector<double> v_;
};

PartitionGrid partition_recurrence(const WeightField& field, int max_n, int max_m);
// Log-sum-exp over enumerated up-right paths; guarded at 10^6 paths.
double partition_bruteforce(const WeightField& field, int n, int m);
// Paths from start to end (both endpoint weights included); -inf if unreachable.
double point_to_point_partition(const WeightField& field, Site start, Site end);

struct BurkeTriple {
  double U, V, w;
};
BurkeTriple burke_step(double U, double V, double w);
BurkeTriple burke_step_log(double logU, double logV, double logw);

OctantParams one_row_params(double alpha, double u, int n);
OctantParams two_row_params(double alpha, double u, double v, int n);

struct StationarySample {
  WeightField field;
  PartitionGrid grid;
};
StationarySample sample_one_row(double alpha, double u, int max_n, int max_m, RngStream& rng);
StationarySample sample_two_row(double alpha, double u, double v, int max_n, int max_m,
                                RngStream& rng);
PartitionGrid one_row_stationary_grid(double alpha, double u, int max_n, int max_m,
                                      RngStream& rng);
PartitionGrid two_row_stationary_grid(double alpha, double u, double v, int max_n, int max_m,
                                      RngStream& rng);

struct DownRightPath {
  std::vector<Site> points;  // offsets (n_i, m_i) relative to (m,m)
  void validate() const;
};
// log z((m,m)+p_i) - log z((m,m)+p_1)
std::vector<double> increments_along_path(const PartitionGrid& grid, const DownRightPath& path,
                                          int m);

// Samples (log Z(m,m), ..., log Z(m+k,m)) for each offset k under the
// original and permuted parameters; one vector of replicas per offset.
struct PermutationSamples {
  std::vector<std::vector<double>> original;
  std::vector<std::vector<double>> permuted;
};
// permutation[k-1] = sigma(k); new alpha_k = alpha_{sigma(k)}; only 1..row_m may move.
OctantParams permute_params(const OctantParams& params, const std::vector<int>& permutation,
                            int row_m);
PermutationSamples permutation_symmetry_experiment(const OctantParams& params,
                                                   const std::vector<int>& permutation,
                                                   int row_m, const std::vector<int>& offsets,
                                                   std::size_t n_samples,
                                                   std::uint64_t seed_original,
                                                   std::uint64_t seed_permuted,
                                                   int workers = 0);

void write_grid_csv(std::ostream& os, const PartitionGrid& grid);

}  // namespace polymer::lattice
