#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace polymer::stats {

// Tagged i.i.d. draws; NaN/inf rejected at ingestion.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(std::string label, std::uint64_t seed, std::vector<double> values);

  void push(double v);
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& label() const { return label_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::string label_;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
};

struct KsResult {
  double statistic = 0.0;
  double n_eff = 0.0;
  double p_approx = 1.0;
  double threshold = 0.0;  // 0.1% asymptotic critical value at n_eff
  bool pass() const { return statistic <= threshold; }
};

// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_sf(double lambda);
// lambda with kolmogorov_sf(lambda) = alpha.
double kolmogorov_critical(double alpha);
// 0.1% critical value for the statistic at a given n_eff.
double ks_threshold(double n_eff, double alpha = 1e-3);

KsResult ks_two_sample(const SampleSet& a, const SampleSet& b);
// `left_cdf` gives F(x-) for discrete laws; defaults to `cdf`.
KsResult ks_one_sample(const SampleSet& a, const std::function<double(double)>& cdf,
                       const std::function<double(double)>& left_cdf = {});

struct MomentReport {
  int k = 1;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool se_blowup = false;  // estimate dominated by a single draw
  bool pass = false;
};
// k-th raw moment with jackknife standard error (for a mean this is s/sqrt(n)).
MomentReport moment_compare(const SampleSet& a, int k, double target);

// (x, F_emp(x)) at every order statistic.
std::vector<std::pair<double, double>> empirical_cdf_dump(const SampleSet& a);

// Multiplicity policy shared by every KS suite.
enum class SuiteVerdict { Pass, MarginalRetry, Fail };
SuiteVerdict evaluate_suite(const std::vector<KsResult>& results);
constexpr double kMarginalFactor = 1.2;

// Runs `produce(seed)`; if the verdict is MarginalRetry, reruns once with a
// derived seed and requires a clean pass. Returns the results actually used.
struct SuiteRun {
  std::vector<KsResult> results;
  bool pass = false;
  bool retried = false;
  std::uint64_t seed_used = 0;
};
SuiteRun run_suite(const std::function<std::vector<KsResult>(std::uint64_t)>& produce,
                   std::uint64_t seed);

}  // namespace polymer::stats
