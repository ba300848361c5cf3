#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mallows/estimators.hpp"
#include "mallows/stats.hpp"

namespace mallows {

/// Outcome of one experiment driver.  `metrics` holds named scalar results,
/// `checks` the pass flags evaluated against configured thresholds, and
/// `samples` the raw per-replicate values in replicate order.
struct ExperimentReport {
  std::string experiment;
  double q = 0;
  std::uint64_t n = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  SampleSummary summary;
  double ks_statistic = 0;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> checks;
  std::vector<double> samples;
};

/// Acceptance bands for the CLT driver; the defaults are the desk-scale
/// values shipped in configs/clt.json.
struct CltThresholds {
  double ks_max = 0.05;
  double mean_abs_max = 0.15;
  double variance_min = 0.85;
  double variance_max = 1.15;
};

/// R replicates of (L_n - a n) / (sigma sqrt n) from independent streams in
/// the kClt namespace, each drawn through decompose_prefix so that the gap
/// |L_n - Q_n| / sqrt n and the sandwich inequalities are recorded too.
ExperimentReport clt_experiment(double q, std::uint64_t n, std::uint64_t reps, const CltConstants& constants,
                                std::uint64_t seed, unsigned workers = 1, const CltThresholds& thresholds = {});

/// KS and moments of an arbitrary standardized sample (driver self-test).
ExperimentReport standardized_report(std::vector<double> standardized, const CltThresholds& thresholds = {});

struct VariancePoint {
  std::uint64_t n = 0;
  double variance = 0;
  double std_error = 0;  // sqrt((m4 - s^4) / R)
};

struct VarianceProbe {
  double q = 0;
  std::uint64_t reps = 0;
  std::vector<VariancePoint> points;
  double slope = 0;             // weighted least squares Var ~ c + slope n
  double slope_std_error = 0;
  double intercept = 0;
};

/// Sample variance of L_n over the grid, fitted linearly in n.
VarianceProbe variance_growth_probe(double q, const std::vector<std::uint64_t>& n_grid, std::uint64_t reps,
                                    std::uint64_t seed, unsigned workers = 1);

struct LdsThresholds {
  double ratio_min = 0.8;
  double ratio_max = 1.2;
};

/// sqrt(2 ln n / ln(1/q)): the predicted first-order size of L_n^down.
double lds_scale(double q, std::uint64_t n);

/// Replicates of L_n^down sqrt(ln 1/q) / sqrt(2 ln n); samples holds the ratios.
ExperimentReport lds_lln_experiment(double q, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                                    unsigned workers = 1, const LdsThresholds& thresholds = {});

struct LdsTailPoint {
  std::uint32_t k = 0;
  std::uint64_t count = 0;    // blocks with Y_down >= k
  double p_hat = 0;
  double std_error = 0;
  double lower_bound = 0;     // (1-q)^k q^(k(k-1)/2)
  bool bound_ok = false;      // p_hat >= lower_bound - 3 SE
  double exponent = 0;        // log_q(p_hat) / (k^2 / 2); NaN when p_hat = 0
};

struct LdsTail {
  double q = 0;
  std::uint64_t blocks = 0;
  std::vector<LdsTailPoint> points;
  bool exponent_decreasing = false;  // over the grid, in k order
};

/// (1-q)^k q^(k(k-1)/2), the probability that a block is (k, k-1, ..., 1).
double reversed_block_probability(double q, std::uint32_t k);

/// Monte Carlo tail of the block LDS over a k grid.
LdsTail block_lds_tail(double q, const std::vector<std::uint32_t>& k_grid, std::uint64_t blocks,
                       std::uint64_t seed, unsigned workers = 1);

}  // namespace mallows
