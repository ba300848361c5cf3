#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mallows {

/// Standard normal CDF through erfc; absolute error well below 1e-10.
double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov statistic
/// sup_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|) over a sorted sample.
/// Throws std::invalid_argument on an empty or unsorted sample.
double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double skewness = 0;  // moment coefficient g1
  double min = 0;
  double max = 0;
};

SampleSummary summarize(std::span<const double> sample);

}  // namespace mallows
