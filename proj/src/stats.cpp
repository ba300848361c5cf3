#include "mallows/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mallows {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
  if (sorted_sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end())) {
    throw std::invalid_argument("ks_statistic: sample must be sorted");
  }
  const double n = static_cast<double>(sorted_sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double f = cdf(sorted_sample[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return d;
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.count = sample.size();
  if (sample.empty()) return s;
  const double n = static_cast<double>(sample.size());
  double sum = 0;
  for (const double x : sample) sum += x;
  s.mean = sum / n;
  double m2 = 0, m3 = 0;
  for (const double x : sample) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  s.variance = sample.size() > 1 ? m2 / (n - 1) : 0.0;
  s.skewness = m2 > 0 ? (m3 / n) / std::pow(m2 / n, 1.5) : 0.0;
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

}  // namespace mallows
