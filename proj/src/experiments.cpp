#include "mallows/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mallows/insertion.hpp"
#include "mallows/monotone.hpp"
#include "mallows/parallel.hpp"
#include "mallows/regen.hpp"

namespace mallows {

ExperimentReport standardized_report(std::vector<double> standardized, const CltThresholds& thresholds) {
  ExperimentReport rep;
  rep.reps = standardized.size();
  rep.summary = summarize(standardized);
  std::vector<double> sorted = standardized;
  std::sort(sorted.begin(), sorted.end());
  rep.ks_statistic = ks_statistic(sorted, normal_cdf);
  rep.checks["ks"] = rep.ks_statistic < thresholds.ks_max;
  rep.checks["mean"] = std::abs(rep.summary.mean) < thresholds.mean_abs_max;
  rep.checks["variance"] = rep.summary.variance > thresholds.variance_min &&
                           rep.summary.variance < thresholds.variance_max;
  rep.samples = std::move(standardized);
  return rep;
}

ExperimentReport clt_experiment(double q, std::uint64_t n, std::uint64_t reps, const CltConstants& constants,
                                std::uint64_t seed, unsigned workers, const CltThresholds& thresholds) {
  const MallowsParams params{q};
  if (n < 1 || reps < 2) throw std::invalid_argument("clt_experiment: need n >= 1 and reps >= 2");
  if (constants.q != q) throw std::invalid_argument("clt_experiment: constants were estimated for another q");
  if (!(constants.sigma_hat > 0)) throw std::invalid_argument("clt_experiment: sigma_hat must be positive");

  struct Replicate {
    double standardized = 0, gap = 0;
    bool lis_sandwich = false, lds_sandwich = false;
  };
  std::vector<Replicate> out(reps);
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(reps, workers, [&](std::uint64_t r) {
    GeometricStream stream(params, seed, stream_id(StreamPurpose::kClt, r));
    const auto dec = decompose_prefix(n, params, stream);
    const auto& d = dec.decomposition;
    const auto lis = static_cast<std::int64_t>(lis_length(dec.pi_n));
    const auto lds = lds_length(dec.pi_n);
    const auto q_n = static_cast<std::int64_t>(d.q_n);
    const auto last_y = static_cast<std::int64_t>(d.blocks.back().stats.y);
    std::uint32_t max_down_before = 0, max_down = 0;
    for (std::size_t j = 0; j < d.blocks.size(); ++j) {
      if (j + 1 < d.blocks.size()) max_down_before = std::max(max_down_before, d.blocks[j].stats.y_down);
      max_down = std::max(max_down, d.blocks[j].stats.y_down);
    }
    Replicate& rep = out[r];
    rep.standardized = (static_cast<double>(lis) - constants.a_hat * static_cast<double>(n)) /
                       (constants.sigma_hat * root_n);
    rep.gap = static_cast<double>(q_n - lis) / root_n;
    rep.lis_sandwich = q_n - last_y < lis && lis <= q_n;
    rep.lds_sandwich = max_down_before <= lds && lds <= max_down;
  });

  std::vector<double> standardized;
  standardized.reserve(reps);
  double max_gap = 0, sum_gap = 0;
  std::uint64_t violations = 0;
  for (const auto& r : out) {
    standardized.push_back(r.standardized);
    max_gap = std::max(max_gap, r.gap);
    sum_gap += r.gap;
    violations += !r.lis_sandwich + !r.lds_sandwich;
  }
  auto rep = standardized_report(std::move(standardized), thresholds);
  rep.experiment = "clt";
  rep.q = q;
  rep.n = n;
  rep.seed = seed;
  rep.metrics["a_hat"] = constants.a_hat;
  rep.metrics["sigma_hat"] = constants.sigma_hat;
  rep.metrics["max_gap_scaled"] = max_gap;
  rep.metrics["mean_gap_scaled"] = sum_gap / static_cast<double>(reps);
  rep.metrics["sandwich_violations"] = static_cast<double>(violations);
  rep.checks["sandwich"] = violations == 0;
  return rep;
}

VarianceProbe variance_growth_probe(double q, const std::vector<std::uint64_t>& n_grid, std::uint64_t reps,
                                    std::uint64_t seed, unsigned workers) {
  const MallowsParams params{q};
  if (n_grid.empty() || reps < 2) throw std::invalid_argument("variance_growth_probe: need a grid and reps >= 2");
  VarianceProbe probe;
  probe.q = q;
  probe.reps = reps;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const auto n = n_grid[g];
    std::vector<double> lis(reps);
    parallel_for(reps, workers, [&](std::uint64_t r) {
      GeometricStream stream(params, seed, stream_id(StreamPurpose::kVariance, (g << 32) | r));
      lis[r] = static_cast<double>(lis_length(sample_mallows(n, params, stream)));
    });
    const auto s = summarize(lis);
    double m4 = 0;
    for (const double v : lis) m4 += std::pow(v - s.mean, 4);
    m4 /= static_cast<double>(reps);
    const double pop_var = s.variance * static_cast<double>(reps - 1) / static_cast<double>(reps);
    VariancePoint pt{n, s.variance, std::sqrt(std::max(0.0, m4 - pop_var * pop_var) / static_cast<double>(reps))};
    probe.points.push_back(pt);
  }

  // weighted least squares on the points with a usable error bar
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  std::size_t used = 0;
  for (const auto& pt : probe.points) {
    if (!(pt.std_error > 0)) continue;
    const double w = 1.0 / (pt.std_error * pt.std_error);
    const double x = static_cast<double>(pt.n);
    sw += w;
    swx += w * x;
    swy += w * pt.variance;
    swxx += w * x * x;
    swxy += w * x * pt.variance;
    ++used;
  }
  if (used >= 2) {
    const double det = sw * swxx - swx * swx;
    probe.slope = (sw * swxy - swx * swy) / det;
    probe.intercept = (swy - probe.slope * swx) / sw;
    probe.slope_std_error = std::sqrt(sw / det);
  } else if (used == 1) {
    probe.slope = swxy / swxx;
    probe.slope_std_error = std::sqrt(1.0 / swxx);
  }
  return probe;
}

double lds_scale(double q, std::uint64_t n) {
  MallowsParams{q};
  if (n < 2) throw std::invalid_argument("lds_scale: n must be >= 2");
  return std::sqrt(2.0 * std::log(static_cast<double>(n)) / std::log(1.0 / q));
}

ExperimentReport lds_lln_experiment(double q, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                                    unsigned workers, const LdsThresholds& thresholds) {
  const MallowsParams params{q};
  if (reps < 1) throw std::invalid_argument("lds_lln_experiment: reps must be >= 1");
  const double scale = lds_scale(q, n);
  std::vector<double> lds(reps);
  parallel_for(reps, workers, [&](std::uint64_t r) {
    GeometricStream stream(params, seed, stream_id(StreamPurpose::kLds, r));
    lds[r] = static_cast<double>(lds_length(sample_mallows(n, params, stream)));
  });
  std::vector<double> ratios;
  ratios.reserve(reps);
  for (const double l : lds) ratios.push_back(l / scale);
  ExperimentReport rep;
  rep.experiment = "lds";
  rep.q = q;
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.summary = summarize(ratios);
  rep.metrics["scale"] = scale;
  rep.metrics["mean_lds"] = summarize(lds).mean;
  rep.metrics["mean_ratio"] = rep.summary.mean;
  rep.metrics["ratio_std_error"] = reps > 1 ? std::sqrt(rep.summary.variance / static_cast<double>(reps)) : 0.0;
  rep.checks["ratio_band"] = rep.summary.mean >= thresholds.ratio_min && rep.summary.mean <= thresholds.ratio_max;
  rep.samples = std::move(ratios);
  return rep;
}

double reversed_block_probability(double q, std::uint32_t k) {
  const double kd = static_cast<double>(k);
  return std::pow(1.0 - q, kd) * std::pow(q, kd * (kd - 1.0) / 2.0);
}

LdsTail block_lds_tail(double q, const std::vector<std::uint32_t>& k_grid, std::uint64_t blocks,
                       std::uint64_t seed, unsigned workers) {
  const MallowsParams params{q};
  if (k_grid.empty() || blocks < 1) throw std::invalid_argument("block_lds_tail: need a grid and blocks >= 1");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()) || k_grid.front() < 1) {
    throw std::invalid_argument("block_lds_tail: k grid must be ascending and start at k >= 1");
  }
  constexpr std::uint64_t kChunks = 64;
  std::vector<std::vector<std::uint64_t>> counts(kChunks, std::vector<std::uint64_t>(k_grid.size(), 0));
  parallel_for(kChunks, workers, [&](std::uint64_t c) {
    BlockSampler sampler(params, GeometricStream(params, seed, stream_id(StreamPurpose::kBlockTail, c)));
    const auto count = chunk_size(blocks, kChunks, c);
    for (std::uint64_t b = 0; b < count; ++b) {
      const auto y_down = sampler.next_stats().y_down;
      for (std::size_t g = 0; g < k_grid.size(); ++g) counts[c][g] += y_down >= k_grid[g];
    }
  });
  LdsTail tail;
  tail.q = q;
  tail.blocks = blocks;
  const double b = static_cast<double>(blocks);
  for (std::size_t g = 0; g < k_grid.size(); ++g) {
    LdsTailPoint pt;
    pt.k = k_grid[g];
    for (const auto& part : counts) pt.count += part[g];
    pt.p_hat = static_cast<double>(pt.count) / b;
    pt.std_error = std::sqrt(pt.p_hat * (1.0 - pt.p_hat) / b);
    pt.lower_bound = reversed_block_probability(q, pt.k);
    pt.bound_ok = pt.p_hat >= pt.lower_bound - 3.0 * pt.std_error;
    const double half_k2 = static_cast<double>(pt.k) * pt.k / 2.0;
    pt.exponent = pt.count > 0 ? std::log(pt.p_hat) / std::log(q) / half_k2 : std::numeric_limits<double>::quiet_NaN();
    tail.points.push_back(pt);
  }
  // k = 1 has exponent 0 trivially; the trend is read from k >= 2
  tail.exponent_decreasing = true;
  double previous = std::numeric_limits<double>::infinity();
  std::size_t compared = 0;
  for (const auto& pt : tail.points) {
    if (pt.k < 2) continue;
    if (!(pt.exponent < previous)) tail.exponent_decreasing = false;
    previous = pt.exponent;
    ++compared;
  }
  if (compared < 2) tail.exponent_decreasing = false;
  return tail;
}

}  // namespace mallows
