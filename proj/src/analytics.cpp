#include "mallows/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "mallows/chain.hpp"
#include "mallows/parallel.hpp"
#include "mallows/regen.hpp"

namespace mallows {
namespace {

void check_q(double q) { MallowsParams{q}; }

void check_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

// smallest J >= 0 with q^(J+1) / (1-q) < eps
std::size_t geometric_cutoff(double q, double eps) {
  std::size_t j = 0;
  double tail = q / (1.0 - q);
  while (tail >= eps) {
    tail *= q;
    ++j;
  }
  return j;
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

Estimate mean_estimate(double sum, double sum_sq, std::uint64_t n) {
  Estimate e;
  e.n_samples = n;
  e.value = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * e.value) / static_cast<double>(n - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

}  // namespace

double TruncatedDistribution::total() const noexcept {
  CompensatedSum s;
  for (const double w : weights) s.add(w);
  return s.value();
}

TruncatedDistribution transition_row(std::uint64_t i, double q, std::size_t j_max) {
  check_q(q);
  if (i > j_max) throw std::invalid_argument("transition_row: state beyond the truncation");
  TruncatedDistribution row;
  row.j_max = j_max;
  row.weights.assign(j_max + 1, 0.0);
  if (i >= 1) row.weights[i - 1] = -std::expm1(static_cast<double>(i) * std::log(q));
  double qj = std::pow(q, static_cast<double>(i));
  for (std::size_t j = i; j <= j_max; ++j) {
    row.weights[j] = qj * (1.0 - q);
    qj *= q;
  }
  row.tail_mass_bound = std::pow(q, static_cast<double>(j_max + 1));
  return row;
}

double euler_mu0(double q, double eps) {
  check_q(q);
  check_eps(eps);
  const std::size_t k_max = geometric_cutoff(q, eps);
  double log_product = 0.0;
  double qk = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    qk *= q;
    log_product += std::log1p(-qk);
  }
  return std::exp(log_product);
}

TruncatedDistribution stationary_dist(double q, double eps) {
  check_q(q);
  check_eps(eps);
  TruncatedDistribution mu;
  mu.j_max = geometric_cutoff(q, eps);
  mu.tail_mass_bound = std::pow(q, static_cast<double>(mu.j_max + 1)) / (1.0 - q);
  mu.weights.resize(mu.j_max + 1);
  mu.weights[0] = euler_mu0(q, eps);
  double qj = 1.0;
  for (std::size_t j = 1; j <= mu.j_max; ++j) {
    qj *= q;
    // mu_j (1 - q^j) = q mu_{j-1}
    mu.weights[j] = q * mu.weights[j - 1] / (1.0 - qj);
  }
  return mu;
}

double stationarity_residual(const TruncatedDistribution& mu, double q) {
  check_q(q);
  const auto& w = mu.weights;
  const std::size_t j_max = w.size() - 1;
  CompensatedSum prefix;  // sum_{k <= j} mu_k
  CompensatedSum residual;
  double qj = 1.0;
  for (std::size_t j = 0; j <= j_max; ++j) {
    prefix.add(w[j]);
    const double next = j + 1 <= j_max ? w[j + 1] : 0.0;
    const double stay_or_jump = prefix.value() * qj * (1.0 - q);
    const double down = next * (1.0 - qj * q);  // from j+1: 1 - q^(j+1)
    residual.add(std::abs(stay_or_jump + down - w[j]));
    qj *= q;
  }
  return residual.value();
}

double stationarity_residual(double q, double eps) { return stationarity_residual(stationary_dist(q, eps), q); }

FirstPassage first_passage_pmf(double q, std::size_t horizon, double eps) {
  check_q(q);
  check_eps(eps);
  if (horizon < 1) throw std::invalid_argument("first_passage_pmf: horizon must be >= 1");
  FirstPassage out;
  // per-step leak is at most q^(j_max+1); keep the horizon's total under eps
  out.j_max = std::max<std::size_t>(2, geometric_cutoff(q, eps / static_cast<double>(horizon) * (1.0 - q)));
  const std::size_t j_max = out.j_max;
  std::vector<double> qpow(j_max + 2);
  qpow[0] = 1.0;
  for (std::size_t j = 1; j < qpow.size(); ++j) qpow[j] = qpow[j - 1] * q;

  // after the first step out of 0: M_1 = Z_1 - 1
  std::vector<double> v(j_max + 1), next(j_max + 1);
  for (std::size_t j = 0; j <= j_max; ++j) v[j] = qpow[j] * (1.0 - q);
  out.truncation_loss = qpow[j_max + 1];
  out.pmf.push_back(v[0]);
  v[0] = 0.0;  // absorbed
  for (std::size_t t = 2; t <= horizon; ++t) {
    CompensatedSum prefix;
    double alive = 0.0;
    for (std::size_t j = 0; j <= j_max; ++j) {
      prefix.add(v[j]);
      const double from_above = j + 1 <= j_max ? v[j + 1] * (1.0 - qpow[j + 1]) : 0.0;
      next[j] = prefix.value() * qpow[j] * (1.0 - q) + from_above;
      alive += v[j];
    }
    out.truncation_loss += alive * qpow[j_max + 1];
    out.pmf.push_back(next[0]);
    next[0] = 0.0;
    std::swap(v, next);
  }
  return out;
}

std::uint64_t hitting_time(GeometricStream& stream, std::uint64_t start, std::uint64_t level, bool strictly_positive,
                           std::uint64_t step_cap) {
  if (!strictly_positive && start <= level) return 0;
  ChainState m{start};
  for (std::uint64_t k = 1; k <= step_cap; ++k) {
    m = chain_step(m, stream.draw());
    if (m.value <= level) return k;
  }
  return step_cap + 1;
}

Estimate mean_hitting_time(double q, std::uint64_t start, std::uint64_t level, std::uint64_t reps,
                           std::uint64_t seed, std::uint64_t stream_index) {
  const MallowsParams params{q};
  if (reps < 2) throw std::invalid_argument("mean_hitting_time: reps must be >= 2");
  GeometricStream stream(params, seed, stream_id(StreamPurpose::kHitting, stream_index));
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto h = static_cast<double>(hitting_time(stream, start, level, false));
    sum += h;
    sum_sq += h * h;
  }
  return mean_estimate(sum, sum_sq, reps);
}

KacReport kac_check(double q, std::uint64_t blocks, std::uint64_t seed, unsigned workers, double eps) {
  const MallowsParams params{q};
  if (blocks < 2) throw std::invalid_argument("kac_check: need at least two samples per side");
  const auto mu = stationary_dist(q, eps);
  std::vector<double> cdf(mu.weights.size());
  std::partial_sum(mu.weights.begin(), mu.weights.end(), cdf.begin());

  constexpr std::uint64_t kChunks = 64;
  struct Sums {
    double ret_sq = 0, ret_4 = 0, hit = 0, hit_sq = 0;
  };
  std::vector<Sums> parts(kChunks);
  parallel_for(kChunks, workers, [&](std::uint64_t c) {
    const auto count = chunk_size(blocks, kChunks, c);
    GeometricStream ret_stream(params, seed, stream_id(StreamPurpose::kKacReturn, c));
    GeometricStream hit_stream(params, seed, stream_id(StreamPurpose::kKacStationary, c));
    Sums s;
    for (std::uint64_t b = 0; b < count; ++b) {
      const auto r = static_cast<double>(hitting_time(ret_stream, 0, 0, true));
      s.ret_sq += r * r;
      s.ret_4 += r * r * r * r;
      const double u = hit_stream.uniform();
      const auto start = static_cast<std::uint64_t>(
          std::min<std::ptrdiff_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                   static_cast<std::ptrdiff_t>(cdf.size()) - 1));
      const auto h = static_cast<double>(hitting_time(hit_stream, start, 0, false));
      s.hit += h;
      s.hit_sq += h * h;
    }
    parts[c] = s;
  });
  Sums total;
  for (const auto& s : parts) {
    total.ret_sq += s.ret_sq;
    total.ret_4 += s.ret_4;
    total.hit += s.hit;
    total.hit_sq += s.hit_sq;
  }
  KacReport rep;
  rep.second_moment = mean_estimate(total.ret_sq, total.ret_4, blocks);
  rep.stationary_hitting = mean_estimate(total.hit, total.hit_sq, blocks);
  rep.mu0 = mu.weights[0];
  rep.rhs = (2.0 * rep.stationary_hitting.value + 1.0) / rep.mu0;
  rep.rhs_std_error = 2.0 * rep.stationary_hitting.std_error / rep.mu0;
  const double combined = std::hypot(rep.second_moment.std_error, rep.rhs_std_error);
  rep.z_score = combined > 0 ? (rep.second_moment.value - rep.rhs) / combined : 0.0;
  rep.truncation_bound = mu.tail_mass_bound;
  return rep;
}

bool TailReport::decays() const noexcept { return points_used >= 3 && slope_upper95 < 0.0; }

TailReport return_tail_probe(double q, std::uint64_t start, const std::vector<std::uint64_t>& s_grid,
                             std::uint64_t reps, std::uint64_t seed, unsigned workers) {
  const MallowsParams params{q};
  if (s_grid.empty()) throw std::invalid_argument("return_tail_probe: empty grid");
  if (reps < 2) throw std::invalid_argument("return_tail_probe: reps must be >= 2");
  TailReport rep;
  rep.start = start;
  rep.reps = reps;
  std::vector<std::uint64_t> thresholds;
  for (const auto s : s_grid) thresholds.push_back(10 * start + s);
  const auto cap = *std::max_element(thresholds.begin(), thresholds.end());

  constexpr std::uint64_t kChunks = 64;
  std::vector<std::vector<std::uint64_t>> counts(kChunks, std::vector<std::uint64_t>(thresholds.size(), 0));
  parallel_for(kChunks, workers, [&](std::uint64_t c) {
    GeometricStream stream(params, seed, stream_id(StreamPurpose::kTail, c));
    const auto count = chunk_size(reps, kChunks, c);
    for (std::uint64_t r = 0; r < count; ++r) {
      // only whether R exceeds each threshold matters, so stop past the largest
      const auto ret = hitting_time(stream, start, 0, true, cap);
      for (std::size_t g = 0; g < thresholds.size(); ++g) counts[c][g] += ret > thresholds[g];
    }
  });

  std::vector<double> xs, ys;
  for (std::size_t g = 0; g < thresholds.size(); ++g) {
    TailPoint pt;
    pt.s = s_grid[g];
    pt.threshold = thresholds[g];
    for (const auto& part : counts) pt.exceed += part[g];
    pt.p_hat = static_cast<double>(pt.exceed) / static_cast<double>(reps);
    pt.std_error = std::sqrt(pt.p_hat * (1.0 - pt.p_hat) / static_cast<double>(reps));
    if (pt.exceed > 0) {
      xs.push_back(static_cast<double>(pt.s));
      ys.push_back(std::log(pt.p_hat));
    }
    rep.points.push_back(pt);
  }
  rep.points_used = xs.size();
  if (xs.size() >= 3) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    rep.slope = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double resid = ys[i] - (my + rep.slope * (xs[i] - mx));
      sse += resid * resid;
    }
    rep.slope_std_error = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    rep.slope_upper95 = rep.slope + boost::math::quantile(dist, 0.975) * rep.slope_std_error;
  }
  return rep;
}

std::vector<Estimate> return_below_tail(double q, std::uint64_t start, std::uint64_t level,
                                        const std::vector<std::uint64_t>& m_grid, std::uint64_t reps,
                                        std::uint64_t seed, std::uint64_t stream_index) {
  const MallowsParams params{q};
  if (m_grid.empty()) throw std::invalid_argument("return_below_tail: empty grid");
  GeometricStream stream(params, seed, stream_id(StreamPurpose::kTail, (std::uint64_t{1} << 40) + stream_index));
  const auto cap = *std::max_element(m_grid.begin(), m_grid.end());
  std::vector<std::uint64_t> exceed(m_grid.size(), 0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto ret = hitting_time(stream, start, level, true, cap);
    for (std::size_t g = 0; g < m_grid.size(); ++g) exceed[g] += ret > m_grid[g];
  }
  std::vector<Estimate> out;
  for (const auto e : exceed) {
    Estimate est;
    est.n_samples = reps;
    est.value = static_cast<double>(e) / static_cast<double>(reps);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(reps));
    out.push_back(est);
  }
  return out;
}

}  // namespace mallows
