#include "mallows/estimators.hpp"

#include <cmath>
#include <numeric>

#include "mallows/parallel.hpp"

namespace mallows {

void BlockMoments::add(std::uint64_t x, std::uint64_t y) {
  ++count_;
  uint128_t xi = 1;
  for (int i = 0; i <= kDegree; ++i) {
    uint128_t term = xi;
    for (int j = 0; i + j <= kDegree; ++j) {
      sums_[i][j] += term;
      term *= y;
    }
    xi *= x;
  }
}

BlockMoments& BlockMoments::operator+=(const BlockMoments& other) {
  count_ += other.count_;
  for (int i = 0; i <= kDegree; ++i)
    for (int j = 0; j <= kDegree; ++j) sums_[i][j] += other.sums_[i][j];
  return *this;
}

BlockMoments& BlockMoments::operator-=(const BlockMoments& other) {
  count_ -= other.count_;
  for (int i = 0; i <= kDegree; ++i)
    for (int j = 0; j <= kDegree; ++j) sums_[i][j] -= other.sums_[i][j];
  return *this;
}

long double BlockMoments::moment(int i, int j) const {
  return static_cast<long double>(power_sum(i, j)) / static_cast<long double>(count_);
}

namespace {

// Polynomial in (X, Y) of total degree <= 4; c[i][j] multiplies X^i Y^j.
struct Poly {
  std::array<std::array<long double, 5>, 5> c{};

  static Poly constant(long double v) {
    Poly p;
    p.c[0][0] = v;
    return p;
  }
  static Poly x() {
    Poly p;
    p.c[1][0] = 1;
    return p;
  }
  static Poly y() {
    Poly p;
    p.c[0][1] = 1;
    return p;
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) r.c[i][j] += o.c[i][j];
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * -1.0L; }
  Poly operator*(long double s) const {
    Poly r = *this;
    for (auto& row : r.c)
      for (auto& v : row) v *= s;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; i + j < 5; ++j)
        for (int k = 0; i + j + k < 5; ++k)
          for (int l = 0; i + j + k + l < 5; ++l) r.c[i + k][j + l] += c[i][j] * o.c[k][l];
    return r;
  }
  long double expect(const BlockMoments& m) const {
    long double e = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; i + j < 5; ++j)
        if (c[i][j] != 0) e += c[i][j] * m.moment(i, j);
    return e;
  }
};

struct PointEstimates {
  long double mean_x, a, eta2, mu0, sigma2;
};

PointEstimates point_estimates(const BlockMoments& m) {
  PointEstimates p;
  const long double b = static_cast<long double>(m.count());
  p.mean_x = m.moment(1, 0);
  p.a = static_cast<long double>(m.power_sum(0, 1)) / static_cast<long double>(m.power_sum(1, 0));
  // sum (Y - aX)^2 = S02 - 2a S11 + a^2 S20; the residuals sum to zero.
  const long double ss = static_cast<long double>(m.power_sum(0, 2)) -
                         2 * p.a * static_cast<long double>(m.power_sum(1, 1)) +
                         p.a * p.a * static_cast<long double>(m.power_sum(2, 0));
  p.eta2 = ss / (b - 1);
  p.mu0 = 1 / p.mean_x;
  p.sigma2 = p.mu0 * p.eta2;
  return p;
}

}  // namespace

CltConstants constants_from_moments(const BlockMoments& m, double q) {
  if (m.count() < 2) throw std::invalid_argument("constants_from_moments: need at least two blocks");
  const auto p = point_estimates(m);
  // relative tolerance: cancellation in the expanded sum leaves O(ulp) noise
  if (!(p.eta2 > 1e-12L * m.moment(0, 2))) {
    throw DegenerateEstimate("eta^2 estimate is zero: Y = aX on every block");
  }
  CltConstants c;
  c.q = q;
  c.n_blocks = m.count();
  c.a_hat = static_cast<double>(p.a);
  c.eta2_hat = static_cast<double>(p.eta2);
  c.eta_hat = std::sqrt(c.eta2_hat);
  c.mu0_hat = static_cast<double>(p.mu0);
  c.sigma_hat = std::sqrt(c.mu0_hat) * c.eta_hat;

  // Influence functions of each estimator; Var ~ E[IF^2] / B.
  const Poly X = Poly::x(), Y = Poly::y();
  const long double mx = p.mean_x;
  const Poly centred_x = X - Poly::constant(mx);
  const Poly resid = Y - X * p.a;
  const long double e_x_resid = (X * resid).expect(m);
  const Poly if_mu0 = centred_x * (-1 / (mx * mx));
  const Poly if_a = resid * (1 / mx);
  const Poly if_eta2 = resid * resid - Poly::constant(p.eta2) - resid * (2 * e_x_resid / mx);
  const Poly if_sigma2 = if_eta2 * (1 / mx) - centred_x * (p.eta2 / (mx * mx));
  const long double b = static_cast<long double>(m.count());
  auto se = [&](const Poly& f) { return static_cast<double>(std::sqrt(std::max(0.0L, (f * f).expect(m)) / b)); };
  c.se_mu0 = se(if_mu0);
  c.se_a = se(if_a);
  c.se_eta = se(if_eta2) / (2 * c.eta_hat);
  c.se_sigma = se(if_sigma2) / (2 * c.sigma_hat);
  return c;
}

void attach_jackknife(CltConstants& c, const std::vector<BlockMoments>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("attach_jackknife: need at least two groups");
  BlockMoments total;
  for (const auto& g : groups) total += g;
  const auto g_count = static_cast<long double>(groups.size());
  std::vector<PointEstimates> loo;
  loo.reserve(groups.size());
  for (const auto& g : groups) {
    BlockMoments rest = total;
    rest -= g;
    loo.push_back(point_estimates(rest));
  }
  auto jk = [&](auto field) {
    long double mean = 0;
    for (const auto& e : loo) mean += field(e);
    mean /= g_count;
    long double ss = 0;
    for (const auto& e : loo) ss += (field(e) - mean) * (field(e) - mean);
    return static_cast<double>(std::sqrt((g_count - 1) / g_count * ss));
  };
  c.jk_se_a = jk([](const PointEstimates& e) { return e.a; });
  c.jk_se_mu0 = jk([](const PointEstimates& e) { return e.mu0; });
  c.jk_se_eta = jk([](const PointEstimates& e) { return std::sqrt(e.eta2); });
  c.jk_se_sigma = jk([](const PointEstimates& e) { return std::sqrt(e.sigma2); });
}

std::vector<BlockMoments> collect_block_moments(double q, std::uint64_t blocks, std::uint64_t seed,
                                                std::uint64_t groups, unsigned workers, StreamPurpose purpose) {
  const MallowsParams params{q};
  if (groups < 1) throw std::invalid_argument("collect_block_moments: groups must be >= 1");
  groups = std::min(groups, std::max<std::uint64_t>(blocks, 1));
  std::vector<BlockMoments> out(groups);
  parallel_for(groups, workers, [&](std::uint64_t g) {
    BlockSampler sampler(params, GeometricStream(params, seed, stream_id(purpose, g)));
    const auto count = chunk_size(blocks, groups, g);
    BlockMoments m;
    for (std::uint64_t b = 0; b < count; ++b) m.add(sampler.next_stats());
    out[g] = m;
  });
  return out;
}

CltConstants estimate_constants(double q, std::uint64_t blocks, std::uint64_t seed, unsigned workers,
                                std::uint64_t groups) {
  if (blocks < 1000) throw std::invalid_argument("estimate_constants: need at least 1000 blocks");
  const auto parts = collect_block_moments(q, blocks, seed, groups, workers);
  BlockMoments total;
  for (const auto& p : parts) total += p;
  auto c = constants_from_moments(total, q);
  attach_jackknife(c, parts);
  c.seed = seed;
  c.stream_first = stream_id(StreamPurpose::kEstimate, 0);
  c.stream_count = parts.size();
  return c;
}

}  // namespace mallows
