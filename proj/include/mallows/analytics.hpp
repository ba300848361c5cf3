#pragma once

#include <cstdint>
#include <vector>

#include "mallows/params.hpp"
#include "mallows/rng.hpp"

namespace mallows {

/// Distribution on {0, ..., j_max} whose neglected mass beyond j_max is at
/// most tail_mass_bound.
struct TruncatedDistribution {
  std::vector<double> weights;
  std::size_t j_max = 0;
  double tail_mass_bound = 0.0;

  double total() const noexcept;
};

/// Row i of the chain kernel: P(i -> i-1) = 1 - q^i, P(i -> j) = q^j (1-q)
/// for j >= i.  Mass beyond j_max is q^(j_max+1).
TruncatedDistribution transition_row(std::uint64_t i, double q, std::size_t j_max);

/// Truncated Euler product prod_{k=1}^{K} (1 - q^k), with K the first index
/// at which q^(K+1) / (1-q) < eps.
double euler_mu0(double q, double eps = 1e-12);

/// Stationary law mu_j = mu_0 q^j / prod_{k<=j} (1 - q^k), cut where the
/// bound sum_{j > J} mu_j <= q^(J+1) / (1-q) drops below eps.
TruncatedDistribution stationary_dist(double q, double eps = 1e-12);

/// L1 norm of mu P - mu over {0, ..., j_max}, treating mu as zero beyond
/// its support.
double stationarity_residual(const TruncatedDistribution& mu, double q);
double stationarity_residual(double q, double eps = 1e-12);

struct FirstPassage {
  std::vector<double> pmf;    // pmf[t-1] = P_0(R_0^+ = t), t = 1..horizon
  double truncation_loss = 0; // total mass pushed beyond the truncated state space
  std::size_t j_max = 0;
};

/// Distribution of the first return time to 0, by propagating the
/// sub-probability vector of the chain killed at 0.
FirstPassage first_passage_pmf(double q, std::size_t horizon, double eps = 1e-12);

/// Estimate with its Monte Carlo standard error.
struct Estimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t n_samples = 0;
};

/// First time k > 0 (return=true) or k >= 0 (return=false) with M_k <= level,
/// starting from M_0 = start.
std::uint64_t hitting_time(GeometricStream& stream, std::uint64_t start, std::uint64_t level, bool strictly_positive,
                           std::uint64_t step_cap = 1'000'000'000);

/// E_start[time to reach <= level], time counted from 0.
Estimate mean_hitting_time(double q, std::uint64_t start, std::uint64_t level, std::uint64_t reps,
                           std::uint64_t seed, std::uint64_t stream_index = 0);

struct KacReport {
  Estimate second_moment;        // E_0 (R_0^+)^2
  Estimate stationary_hitting;   // E_mu R_0
  double mu0 = 0;
  double rhs = 0;                // (2 E_mu R_0 + 1) / mu_0
  double rhs_std_error = 0;
  double z_score = 0;            // (lhs - rhs) / combined SE
  double truncation_bound = 0;
};

/// Both sides of E_0 (R_0^+)^2 = (2 E_mu R_0 + 1) / mu_0 by simulation; the
/// stationary start is drawn from the truncated mu.
KacReport kac_check(double q, std::uint64_t blocks, std::uint64_t seed, unsigned workers = 1,
                    double eps = 1e-12);

struct TailPoint {
  std::uint64_t s = 0;
  std::uint64_t threshold = 0;   // 10 t + s
  std::uint64_t exceed = 0;
  double p_hat = 0;
  double std_error = 0;
};

struct TailReport {
  std::uint64_t start = 0;
  std::uint64_t reps = 0;
  std::vector<TailPoint> points;
  double slope = 0;              // least squares slope of ln p_hat against s
  double slope_std_error = 0;
  std::size_t points_used = 0;   // grid points with p_hat > 0 entering the fit
  /// slope + t_{0.975, dof} * SE < 0
  bool decays() const noexcept;
  double slope_upper95 = 0;
};

/// P_t[R_0^+ > 10 t + s] over the grid, and the exponential-decay fit.
TailReport return_tail_probe(double q, std::uint64_t start, const std::vector<std::uint64_t>& s_grid,
                             std::uint64_t reps, std::uint64_t seed, unsigned workers = 1);

/// P_{start}[R_level^+ > m] for each m, where R_level^+ is the first return
/// to or below `level`.
std::vector<Estimate> return_below_tail(double q, std::uint64_t start, std::uint64_t level,
                                        const std::vector<std::uint64_t>& m_grid, std::uint64_t reps,
                                        std::uint64_t seed, std::uint64_t stream_index = 0);

}  // namespace mallows
