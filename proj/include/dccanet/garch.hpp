#pragma once

#include <span>
#include <vector>

namespace dccanet::garch {

/// h_t = omega + alpha * r_{t-1}^2 + beta * h_{t-1}
struct GarchParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  bool feasible() const noexcept {
    return omega > 0.0 && alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0;
  }
  double unconditional_variance() const noexcept { return omega / (1.0 - alpha - beta); }
};

struct GarchFit {
  GarchParams params;
  double log_likelihood = 0.0;
  std::vector<double> h;
  bool converged = false;
  int iterations = 0;
};

inline constexpr std::size_t kMinObservations = 50;
/// Upper bound on alpha + beta enforced by the reparameterization.
inline constexpr double kMaxPersistence = 0.9999;

/// Conditional variances for `returns`, seeded with h_1 = initial_variance.
std::vector<double> conditional_variance(std::span<const double> returns, const GarchParams& params,
                                         double initial_variance);

/// Gaussian log-likelihood sum_t -0.5 (ln 2pi + ln h_t + r_t^2 / h_t), with
/// h_1 set to the sample variance of `returns`.
double log_likelihood(std::span<const double> returns, const GarchParams& params);

/// Maximum-likelihood GARCH(1,1) fit on a demeaned series. Deterministic.
/// Throws Error(too_short) for fewer than 50 points and Error(degenerate) for
/// zero variance.
GarchFit fit(std::span<const double> returns);

/// r_t / sqrt(h_t).
std::vector<double> filter(std::span<const double> returns, const GarchFit& fit);

/// Demeans, fits and filters in one step.
std::vector<double> fit_and_filter(std::span<const double> returns, GarchFit* fit_out = nullptr);

}  // namespace dccanet::garch
