#include "dccanet/garch.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "dccanet/error.hpp"
#include "dccanet/nelder_mead.hpp"

namespace dccanet::garch {

namespace {

double population_variance(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / n;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates: (log omega, logit of persistence / kMaxPersistence,
// logit of the alpha share of persistence).
GarchParams from_unconstrained(const std::array<double, 3>& u) {
  const double persistence = kMaxPersistence * logistic(u[1]);
  const double share = logistic(u[2]);
  return {std::exp(u[0]), persistence * share, persistence * (1.0 - share)};
}

std::array<double, 3> to_unconstrained(const GarchParams& p) {
  const double persistence = p.alpha + p.beta;
  return {std::log(p.omega), logit(persistence / kMaxPersistence), logit(p.alpha / persistence)};
}

double log_likelihood_with_seed(std::span<const double> returns, const GarchParams& params,
                                double initial_variance) {
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  double h = initial_variance;
  double ll = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (t > 0) h = params.omega + params.alpha * returns[t - 1] * returns[t - 1] + params.beta * h;
    ll -= 0.5 * (kLog2Pi + std::log(h) + returns[t] * returns[t] / h);
  }
  return ll;
}

}  // namespace

std::vector<double> conditional_variance(std::span<const double> returns, const GarchParams& params,
                                         double initial_variance) {
  std::vector<double> h(returns.size());
  if (h.empty()) return h;
  h[0] = initial_variance;
  for (std::size_t t = 1; t < returns.size(); ++t) {
    h[t] = params.omega + params.alpha * returns[t - 1] * returns[t - 1] + params.beta * h[t - 1];
  }
  return h;
}

double log_likelihood(std::span<const double> returns, const GarchParams& params) {
  return log_likelihood_with_seed(returns, params, population_variance(returns));
}

GarchFit fit(std::span<const double> returns) {
  if (returns.size() < kMinObservations) {
    throw Error(ErrorCode::too_short, "GARCH fit needs at least 50 observations");
  }
  const double variance = population_variance(returns);
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::degenerate, "GARCH fit on a zero-variance series");
  }

  const GarchParams start{0.05 * variance, 0.05, 0.90};
  const auto objective = [&](const std::array<double, 3>& u) {
    return -log_likelihood_with_seed(returns, from_unconstrained(u), variance);
  };
  const auto result = nelder_mead<3>(objective, to_unconstrained(start));

  GarchFit out;
  out.params = from_unconstrained(result.x);
  out.log_likelihood = -result.value;
  out.converged = result.converged;
  out.iterations = result.iterations;
  out.h = conditional_variance(returns, out.params, variance);
  return out;
}

std::vector<double> filter(std::span<const double> returns, const GarchFit& fit) {
  if (fit.h.size() != returns.size()) {
    throw Error(ErrorCode::invalid_argument, "GARCH filter: variance path length mismatch");
  }
  std::vector<double> out(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (!(fit.h[t] > 0.0)) {
      throw Error(ErrorCode::degenerate, "GARCH filter: non-positive conditional variance");
    }
    out[t] = returns[t] / std::sqrt(fit.h[t]);
  }
  return out;
}

std::vector<double> fit_and_filter(std::span<const double> returns, GarchFit* fit_out) {
  std::vector<double> demeaned(returns.begin(), returns.end());
  const double mean =
      std::accumulate(demeaned.begin(), demeaned.end(), 0.0) / static_cast<double>(demeaned.size());
  for (double& v : demeaned) v -= mean;
  GarchFit fitted = fit(demeaned);
  auto out = filter(demeaned, fitted);
  if (fit_out) *fit_out = std::move(fitted);
  return out;
}

}  // namespace dccanet::garch
