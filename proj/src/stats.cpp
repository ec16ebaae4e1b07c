#include "dccanet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dccanet/error.hpp"

namespace dccanet {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Exact test: rounding in the mean leaves a tiny variance for constant input.
bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double autocorrelation(std::span<const double> x, int lag) {
  const auto n = x.size();
  if (lag < 0 || static_cast<std::size_t>(lag) >= n) {
    throw Error(ErrorCode::invalid_argument, "autocorrelation lag out of range");
  }
  if (is_constant(x)) throw Error(ErrorCode::degenerate, "zero-variance series");
  const double m = mean_of(x);
  double denom = 0.0;
  for (double v : x) denom += (v - m) * (v - m);
  if (!(denom > 0.0)) throw Error(ErrorCode::degenerate, "zero-variance series");
  double num = 0.0;
  for (std::size_t t = static_cast<std::size_t>(lag); t < n; ++t) {
    num += (x[t] - m) * (x[t - static_cast<std::size_t>(lag)] - m);
  }
  return num / denom;
}

double ljung_box_statistic(std::span<const double> x, int max_lag) {
  const auto n = static_cast<double>(x.size());
  double q = 0.0;
  for (int k = 1; k <= max_lag; ++k) {
    const double r = autocorrelation(x, k);
    q += r * r / (n - k);
  }
  return n * (n + 2.0) * q;
}

double ljung_box_pvalue(std::span<const double> x, int max_lag) {
  const boost::math::chi_squared dist(static_cast<double>(max_lag));
  return boost::math::cdf(boost::math::complement(dist, ljung_box_statistic(x, max_lag)));
}

std::string_view significance_stars(double p_value) noexcept {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

SummaryStats summarize(std::span<const double> returns, double trading_days_per_year) {
  constexpr int largest_lag = kReportedLags.back();
  if (returns.size() < static_cast<std::size_t>(largest_lag + 1)) {
    throw Error(ErrorCode::too_short, "summary statistics need at least 21 returns");
  }
  if (is_constant(returns)) throw Error(ErrorCode::degenerate, "zero-variance return series");
  const auto n = static_cast<double>(returns.size());
  const double m = mean_of(returns);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : returns) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (!(m2 > 0.0)) throw Error(ErrorCode::degenerate, "zero-variance return series");
  const double sample_var = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;

  SummaryStats out;
  out.ann_mean = m * trading_days_per_year;
  out.ann_vol = std::sqrt(sample_var * trading_days_per_year);
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2);

  std::vector<double> squared(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) squared[t] = returns[t] * returns[t];
  const bool squared_degenerate = is_constant(squared);

  for (int lag : kReportedLags) {
    out.ac[lag] = autocorrelation(returns, lag);
    out.significance[{AcStatistic::returns, lag}] = ljung_box_pvalue(returns, lag);
    if (squared_degenerate) {
      // e.g. returns of constant magnitude with alternating sign
      out.ac_sq[lag] = 0.0;
      out.significance[{AcStatistic::squared_returns, lag}] = 1.0;
    } else {
      out.ac_sq[lag] = autocorrelation(squared, lag);
      out.significance[{AcStatistic::squared_returns, lag}] = ljung_box_pvalue(squared, lag);
    }
  }
  return out;
}

}  // namespace dccanet
