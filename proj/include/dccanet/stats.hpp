#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace dccanet {

inline constexpr std::array<int, 4> kReportedLags{1, 5, 10, 20};

enum class AcStatistic { returns, squared_returns };

struct SummaryStats {
  double ann_mean = 0.0;
  double ann_vol = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // raw, normal = 3
  std::map<int, double> ac;
  std::map<int, double> ac_sq;
  /// Ljung-Box p-value of the joint test over lags 1..lag.
  std::map<std::pair<AcStatistic, int>, double> significance;
};

/// Sample autocorrelation at `lag`, normalized by the full-sample variance.
double autocorrelation(std::span<const double> x, int lag);

/// Ljung-Box Q statistic over lags 1..max_lag.
double ljung_box_statistic(std::span<const double> x, int max_lag);

/// Upper-tail chi-square p-value of the Ljung-Box statistic with max_lag dof.
double ljung_box_pvalue(std::span<const double> x, int max_lag);

/// "", "*", "**" or "***" for p >= 0.05, < 0.05, < 0.01, < 0.001.
std::string_view significance_stars(double p_value) noexcept;

/// Summary battery for one return series. Throws on T < 21 or zero variance.
SummaryStats summarize(std::span<const double> returns, double trading_days_per_year = 252.0);

}  // namespace dccanet
