#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dccanet {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar day ("YYYY-MM-DD"). Throws Error(parse).
Date parse_date(std::string_view text);
std::string format_date(Date date);

struct Observation {
  Date date;
  double close;
};

/// Closing prices of one instrument, dates strictly increasing, closes > 0.
struct RawSeries {
  std::string ticker;
  std::vector<Observation> observations;
};

enum class AlignmentPolicy { intersection, forward_fill };

AlignmentPolicy parse_alignment(std::string_view text);
std::string_view to_string(AlignmentPolicy policy) noexcept;

/// Date-aligned T x N matrix of positive closing prices with no gaps.
struct PricePanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd prices;  // rows = dates, cols = tickers
  AlignmentPolicy alignment_policy = AlignmentPolicy::intersection;

  std::size_t rows() const { return dates.size(); }
  std::size_t cols() const { return tickers.size(); }

  /// Rows [first, first + count) as a new panel.
  PricePanel slice(std::size_t first, std::size_t count) const;
};

/// Log returns computed from a PricePanel. dates[k] is the date of the later
/// price of the pair, so a panel of T prices gives T - 1 returns.
struct ReturnPanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd returns;

  std::size_t rows() const { return dates.size(); }
  std::size_t cols() const { return tickers.size(); }
};

/// Reads a wide CSV (date column + one column per ticker). An empty
/// `ticker_columns` selects every column except the date column. Empty cells
/// are omitted from the corresponding series.
std::vector<RawSeries> load_csv(const std::filesystem::path& path,
                                std::string_view date_column = "Date",
                                const std::vector<std::string>& ticker_columns = {});

PricePanel align(const std::vector<RawSeries>& series,
                 AlignmentPolicy policy = AlignmentPolicy::intersection);

/// Rebuilds the per-ticker series of a panel, so that align(to_series(p)) == p.
std::vector<RawSeries> to_series(const PricePanel& panel);

/// (P - mean) / population std, per column. Display/export only.
Eigen::MatrixXd standardize_prices(const PricePanel& panel);

/// r_t = ln P_t - ln P_{t-1} on raw prices.
ReturnPanel log_returns(const PricePanel& panel);

/// Writes `values` (rows aligned with `dates`) in the same wide layout the
/// loader reads.
void write_panel_csv(const std::filesystem::path& path, std::string_view date_column,
                     const std::vector<Date>& dates, const std::vector<std::string>& tickers,
                     const Eigen::MatrixXd& values, int significant_digits = 17);

}  // namespace dccanet
