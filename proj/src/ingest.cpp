#include "dccanet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dccanet/error.hpp"
#include "dccanet/format.hpp"

namespace dccanet {

namespace {

int parse_fixed_digits(std::string_view text, std::size_t pos, std::size_t count) {
  int value = 0;
  for (std::size_t k = pos; k < pos + count; ++k) {
    const char c = text[k];
    if (c < '0' || c > '9') return -1;
    value = value * 10 + (c - '0');
  }
  return value;
}

bool parse_decimal(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* begin = text.data();
  const auto* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

Date parse_date(std::string_view text) {
  // Accept a trailing time-of-day component ("2013-03-05 00:00:00") but ignore it.
  if (text.size() > 10 && (text[10] == ' ' || text[10] == 'T')) text = text.substr(0, 10);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorCode::parse, "invalid ISO-8601 date '" + std::string(text) + "'");
  }
  const int y = parse_fixed_digits(text, 0, 4);
  const int m = parse_fixed_digits(text, 5, 2);
  const int d = parse_fixed_digits(text, 8, 2);
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (y < 0 || m < 0 || d < 0 || !ymd.ok()) {
    throw Error(ErrorCode::parse, "invalid ISO-8601 date '" + std::string(text) + "'");
  }
  return Date{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buffer;
}

AlignmentPolicy parse_alignment(std::string_view text) {
  if (text == "intersection") return AlignmentPolicy::intersection;
  if (text == "forward-fill" || text == "forward_fill") return AlignmentPolicy::forward_fill;
  throw Error(ErrorCode::invalid_argument,
              "unknown alignment policy '" + std::string(text) + "'");
}

std::string_view to_string(AlignmentPolicy policy) noexcept {
  return policy == AlignmentPolicy::intersection ? "intersection" : "forward-fill";
}

PricePanel PricePanel::slice(std::size_t first, std::size_t count) const {
  if (first + count > rows()) {
    throw Error(ErrorCode::invalid_argument, "panel slice out of range");
  }
  PricePanel out;
  out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(first),
                   dates.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.tickers = tickers;
  out.prices = prices.middleRows(static_cast<Eigen::Index>(first),
                                 static_cast<Eigen::Index>(count));
  out.alignment_policy = alignment_policy;
  return out;
}

std::vector<RawSeries> load_csv(const std::filesystem::path& path, std::string_view date_column,
                                const std::vector<std::string>& ticker_columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::parse, path.string() + ": missing header row");
  }
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  const auto header = split_csv_line(line);

  const auto date_it = std::find(header.begin(), header.end(), date_column);
  if (date_it == header.end()) {
    throw Error(ErrorCode::parse,
                path.string() + ": no date column named '" + std::string(date_column) + "'");
  }
  const auto date_index = static_cast<std::size_t>(date_it - header.begin());

  std::vector<std::size_t> columns;
  if (ticker_columns.empty()) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (k != date_index) columns.push_back(k);
    }
  } else {
    for (const auto& name : ticker_columns) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw Error(ErrorCode::parse, path.string() + ": no column named '" + name + "'");
      }
      columns.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }
  if (columns.empty()) throw Error(ErrorCode::parse, path.string() + ": no ticker columns");

  std::vector<RawSeries> series(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) series[c].ticker = header[columns[c]];

  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    const auto where = [&] { return path.string() + ": row " + std::to_string(row); };
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::parse, where() + ": expected " + std::to_string(header.size()) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    Date date;
    try {
      date = parse_date(fields[date_index]);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, where() + ": " + e.what());
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& cell = fields[columns[c]];
      if (cell.empty()) continue;
      double close = 0.0;
      if (!parse_decimal(cell, close)) {
        throw Error(ErrorCode::parse, where() + ": cannot parse price '" + cell + "' in column '" +
                                          series[c].ticker + "'");
      }
      if (close <= 0.0) {
        throw Error(ErrorCode::parse, where() + ": non-positive price " + cell + " in column '" +
                                          series[c].ticker + "'");
      }
      auto& obs = series[c].observations;
      if (!obs.empty() && obs.back().date >= date) {
        throw Error(ErrorCode::parse, where() + ": date " + format_date(date) +
                                          " is not after the previous row");
      }
      obs.push_back({date, close});
    }
  }
  return series;
}

PricePanel align(const std::vector<RawSeries>& series, AlignmentPolicy policy) {
  if (series.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "alignment needs at least two series");
  }
  std::set<std::string> seen;
  for (const auto& s : series) {
    if (s.observations.empty()) {
      throw Error(ErrorCode::invalid_argument, "series '" + s.ticker + "' is empty");
    }
    if (!seen.insert(s.ticker).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate ticker '" + s.ticker + "'");
    }
    for (std::size_t k = 0; k < s.observations.size(); ++k) {
      if (!(s.observations[k].close > 0.0) || !std::isfinite(s.observations[k].close)) {
        throw Error(ErrorCode::invalid_argument, "series '" + s.ticker + "' has a non-positive price");
      }
      if (k > 0 && s.observations[k].date <= s.observations[k - 1].date) {
        throw Error(ErrorCode::invalid_argument,
                    "series '" + s.ticker + "' dates are not strictly increasing");
      }
    }
  }

  PricePanel panel;
  panel.alignment_policy = policy;
  for (const auto& s : series) panel.tickers.push_back(s.ticker);

  if (policy == AlignmentPolicy::intersection) {
    std::vector<Date> common;
    for (const auto& obs : series.front().observations) common.push_back(obs.date);
    for (std::size_t k = 1; k < series.size(); ++k) {
      std::vector<Date> dates;
      for (const auto& obs : series[k].observations) dates.push_back(obs.date);
      std::vector<Date> next;
      std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
    if (common.empty()) throw Error(ErrorCode::invalid_argument, "empty date intersection");
    panel.dates = common;
    panel.prices.resize(static_cast<Eigen::Index>(common.size()),
                        static_cast<Eigen::Index>(series.size()));
    for (std::size_t c = 0; c < series.size(); ++c) {
      std::size_t r = 0;
      for (const auto& obs : series[c].observations) {
        if (r < common.size() && obs.date == common[r]) {
          panel.prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = obs.close;
          ++r;
        }
      }
    }
  } else {
    Date start = series.front().observations.front().date;
    for (const auto& s : series) start = std::max(start, s.observations.front().date);
    for (const auto& s : series) {
      if (s.observations.back().date < start) {
        throw Error(ErrorCode::invalid_argument,
                    "series '" + s.ticker + "' does not overlap the other series");
      }
    }
    std::set<Date> all;
    for (const auto& s : series) {
      for (const auto& obs : s.observations) {
        if (obs.date >= start) all.insert(obs.date);
      }
    }
    panel.dates.assign(all.begin(), all.end());
    panel.prices.resize(static_cast<Eigen::Index>(panel.dates.size()),
                        static_cast<Eigen::Index>(series.size()));
    for (std::size_t c = 0; c < series.size(); ++c) {
      const auto& obs = series[c].observations;
      std::size_t k = 0;
      double last = 0.0;
      for (std::size_t r = 0; r < panel.dates.size(); ++r) {
        while (k < obs.size() && obs[k].date <= panel.dates[r]) last = obs[k++].close;
        panel.prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = last;
      }
    }
  }
  if (panel.dates.size() < 2) {
    throw Error(ErrorCode::too_short, "aligned panel has fewer than two dates");
  }
  return panel;
}

std::vector<RawSeries> to_series(const PricePanel& panel) {
  std::vector<RawSeries> out(panel.cols());
  for (std::size_t c = 0; c < panel.cols(); ++c) {
    out[c].ticker = panel.tickers[c];
    out[c].observations.reserve(panel.rows());
    for (std::size_t r = 0; r < panel.rows(); ++r) {
      out[c].observations.push_back(
          {panel.dates[r], panel.prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))});
    }
  }
  return out;
}

Eigen::MatrixXd standardize_prices(const PricePanel& panel) {
  Eigen::MatrixXd out(panel.prices.rows(), panel.prices.cols());
  const auto n = static_cast<double>(panel.prices.rows());
  for (Eigen::Index c = 0; c < panel.prices.cols(); ++c) {
    const auto col = panel.prices.col(c);
    const double mean = col.sum() / n;
    const double variance = (col.array() - mean).square().sum() / n;
    if (!(variance > 0.0)) {
      throw Error(ErrorCode::degenerate,
                  "column '" + panel.tickers[static_cast<std::size_t>(c)] + "' is constant");
    }
    out.col(c) = (col.array() - mean) / std::sqrt(variance);
  }
  return out;
}

ReturnPanel log_returns(const PricePanel& panel) {
  if (panel.rows() < 2) throw Error(ErrorCode::too_short, "need at least two prices");
  ReturnPanel out;
  out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  out.tickers = panel.tickers;
  const Eigen::ArrayXXd logp = panel.prices.array().log();
  const Eigen::Index t = logp.rows();
  out.returns = (logp.bottomRows(t - 1) - logp.topRows(t - 1)).matrix();
  return out;
}

void write_panel_csv(const std::filesystem::path& path, std::string_view date_column,
                     const std::vector<Date>& dates, const std::vector<std::string>& tickers,
                     const Eigen::MatrixXd& values, int significant_digits) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << csv_escape(date_column);
  for (const auto& t : tickers) out << ',' << csv_escape(t);
  out << '\n';
  for (std::size_t r = 0; r < dates.size(); ++r) {
    out << format_date(dates[r]);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      out << ',' << format_number(values(static_cast<Eigen::Index>(r), c), significant_digits);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace dccanet
