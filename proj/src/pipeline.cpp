#include "dccanet/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "dccanet/parallel.hpp"

namespace dccanet::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad_choice(std::string_view what, std::string_view text) {
  throw Error(ErrorCode::invalid_argument,
              "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace

GarchMode parse_garch_mode(std::string_view text) {
  if (text == "off" || text == "none") return GarchMode::off;
  if (text == "per-window" || text == "per_window") return GarchMode::per_window;
  if (text == "global") return GarchMode::global;
  bad_choice("GARCH mode", text);
}

EigenTarget parse_eigen_target(std::string_view text) {
  if (text == "mst") return EigenTarget::mst;
  if (text == "full") return EigenTarget::full;
  if (text == "both") return EigenTarget::both;
  bad_choice("eigen target", text);
}

EigenWeights parse_eigen_weights(std::string_view text) {
  if (text == "distance") return EigenWeights::distance;
  if (text == "abs-rho" || text == "abs_rho") return EigenWeights::abs_rho;
  bad_choice("eigen weights", text);
}

ConnectednessInput parse_connectedness_input(std::string_view text) {
  if (text == "raw") return ConnectednessInput::raw;
  if (text == "filtered") return ConnectednessInput::filtered;
  bad_choice("connectedness input", text);
}

dcca::BoxScheme parse_box_scheme(std::string_view text) {
  if (text == "forward") return dcca::BoxScheme::forward;
  if (text == "forward-backward" || text == "forward_backward") {
    return dcca::BoxScheme::forward_backward;
  }
  bad_choice("box scheme", text);
}

std::string_view to_string(GarchMode mode) noexcept {
  switch (mode) {
    case GarchMode::off: return "off";
    case GarchMode::per_window: return "per-window";
    case GarchMode::global: return "global";
  }
  return "";
}

std::string_view to_string(EigenTarget target) noexcept {
  switch (target) {
    case EigenTarget::mst: return "mst";
    case EigenTarget::full: return "full";
    case EigenTarget::both: return "both";
  }
  return "";
}

std::string_view to_string(EigenWeights weights) noexcept {
  return weights == EigenWeights::distance ? "distance" : "abs-rho";
}

std::string_view to_string(ConnectednessInput input) noexcept {
  return input == ConnectednessInput::raw ? "raw" : "filtered";
}

std::string_view to_string(dcca::BoxScheme scheme) noexcept {
  return scheme == dcca::BoxScheme::forward ? "forward" : "forward-backward";
}

std::vector<int> RollingConfig::effective_scales() const {
  std::set<int> all(scales.begin(), scales.end());
  all.insert(dccc_pair.first);
  all.insert(dccc_pair.second);
  all.insert(resolved_eigen_scale());
  return {all.begin(), all.end()};
}

std::vector<std::string> RollingConfig::validate(std::size_t panel_rows, std::size_t tickers) const {
  std::vector<std::string> errors;
  if (window < 3) errors.push_back("window must be at least 3 price rows");
  if (step < 1) errors.push_back("step must be at least 1");
  if (scales.empty()) errors.push_back("at least one scale is required");
  for (int s : effective_scales()) {
    if (s < dcca::kMinScale) {
      errors.push_back("scale " + std::to_string(s) + " is below the minimum of 4");
    }
  }
  if (dccc_pair.first >= dccc_pair.second) {
    errors.push_back("DCCC pair must satisfy s1 < s2 (got " + std::to_string(dccc_pair.first) +
                     ", " + std::to_string(dccc_pair.second) + ")");
  }
  const int largest = effective_scales().back();
  if (window - 1 < 2 * largest) {
    errors.push_back("window of " + std::to_string(window) + " prices gives " +
                     std::to_string(window - 1) + " returns, fewer than two boxes of the largest scale " +
                     std::to_string(largest));
  }
  if (garch != GarchMode::off && window - 1 < static_cast<int>(garch::kMinObservations) &&
      garch == GarchMode::per_window) {
    errors.push_back("per-window GARCH needs at least 50 returns per window");
  }
  if (connectedness) {
    if (connectedness->lags < 1) errors.push_back("connectedness lags must be at least 1");
    if (connectedness->horizon < 1) errors.push_back("connectedness horizon must be at least 1");
    if (tickers > 0) {
      const auto n = static_cast<int>(tickers);
      if (window - 1 < n * connectedness->lags + n + 10) {
        errors.push_back("window too short for a VAR(" + std::to_string(connectedness->lags) +
                         ") on " + std::to_string(n) + " series");
      }
    }
  }
  if (tickers > 0 && tickers < 3) errors.push_back("the rolling pipeline needs at least 3 series");
  if (panel_rows > 0 && panel_rows < static_cast<std::size_t>(std::max(window, 0))) {
    errors.push_back("panel has " + std::to_string(panel_rows) + " rows, fewer than the window of " +
                     std::to_string(window));
  }
  return errors;
}

const ScaleRecord& WindowRecord::at_scale(int s) const {
  for (const auto& r : scales) {
    if (r.scale == s) return r;
  }
  throw Error(ErrorCode::invalid_argument, "no record for scale " + std::to_string(s));
}

const SpectrumRecord& WindowRecord::spectrum() const {
  if (spectrum_mst) return *spectrum_mst;
  return spectrum_full.value();
}

std::vector<std::string> IndicatorSeries::column_names() const {
  std::vector<std::string> names;
  const auto scales = config.effective_scales();
  for (int s : scales) names.push_back("L_" + std::to_string(s));
  names.insert(names.end(), {"dccc", "dccc_reciprocal", "dccc_rescaled", "lambda_max",
                             "mean_degree", "max_degree"});
  if (config.eigen_target == EigenTarget::both) {
    names.insert(names.end(), {"lambda_max_mst", "lambda_max_full"});
  }
  for (int s : scales) {
    for (const char* m : {"edge_mean_", "edge_variance_", "edge_skewness_", "edge_kurtosis_"}) {
      names.push_back(m + std::to_string(s));
    }
  }
  if (config.connectedness) names.push_back("total_connectedness");
  return names;
}

std::vector<double> IndicatorSeries::column(std::string_view name) const {
  std::vector<double> out;
  out.reserve(records.size());
  const auto each = [&](auto&& get) {
    for (const auto& r : records) out.push_back(get(r));
    return out;
  };
  const auto scale_suffix = [&](std::string_view prefix) -> std::optional<int> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    const auto digits = name.substr(prefix.size());
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
    return std::stoi(std::string(digits));
  };

  if (name == "dccc") return each([](const WindowRecord& r) { return r.dccc; });
  if (name == "dccc_reciprocal") return each([](const WindowRecord& r) { return r.dccc_reciprocal; });
  if (name == "dccc_rescaled") return netgraph::rescale_unit_interval(column("dccc"));
  if (name == "lambda_max") return each([](const WindowRecord& r) { return r.spectrum().lambda_max; });
  if (name == "mean_degree") return each([](const WindowRecord& r) { return r.spectrum().mean_degree; });
  if (name == "max_degree") return each([](const WindowRecord& r) { return r.spectrum().max_degree; });
  if (name == "lambda_max_mst") {
    return each([](const WindowRecord& r) { return r.spectrum_mst ? r.spectrum_mst->lambda_max : kNaN; });
  }
  if (name == "lambda_max_full") {
    return each([](const WindowRecord& r) { return r.spectrum_full ? r.spectrum_full->lambda_max : kNaN; });
  }
  if (name == "total_connectedness") {
    return each([](const WindowRecord& r) { return r.connectedness ? r.connectedness->total : kNaN; });
  }
  if (const auto s = scale_suffix("L_")) {
    return each([&](const WindowRecord& r) { return r.at_scale(*s).tree_length; });
  }
  if (const auto s = scale_suffix("edge_mean_")) {
    return each([&](const WindowRecord& r) { return r.at_scale(*s).moments.mean; });
  }
  if (const auto s = scale_suffix("edge_variance_")) {
    return each([&](const WindowRecord& r) { return r.at_scale(*s).moments.variance; });
  }
  if (const auto s = scale_suffix("edge_skewness_")) {
    return each([&](const WindowRecord& r) { return r.at_scale(*s).moments.skewness; });
  }
  if (const auto s = scale_suffix("edge_kurtosis_")) {
    return each([&](const WindowRecord& r) { return r.at_scale(*s).moments.kurtosis; });
  }
  throw Error(ErrorCode::invalid_argument, "unknown indicator column '" + std::string(name) + "'");
}

std::vector<Date> IndicatorSeries::end_dates() const {
  std::vector<Date> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.window_end);
  return out;
}

std::uint64_t content_hash(std::span<const double> values) {
  std::uint64_t hash = 14695981039346656037ull;
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      hash ^= bits & 0xffu;
      hash *= 1099511628211ull;
      bits >>= 8;
    }
  }
  return hash;
}

namespace {

GarchCache::Entry compute_garch(std::span<const double> returns) {
  garch::GarchFit fit;
  GarchCache::Entry entry;
  entry.filtered = garch::fit_and_filter(returns, &fit);
  entry.diagnostics = {fit.params, fit.log_likelihood, fit.converged, fit.iterations};
  return entry;
}

}  // namespace

GarchCache::Entry GarchCache::fit_and_filter(std::span<const double> returns) {
  const auto key = content_hash(returns);
  {
    std::lock_guard lock(mutex_);
    const auto [first, last] = entries_.equal_range(key);
    for (auto it = first; it != last; ++it) {
      if (std::equal(it->second.input.begin(), it->second.input.end(), returns.begin(),
                     returns.end())) {
        ++hits_;
        return it->second.entry;
      }
    }
  }
  auto entry = compute_garch(returns);
  std::lock_guard lock(mutex_);
  if (entries_.size() < max_entries_) {
    entries_.emplace(key, Stored{{returns.begin(), returns.end()}, entry});
  }
  return entry;
}

std::size_t GarchCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t GarchCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

Eigen::MatrixXd eigen_matrix_for(const dcca::DccaMatrix& rho, const Eigen::MatrixXd& distance,
                                 EigenWeights weights) {
  if (weights == EigenWeights::distance) return distance;
  Eigen::MatrixXd out = rho.rho.cwiseAbs();
  out.diagonal().setZero();
  return out;
}

SpectrumRecord spectrum_of(const Eigen::MatrixXd& a) {
  const auto s = netgraph::dominant_eigenvalue(a);
  return {s.lambda_max, s.mean_degree, s.max_degree, s.iterations, s.converged};
}

struct WindowInputs {
  Eigen::MatrixXd returns;   // raw log returns, w - 1 rows
  Eigen::MatrixXd filtered;  // DCCA input
  std::vector<GarchDiagnostics> garch;
};

WindowRecord evaluate_window(const WindowInputs& in, const RollingConfig& config) {
  WindowRecord record;
  const auto scales = config.effective_scales();
  const int eigen_scale = config.resolved_eigen_scale();
  for (int s : scales) {
    const auto rho = dcca::dcca_matrix(in.filtered, s, config.box_scheme);
    const auto distance = dcca::to_distance(rho);
    const auto mst = netgraph::prim_mst(distance.d, s);

    ScaleRecord sr;
    sr.scale = s;
    sr.tree_length = mst.tree_length;
    sr.moments = netgraph::edge_moments(mst);
    if (!config.keep_density) sr.moments.density.clear();
    sr.mst_edges = mst.edges;
    sr.clamps = rho.clamps;
    record.scales.push_back(std::move(sr));

    if (s == eigen_scale) {
      const Eigen::MatrixXd full = eigen_matrix_for(rho, distance.d, config.eigen_weights);
      if (config.eigen_target != EigenTarget::full) {
        Eigen::MatrixXd restricted = Eigen::MatrixXd::Zero(full.rows(), full.cols());
        for (const auto& e : mst.edges) {
          restricted(e.i, e.j) = full(e.i, e.j);
          restricted(e.j, e.i) = full(e.j, e.i);
        }
        record.spectrum_mst = spectrum_of(restricted);
      }
      if (config.eigen_target != EigenTarget::mst) record.spectrum_full = spectrum_of(full);
    }
  }
  const double l_short = record.at_scale(config.dccc_pair.first).tree_length;
  const double l_long = record.at_scale(config.dccc_pair.second).tree_length;
  record.dccc = netgraph::dccc(l_short, l_long);
  record.dccc_reciprocal = netgraph::dccc(l_long, l_short);
  record.garch = in.garch;
  return record;
}

Eigen::MatrixXd demeaned(const Eigen::MatrixXd& m) {
  return m.rowwise() - m.colwise().mean();
}

}  // namespace

IndicatorSeries run(const PricePanel& panel, const RollingConfig& config, GarchCache* cache) {
  if (const auto errors = config.validate(panel.rows(), panel.cols()); !errors.empty()) {
    std::ostringstream msg;
    msg << "invalid rolling configuration:";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }

  IndicatorSeries out;
  out.config = config;
  out.tickers = panel.tickers;
  const auto w = static_cast<std::size_t>(config.window);
  const auto step = static_cast<std::size_t>(config.step);
  out.window_count = (panel.rows() - w) / step + 1;

  const ReturnPanel returns = log_returns(panel);
  const auto n = static_cast<Eigen::Index>(panel.cols());

  Eigen::MatrixXd global_filtered;
  if (config.garch == GarchMode::global) {
    global_filtered.resize(returns.returns.rows(), n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::span<const double> col(returns.returns.col(c).data(),
                                        static_cast<std::size_t>(returns.returns.rows()));
      garch::GarchFit fit;
      const auto filtered = garch::fit_and_filter(col, &fit);
      global_filtered.col(c) = Eigen::Map<const Eigen::VectorXd>(filtered.data(), col.size());
      out.global_garch.push_back({fit.params, fit.log_likelihood, fit.converged, fit.iterations});
    }
  }

  std::vector<std::optional<WindowRecord>> slots(out.window_count);
  std::vector<std::optional<WindowGap>> gaps(out.window_count);
  std::vector<std::optional<WindowGap>> connectedness_gaps(out.window_count);

  parallel_for(out.window_count, config.threads, [&](std::size_t k) {
    const std::size_t first = k * step;
    const auto rows = static_cast<Eigen::Index>(w - 1);
    try {
      WindowInputs in;
      in.returns = returns.returns.middleRows(static_cast<Eigen::Index>(first), rows);
      switch (config.garch) {
        case GarchMode::off:
          in.filtered = demeaned(in.returns);
          break;
        case GarchMode::global:
          in.filtered = global_filtered.middleRows(static_cast<Eigen::Index>(first), rows);
          break;
        case GarchMode::per_window:
          in.filtered.resize(rows, n);
          for (Eigen::Index c = 0; c < n; ++c) {
            const std::span<const double> col(in.returns.col(c).data(), static_cast<std::size_t>(rows));
            auto entry = cache ? cache->fit_and_filter(col) : compute_garch(col);
            in.filtered.col(c) = Eigen::Map<const Eigen::VectorXd>(entry.filtered.data(), rows);
            in.garch.push_back(entry.diagnostics);
          }
          break;
      }
      WindowRecord record = evaluate_window(in, config);
      record.window = k;
      record.window_start = panel.dates[first];
      record.window_end = panel.dates[first + w - 1];
      if (config.connectedness) {
        try {
          const auto& var_input = config.connectedness->input == ConnectednessInput::raw
                                      ? in.returns
                                      : in.filtered;
          const auto model = connectedness::fit_var(var_input, config.connectedness->lags);
          record.connectedness = connectedness::connectedness_table(
              connectedness::gvd(model, config.connectedness->horizon));
        } catch (const Error& e) {
          connectedness_gaps[k] = WindowGap{k, e.code(), e.what()};
        }
      }
      slots[k] = std::move(record);
    } catch (const Error& e) {
      gaps[k] = WindowGap{k, e.code(), e.what()};
    }
  });

  for (std::size_t k = 0; k < out.window_count; ++k) {
    if (slots[k]) out.records.push_back(std::move(*slots[k]));
    if (gaps[k]) out.gaps.push_back(std::move(*gaps[k]));
    if (connectedness_gaps[k]) out.connectedness_gaps.push_back(std::move(*connectedness_gaps[k]));
  }
  return out;
}

double indicator_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::invalid_argument, "indicator columns have different lengths");
  }
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::isfinite(a[k]) && std::isfinite(b[k])) pairs.emplace_back(a[k], b[k]);
  }
  if (pairs.size() < 30) {
    throw Error(ErrorCode::too_short, "indicator correlation needs at least 30 paired records, got " +
                                          std::to_string(pairs.size()));
  }
  const auto n = static_cast<double>(pairs.size());
  double ma = 0.0, mb = 0.0;
  for (const auto& [x, y] : pairs) {
    ma += x;
    mb += y;
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (const auto& [x, y] : pairs) {
    sab += (x - ma) * (y - mb);
    saa += (x - ma) * (x - ma);
    sbb += (y - mb) * (y - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) {
    throw Error(ErrorCode::degenerate, "indicator correlation of a constant column");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::map<int, IndicatorSeries> sensitivity_sweep(const PricePanel& panel, const RollingConfig& base,
                                                 const std::vector<int>& windows,
                                                 GarchCache* cache) {
  std::vector<std::string> errors;
  for (int w : windows) {
    RollingConfig config = base;
    config.window = w;
    for (const auto& e : config.validate(panel.rows(), panel.cols())) {
      errors.push_back("w=" + std::to_string(w) + ": " + e);
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid sensitivity sweep:";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  std::map<int, IndicatorSeries> out;
  for (int w : windows) {
    RollingConfig config = base;
    config.window = w;
    out.emplace(w, run(panel, config, cache));
  }
  return out;
}

}  // namespace dccanet::pipeline
