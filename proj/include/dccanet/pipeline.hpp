#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dccanet/connectedness.hpp"
#include "dccanet/dcca.hpp"
#include "dccanet/error.hpp"
#include "dccanet/garch.hpp"
#include "dccanet/ingest.hpp"
#include "dccanet/netgraph.hpp"

namespace dccanet::pipeline {

enum class GarchMode { off, per_window, global };
/// Which matrix the Perron root is taken of: the MST-restricted adjacency, the
/// full distance matrix, or both (the MST one stays the headline column).
enum class EigenTarget { mst, full, both };
/// Edge weights of the eigenvalue target: DCCA distances or |rho_DCCA|.
enum class EigenWeights { distance, abs_rho };
enum class ConnectednessInput { raw, filtered };

GarchMode parse_garch_mode(std::string_view text);
EigenTarget parse_eigen_target(std::string_view text);
EigenWeights parse_eigen_weights(std::string_view text);
ConnectednessInput parse_connectedness_input(std::string_view text);
dcca::BoxScheme parse_box_scheme(std::string_view text);
std::string_view to_string(GarchMode mode) noexcept;
std::string_view to_string(EigenTarget target) noexcept;
std::string_view to_string(EigenWeights weights) noexcept;
std::string_view to_string(ConnectednessInput input) noexcept;
std::string_view to_string(dcca::BoxScheme scheme) noexcept;

struct ConnectednessSettings {
  int lags = 3;
  int horizon = 12;
  ConnectednessInput input = ConnectednessInput::raw;
};

struct RollingConfig {
  int window = 250;  // price rows per window; the window holds window - 1 returns
  int step = 1;
  std::vector<int> scales{21, 84};
  std::pair<int, int> dccc_pair{21, 84};
  int eigen_scale = 0;  // 0 selects dccc_pair.second
  GarchMode garch = GarchMode::per_window;
  EigenTarget eigen_target = EigenTarget::mst;
  EigenWeights eigen_weights = EigenWeights::distance;
  dcca::BoxScheme box_scheme = dcca::BoxScheme::forward;
  std::optional<ConnectednessSettings> connectedness;
  bool keep_density = false;
  unsigned threads = 1;

  /// Union of `scales`, the DCCC pair and the eigenvalue scale, ascending.
  std::vector<int> effective_scales() const;
  int resolved_eigen_scale() const { return eigen_scale > 0 ? eigen_scale : dccc_pair.second; }

  /// Every problem found, empty when valid. `panel_rows` (when non-zero) also
  /// checks that the panel holds at least one window.
  std::vector<std::string> validate(std::size_t panel_rows = 0, std::size_t tickers = 0) const;
};

struct GarchDiagnostics {
  garch::GarchParams params;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct ScaleRecord {
  int scale = 0;
  double tree_length = 0.0;
  netgraph::EdgeMoments moments;  // density kept only when keep_density
  std::vector<netgraph::Edge> mst_edges;
  dcca::ClampStats clamps;
};

struct SpectrumRecord {
  double lambda_max = 0.0;
  double mean_degree = 0.0;
  double max_degree = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct WindowRecord {
  std::size_t window = 0;  // price rows [window * step, window * step + w)
  Date window_start;
  Date window_end;
  std::vector<ScaleRecord> scales;  // in effective_scales() order
  double dccc = 0.0;                // L(s1) / L(s2)
  double dccc_reciprocal = 0.0;     // L(s2) / L(s1)
  std::optional<SpectrumRecord> spectrum_mst;
  std::optional<SpectrumRecord> spectrum_full;
  std::optional<connectedness::ConnectednessTable> connectedness;
  std::vector<GarchDiagnostics> garch;  // per ticker, empty when GARCH is off

  const ScaleRecord& at_scale(int s) const;
  /// The spectrum named by the config's eigen target (MST unless target is full).
  const SpectrumRecord& spectrum() const;
};

struct IndicatorSeries {
  RollingConfig config;
  std::vector<std::string> tickers;
  std::size_t window_count = 0;
  std::vector<WindowRecord> records;  // ordered by window index
  std::vector<WindowGap> gaps;
  std::vector<WindowGap> connectedness_gaps;  // record kept, connectedness missing
  std::vector<GarchDiagnostics> global_garch;  // GarchMode::global only

  std::vector<std::string> column_names() const;
  /// One value per record; NaN where the record lacks the measure. Names:
  /// "L_<s>", "dccc", "dccc_reciprocal", "dccc_rescaled", "lambda_max",
  /// "lambda_max_mst", "lambda_max_full", "mean_degree", "max_degree",
  /// "total_connectedness", "edge_mean_<s>", "edge_variance_<s>",
  /// "edge_skewness_<s>", "edge_kurtosis_<s>".
  std::vector<double> column(std::string_view name) const;
  std::vector<Date> end_dates() const;
};

/// Content-addressed store of per-(window, series) GARCH results. Lookups
/// compare the full slice, so a hash collision can never return a wrong fit.
class GarchCache {
 public:
  struct Entry {
    std::vector<double> filtered;
    GarchDiagnostics diagnostics;
  };

  explicit GarchCache(std::size_t max_entries = 1u << 16) : max_entries_(max_entries) {}

  /// Demean, fit and filter `returns`, or return the stored result.
  Entry fit_and_filter(std::span<const double> returns);

  std::size_t hits() const;
  std::size_t size() const;

 private:
  struct Stored {
    std::vector<double> input;
    Entry entry;
  };
  mutable std::mutex mutex_;
  std::unordered_multimap<std::uint64_t, Stored> entries_;
  std::size_t max_entries_;
  std::size_t hits_ = 0;
};

/// FNV-1a over the bit patterns of the values.
std::uint64_t content_hash(std::span<const double> values);

/// The rolling-window protocol over every window [t, t + w - 1].
IndicatorSeries run(const PricePanel& panel, const RollingConfig& config, GarchCache* cache = nullptr);

/// Pearson correlation over the records where both columns are finite.
/// Throws Error(too_short) with fewer than 30 usable pairs.
double indicator_correlation(std::span<const double> a, std::span<const double> b);

/// Independent run() per window length.
std::map<int, IndicatorSeries> sensitivity_sweep(const PricePanel& panel, const RollingConfig& base,
                                                 const std::vector<int>& windows,
                                                 GarchCache* cache = nullptr);

}  // namespace dccanet::pipeline
