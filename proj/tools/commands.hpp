#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dccanet/ingest.hpp"
#include "dccanet/pipeline.hpp"

namespace dccanet::cli {

inline constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
  std::filesystem::path input;
  std::string date_column = "Date";
  AlignmentPolicy alignment = AlignmentPolicy::intersection;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool full_precision = false;
  std::vector<std::string> tickers;  // empty = every non-date column

  int significant_digits() const { return full_precision ? 17 : 6; }
};

struct StatsOptions {
  double annualization = 252.0;
};

struct DccaTableOptions {
  std::vector<int> scales{21};
  bool garch = true;
  dcca::BoxScheme box_scheme = dcca::BoxScheme::forward;
};

struct RunOptions {
  pipeline::RollingConfig config;
  std::vector<int> windows;  // non-empty: sensitivity sweep
  bool export_mst = true;
  bool export_garch = false;
  bool export_standardized = false;
};

struct ConnectednessOptions {
  int window = 250;
  int lags = 3;
  int horizon = 12;
  bool filtered = false;
};

struct SimulateOptions {
  std::filesystem::path output = "simulated.csv";
  int series = 9;
  int rows = 2560;
  double rho_before = 0.2;
  double rho_after = 0.8;
  int jump = 0;  // 0 = rows / 2
  double volatility = 0.01;
};

/// Loads, selects and aligns the input panel; errors carry file/row context.
PricePanel load_panel(const GlobalOptions& global);

/// SHA-256 of a file, lowercase hex.
std::string file_sha256(const std::filesystem::path& path);

/// Each command returns the list of files it wrote.
std::vector<std::filesystem::path> cmd_stats(const GlobalOptions& global, const StatsOptions& options);
std::vector<std::filesystem::path> cmd_dcca_table(const GlobalOptions& global,
                                                  const DccaTableOptions& options);
std::vector<std::filesystem::path> cmd_run(const GlobalOptions& global, const RunOptions& options);
std::vector<std::filesystem::path> cmd_sweep(const GlobalOptions& global, const RunOptions& options);
std::vector<std::filesystem::path> cmd_connectedness(const GlobalOptions& global,
                                                     const ConnectednessOptions& options);
std::vector<std::filesystem::path> cmd_simulate(const GlobalOptions& global,
                                                const SimulateOptions& options);

/// Writes the per-family indicator CSVs of one run into `dir`.
std::vector<std::filesystem::path> write_indicator_csvs(const std::filesystem::path& dir,
                                                        const pipeline::IndicatorSeries& series,
                                                        const RunOptions& options, int digits);

nlohmann::json config_to_json(const pipeline::RollingConfig& config);
/// Flat TOML accepted back by --config.
std::string config_to_toml(const pipeline::RollingConfig& config);

/// Parses a flat key = value TOML document (strings, numbers, booleans and
/// flat arrays) into "--key=value" arguments. Arrays become comma lists.
std::vector<std::string> config_file_arguments(const std::filesystem::path& path);

/// CLI entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace dccanet::cli
