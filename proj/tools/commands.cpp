#include "commands.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "dccanet/connectedness.hpp"
#include "dccanet/dcca.hpp"
#include "dccanet/error.hpp"
#include "dccanet/format.hpp"
#include "dccanet/garch.hpp"
#include "dccanet/simulate.hpp"
#include "dccanet/stats.hpp"

namespace dccanet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CsvFile {
 public:
  CsvFile(const fs::path& path, int digits) : path_(path), out_(path), digits_(digits) {
    if (!out_) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }

  CsvFile& cell(std::string_view text) {
    sep();
    out_ << csv_escape(text);
    return *this;
  }
  CsvFile& num(double value) {
    sep();
    out_ << format_number(value, digits_);
    return *this;
  }
  CsvFile& integer(long long value) {
    sep();
    out_ << value;
    return *this;
  }
  CsvFile& empty() {
    sep();
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }
  void comment(std::string_view text) { out_ << "# " << text << '\n'; }
  void close() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::io, "failed writing '" + path_.string() + "'");
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  fs::path path_;
  std::ofstream out_;
  int digits_;
  bool first_ = true;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json gap_log(const std::vector<WindowGap>& gaps, const pipeline::IndicatorSeries* series,
             const PricePanel& panel) {
  json out = json::array();
  for (const auto& g : gaps) {
    json entry{{"window", g.window}, {"code", to_string(g.code)}, {"message", g.message}};
    if (series) {
      const std::size_t first = g.window * static_cast<std::size_t>(series->config.step);
      const std::size_t last = first + static_cast<std::size_t>(series->config.window) - 1;
      if (last < panel.rows()) {
        entry["window_start_date"] = format_date(panel.dates[first]);
        entry["window_end_date"] = format_date(panel.dates[last]);
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json input_json(const GlobalOptions& global, const PricePanel& panel) {
  return {{"path", global.input.string()},
          {"sha256", file_sha256(global.input)},
          {"date_column", global.date_column},
          {"alignment", to_string(panel.alignment_policy)},
          {"rows", panel.rows()},
          {"tickers", panel.tickers},
          {"start_date", format_date(panel.dates.front())},
          {"end_date", format_date(panel.dates.back())}};
}

std::optional<double> try_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  try {
    return pipeline::indicator_correlation(a, b);
  } catch (const Error&) {
    return std::nullopt;
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json run_diagnostics(const pipeline::IndicatorSeries& series) {
  json out;
  const auto lambda = series.column("lambda_max");
  out["corr_dccc_lambda_max"] = optional_number(try_correlation(series.column("dccc"), lambda));
  out["corr_dccc_reciprocal_lambda_max"] =
      optional_number(try_correlation(series.column("dccc_reciprocal"), lambda));
  if (series.config.connectedness) {
    out["corr_total_connectedness_lambda_max"] =
        optional_number(try_correlation(series.column("total_connectedness"), lambda));
  }
  int clamp_count = 0;
  double clamp_excess = 0.0;
  int not_converged = 0;
  int spectrum_not_converged = 0;
  for (const auto& r : series.records) {
    for (const auto& s : r.scales) {
      clamp_count += s.clamps.count;
      clamp_excess = std::max(clamp_excess, s.clamps.max_excess);
    }
    for (const auto& g : r.garch) not_converged += g.converged ? 0 : 1;
    if (!r.spectrum().converged) ++spectrum_not_converged;
  }
  out["rho_clamp_count"] = clamp_count;
  out["rho_clamp_max_excess"] = clamp_excess;
  out["garch_fits_not_converged"] = not_converged;
  out["power_iteration_not_converged"] = spectrum_not_converged;
  return out;
}

std::string scale_tag(std::pair<int, int> pair) {
  return std::to_string(pair.first) + "_" + std::to_string(pair.second);
}

std::string spectrum_label(bool mst) { return mst ? "mst" : "full"; }

}  // namespace

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::ostringstream hex;
  for (unsigned int k = 0; k < length; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return hex.str();
}

PricePanel load_panel(const GlobalOptions& global) {
  if (global.input.empty()) throw Error(ErrorCode::invalid_argument, "--input is required");
  const auto series = load_csv(global.input, global.date_column, global.tickers);
  return align(series, global.alignment);
}

json config_to_json(const pipeline::RollingConfig& config) {
  json doc{{"window", config.window},
           {"step", config.step},
           {"scales", config.effective_scales()},
           {"dccc_pair", {config.dccc_pair.first, config.dccc_pair.second}},
           {"eigen_scale", config.resolved_eigen_scale()},
           {"garch", pipeline::to_string(config.garch)},
           {"eigen_target", pipeline::to_string(config.eigen_target)},
           {"eigen_weights", pipeline::to_string(config.eigen_weights)},
           {"box_scheme", pipeline::to_string(config.box_scheme)},
           {"keep_density", config.keep_density},
           {"threads", config.threads},
           {"scale_calibration", {{"1_month", 21}, {"4_months", 84}}}};
  if (config.connectedness) {
    doc["connectedness"] = {{"lags", config.connectedness->lags},
                            {"horizon", config.connectedness->horizon},
                            {"input", pipeline::to_string(config.connectedness->input)}};
  } else {
    doc["connectedness"] = nullptr;
  }
  return doc;
}

std::string config_to_toml(const pipeline::RollingConfig& config) {
  std::ostringstream out;
  const auto list = [](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
    return s + "]";
  };
  out << "window = " << config.window << '\n'
      << "step = " << config.step << '\n'
      << "scales = " << list(config.scales) << '\n'
      << "dccc-pair = " << list({config.dccc_pair.first, config.dccc_pair.second}) << '\n'
      << "eigen-scale = " << config.resolved_eigen_scale() << '\n'
      << "garch = \"" << pipeline::to_string(config.garch) << "\"\n"
      << "eigen-target = \"" << pipeline::to_string(config.eigen_target) << "\"\n"
      << "eigen-weights = \"" << pipeline::to_string(config.eigen_weights) << "\"\n"
      << "box-scheme = \"" << pipeline::to_string(config.box_scheme) << "\"\n"
      << "keep-density = " << (config.keep_density ? "true" : "false") << '\n'
      << "connectedness = " << (config.connectedness ? "true" : "false") << '\n';
  if (config.connectedness) {
    out << "lags = " << config.connectedness->lags << '\n'
        << "horizon = " << config.connectedness->horizon << '\n'
        << "connectedness-input = \"" << pipeline::to_string(config.connectedness->input) << "\"\n";
  }
  return out.str();
}

std::vector<fs::path> cmd_stats(const GlobalOptions& global, const StatsOptions& options) {
  const auto panel = load_panel(global);
  const auto returns = log_returns(panel);
  std::vector<SummaryStats> stats;
  for (Eigen::Index c = 0; c < returns.returns.cols(); ++c) {
    const std::span<const double> col(returns.returns.col(c).data(), returns.rows());
    try {
      stats.push_back(summarize(col, options.annualization));
    } catch (const Error& e) {
      throw Error(e.code(), "ticker '" + returns.tickers[static_cast<std::size_t>(c)] + "': " + e.what());
    }
  }

  ensure_dir(global.output_dir);
  const auto path = global.output_dir / "stats.csv";
  CsvFile csv(path, global.significant_digits());
  csv.cell("statistic");
  for (const auto& t : panel.tickers) csv.cell(t).cell(t + "_stars");
  csv.end_row();

  const auto scalar_row = [&](std::string_view name, auto get) {
    csv.cell(name);
    for (const auto& s : stats) csv.num(get(s)).empty();
    csv.end_row();
  };
  scalar_row("ann_mean", [](const SummaryStats& s) { return s.ann_mean; });
  scalar_row("ann_vol", [](const SummaryStats& s) { return s.ann_vol; });
  scalar_row("skewness", [](const SummaryStats& s) { return s.skewness; });
  scalar_row("kurtosis", [](const SummaryStats& s) { return s.kurtosis; });
  for (const auto statistic : {AcStatistic::returns, AcStatistic::squared_returns}) {
    for (int lag : kReportedLags) {
      csv.cell((statistic == AcStatistic::returns ? "ac_" : "ac_sq_") + std::to_string(lag));
      for (const auto& s : stats) {
        const auto& ac = statistic == AcStatistic::returns ? s.ac : s.ac_sq;
        csv.num(ac.at(lag)).cell(significance_stars(s.significance.at({statistic, lag})));
      }
      csv.end_row();
    }
  }
  csv.close();
  return {path};
}

std::vector<fs::path> cmd_dcca_table(const GlobalOptions& global, const DccaTableOptions& options) {
  const auto panel = load_panel(global);
  const auto returns = log_returns(panel);
  const auto t = static_cast<std::size_t>(returns.rows());
  for (int s : options.scales) {
    if (2 * static_cast<std::size_t>(std::max(s, 0)) > t) {
      throw Error(ErrorCode::invalid_argument, "scale " + std::to_string(s) + " exceeds half of the " +
                                                   std::to_string(t) + " available returns");
    }
  }
  Eigen::MatrixXd input = returns.returns;
  if (options.garch) {
    for (Eigen::Index c = 0; c < input.cols(); ++c) {
      const std::span<const double> col(returns.returns.col(c).data(), t);
      const auto filtered = garch::fit_and_filter(col);
      input.col(c) = Eigen::Map<const Eigen::VectorXd>(filtered.data(), static_cast<Eigen::Index>(t));
    }
  }

  ensure_dir(global.output_dir);
  std::vector<fs::path> written;
  for (int s : options.scales) {
    dcca::DccaMatrix m;
    try {
      m = dcca::dcca_matrix(input, s, options.box_scheme);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (columns follow the input order: " +
                                std::to_string(panel.cols()) + " tickers)");
    }
    const auto path = global.output_dir / ("dcca_table_s" + std::to_string(s) + ".csv");
    CsvFile csv(path, global.significant_digits());
    csv.comment("scale=" + std::to_string(s) + ",filter=" + (options.garch ? "garch" : "raw") +
                ",box_scheme=" + std::string(pipeline::to_string(options.box_scheme)) +
                ",start=" + format_date(panel.dates.front()) + ",end=" + format_date(panel.dates.back()) +
                ",clamped=" + std::to_string(m.clamps.count));
    csv.cell("ticker");
    for (const auto& tk : panel.tickers) csv.cell(tk);
    csv.end_row();
    for (std::size_t i = 0; i < panel.cols(); ++i) {
      csv.cell(panel.tickers[i]);
      for (std::size_t j = 0; j < panel.cols(); ++j) {
        if (j <= i) {
          csv.num(m.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        } else {
          csv.empty();
        }
      }
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  return written;
}

std::vector<fs::path> write_indicator_csvs(const fs::path& dir, const pipeline::IndicatorSeries& series,
                                           const RunOptions& options, int digits) {
  ensure_dir(dir);
  std::vector<fs::path> written;
  const auto& config = series.config;
  const auto scales = config.effective_scales();

  {
    const auto path = dir / "tree_lengths.csv";
    CsvFile csv(path, digits);
    csv.cell("window_end_date");
    for (int s : scales) csv.cell("L_" + std::to_string(s));
    csv.end_row();
    for (const auto& r : series.records) {
      csv.cell(format_date(r.window_end));
      for (int s : scales) csv.num(r.at_scale(s).tree_length);
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  {
    const auto path = dir / "dccc.csv";
    const auto tag = scale_tag(config.dccc_pair);
    const auto reverse = scale_tag({config.dccc_pair.second, config.dccc_pair.first});
    CsvFile csv(path, digits);
    csv.cell("window_end_date").cell("dccc_" + tag).cell("dccc_" + reverse).cell("dccc_" + tag + "_rescaled");
    csv.end_row();
    const auto rescaled = series.column("dccc_rescaled");
    for (std::size_t k = 0; k < series.records.size(); ++k) {
      const auto& r = series.records[k];
      csv.cell(format_date(r.window_end)).num(r.dccc).num(r.dccc_reciprocal).num(rescaled[k]);
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  {
    const auto path = dir / "spectrum.csv";
    CsvFile csv(path, digits);
    std::vector<bool> targets;
    if (config.eigen_target != pipeline::EigenTarget::full) targets.push_back(true);
    if (config.eigen_target != pipeline::EigenTarget::mst) targets.push_back(false);
    csv.cell("window_end_date");
    for (bool mst : targets) {
      const auto l = spectrum_label(mst);
      csv.cell("lambda_max_" + l).cell("mean_degree_" + l).cell("max_degree_" + l).cell("iterations_" + l);
    }
    csv.end_row();
    for (const auto& r : series.records) {
      csv.cell(format_date(r.window_end));
      for (bool mst : targets) {
        const auto& s = mst ? *r.spectrum_mst : *r.spectrum_full;
        csv.num(s.lambda_max).num(s.mean_degree).num(s.max_degree).integer(s.iterations);
      }
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  {
    const auto path = dir / "moments.csv";
    CsvFile csv(path, digits);
    csv.cell("window_end_date").cell("scale").cell("mean").cell("variance").cell("skewness").cell("kurtosis").cell("bandwidth");
    csv.end_row();
    for (const auto& r : series.records) {
      for (const auto& s : r.scales) {
        csv.cell(format_date(r.window_end)).integer(s.scale).num(s.moments.mean).num(s.moments.variance)
            .num(s.moments.skewness).num(s.moments.kurtosis).num(s.moments.bandwidth);
        csv.end_row();
      }
    }
    csv.close();
    written.push_back(path);
  }
  if (config.keep_density) {
    const auto path = dir / "densities.csv";
    CsvFile csv(path, digits);
    csv.cell("window_end_date").cell("scale").cell("x").cell("density");
    csv.end_row();
    for (const auto& r : series.records) {
      for (const auto& s : r.scales) {
        for (const auto& [x, f] : s.moments.density) {
          csv.cell(format_date(r.window_end)).integer(s.scale).num(x).num(f);
          csv.end_row();
        }
      }
    }
    csv.close();
    written.push_back(path);
  }
  if (options.export_mst) {
    const auto path = dir / "mst_edges.csv";
    CsvFile csv(path, digits);
    csv.cell("window_start").cell("window_end").cell("scale").cell("i").cell("j").cell("weight");
    csv.end_row();
    for (const auto& r : series.records) {
      for (const auto& s : r.scales) {
        for (const auto& e : s.mst_edges) {
          csv.cell(format_date(r.window_start)).cell(format_date(r.window_end)).integer(s.scale)
              .cell(series.tickers[static_cast<std::size_t>(e.i)])
              .cell(series.tickers[static_cast<std::size_t>(e.j)]).num(e.weight);
          csv.end_row();
        }
      }
    }
    csv.close();
    written.push_back(path);
  }
  if (config.connectedness) {
    const auto path = dir / "connectedness.csv";
    CsvFile csv(path, digits);
    csv.cell("window_end_date").cell("total");
    for (const char* kind : {"to_", "from_", "net_"}) {
      for (const auto& t : series.tickers) csv.cell(kind + t);
    }
    csv.end_row();
    for (const auto& r : series.records) {
      if (!r.connectedness) continue;
      const auto& c = *r.connectedness;
      csv.cell(format_date(r.window_end)).num(c.total);
      for (const auto* v : {&c.to_degree, &c.from_degree, &c.net_degree}) {
        for (Eigen::Index k = 0; k < v->size(); ++k) csv.num((*v)(k));
      }
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  if (options.export_garch && config.garch != pipeline::GarchMode::off) {
    const auto path = dir / "garch_params.csv";
    CsvFile csv(path, digits);
    csv.cell("window_end_date").cell("ticker").cell("omega").cell("alpha").cell("beta")
        .cell("log_likelihood").cell("converged").cell("iterations");
    csv.end_row();
    const auto emit = [&](std::string_view date, const std::vector<pipeline::GarchDiagnostics>& fits) {
      for (std::size_t k = 0; k < fits.size(); ++k) {
        const auto& g = fits[k];
        csv.cell(date).cell(series.tickers[k]).num(g.params.omega).num(g.params.alpha).num(g.params.beta)
            .num(g.log_likelihood).integer(g.converged ? 1 : 0).integer(g.iterations);
        csv.end_row();
      }
    };
    if (config.garch == pipeline::GarchMode::global) {
      emit("full_sample", series.global_garch);
    } else {
      for (const auto& r : series.records) emit(format_date(r.window_end), r.garch);
    }
    csv.close();
    written.push_back(path);
  }
  return written;
}

namespace {

std::vector<fs::path> run_into(const fs::path& dir, const GlobalOptions& global, const RunOptions& options,
                               const PricePanel& panel, const pipeline::IndicatorSeries& series,
                               double elapsed_seconds, const std::string& started_at) {
  auto written = write_indicator_csvs(dir, series, options, global.significant_digits());
  if (options.export_standardized) {
    const auto path = dir / "standardized_prices.csv";
    write_panel_csv(path, global.date_column, panel.dates, panel.tickers, standardize_prices(panel),
                    global.significant_digits());
    written.push_back(path);
  }
  const auto toml_path = dir / "run_config.toml";
  {
    std::ofstream out(toml_path);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + toml_path.string() + "'");
    out << config_to_toml(series.config);
    if (!out) throw Error(ErrorCode::io, "failed writing '" + toml_path.string() + "'");
  }
  written.push_back(toml_path);
  json manifest{{"software", {{"name", "dccanet"}, {"version", kVersion}}},
                {"command", "run"},
                {"config", config_to_json(series.config)},
                {"input", input_json(global, panel)},
                {"timing", {{"started_at", started_at}, {"elapsed_seconds", elapsed_seconds}}},
                {"windows",
                 {{"count", series.window_count},
                  {"records", series.records.size()},
                  {"gaps", series.gaps.size()}}},
                {"gap_log", gap_log(series.gaps, &series, panel)},
                {"connectedness_gap_log", gap_log(series.connectedness_gaps, &series, panel)},
                {"diagnostics", run_diagnostics(series)},
                {"outputs", json::array()}};
  for (const auto& p : written) manifest["outputs"].push_back(p.filename().string());
  const auto manifest_path = dir / "manifest.json";
  write_json(manifest_path, manifest);
  written.push_back(manifest_path);
  return written;
}

}  // namespace

std::vector<fs::path> cmd_run(const GlobalOptions& global, const RunOptions& options) {
  if (!options.windows.empty()) return cmd_sweep(global, options);
  const auto panel = load_panel(global);
  auto config = options.config;
  config.threads = global.threads;
  const auto started_at = utc_timestamp();
  const auto start = std::chrono::steady_clock::now();
  const auto series = pipeline::run(panel, config);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run_into(global.output_dir, global, options, panel, series, elapsed, started_at);
}

std::vector<fs::path> cmd_sweep(const GlobalOptions& global, const RunOptions& options) {
  if (options.windows.empty()) {
    throw Error(ErrorCode::invalid_argument, "sweep needs at least one window length (--windows)");
  }
  const auto panel = load_panel(global);
  auto base = options.config;
  base.threads = global.threads;
  const auto started_at = utc_timestamp();
  const auto start = std::chrono::steady_clock::now();
  pipeline::GarchCache cache;
  const auto sweep = pipeline::sensitivity_sweep(panel, base, options.windows, &cache);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ensure_dir(global.output_dir);
  std::vector<fs::path> written;
  const auto summary_path = global.output_dir / "sweep_summary.csv";
  CsvFile csv(summary_path, global.significant_digits());
  csv.cell("window").cell("records").cell("gaps").cell("corr_dccc_lambda_max")
      .cell("corr_dccc_reciprocal_lambda_max");
  csv.end_row();
  for (const auto& [w, series] : sweep) {
    const auto dir = global.output_dir / ("w_" + std::to_string(w));
    const auto files = run_into(dir, global, options, panel, series, elapsed, started_at);
    written.insert(written.end(), files.begin(), files.end());
    const auto lambda = series.column("lambda_max");
    const auto a = try_correlation(series.column("dccc"), lambda);
    const auto b = try_correlation(series.column("dccc_reciprocal"), lambda);
    csv.integer(w).integer(static_cast<long long>(series.records.size()))
        .integer(static_cast<long long>(series.gaps.size()));
    a ? csv.num(*a) : csv.empty();
    b ? csv.num(*b) : csv.empty();
    csv.end_row();
  }
  csv.close();
  written.push_back(summary_path);
  return written;
}

std::vector<fs::path> cmd_connectedness(const GlobalOptions& global, const ConnectednessOptions& options) {
  const auto panel = load_panel(global);
  const auto returns = log_returns(panel);
  Eigen::MatrixXd input = returns.returns;
  if (options.filtered) {
    for (Eigen::Index c = 0; c < input.cols(); ++c) {
      const std::span<const double> col(returns.returns.col(c).data(), returns.rows());
      const auto filtered = garch::fit_and_filter(col);
      input.col(c) = Eigen::Map<const Eigen::VectorXd>(filtered.data(), input.rows());
    }
  }
  const auto started_at = utc_timestamp();
  const auto start = std::chrono::steady_clock::now();
  const auto model = connectedness::fit_var(input, options.lags);
  const auto table = connectedness::connectedness_table(connectedness::gvd(model, options.horizon));
  const auto rolling = connectedness::rolling_total_connectedness(input, options.window, options.lags,
                                                                  options.horizon, global.threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ensure_dir(global.output_dir);
  const int digits = global.significant_digits();
  std::vector<fs::path> written;
  const auto n = static_cast<Eigen::Index>(panel.cols());
  {
    const auto path = global.output_dir / "connectedness_table.csv";
    CsvFile csv(path, digits);
    csv.comment("lags=" + std::to_string(options.lags) + ",horizon=" + std::to_string(options.horizon) +
                ",input=" + (options.filtered ? "filtered" : "raw") + ",start=" +
                format_date(returns.dates.front()) + ",end=" + format_date(returns.dates.back()) +
                ",spectral_radius=" + format_number(model.spectral_radius, digits));
    csv.empty();
    for (const auto& t : panel.tickers) csv.cell(t);
    csv.cell("From");
    csv.end_row();
    for (Eigen::Index i = 0; i < n; ++i) {
      csv.cell(panel.tickers[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < n; ++j) csv.num(table.d(i, j));
      csv.num(table.from_degree(i));
      csv.end_row();
    }
    csv.cell("To");
    for (Eigen::Index j = 0; j < n; ++j) csv.num(table.to_degree(j));
    csv.num(table.total);
    csv.end_row();
    csv.cell("Net");
    for (Eigen::Index j = 0; j < n; ++j) csv.num(table.net_degree(j));
    csv.num(0.0);
    csv.end_row();
    csv.close();
    written.push_back(path);
  }
  {
    const auto path = global.output_dir / "connectedness_rolling.csv";
    CsvFile csv(path, digits);
    csv.cell("date").cell("total");
    for (const char* kind : {"to_", "from_", "net_"}) {
      for (const auto& t : panel.tickers) csv.cell(kind + t);
    }
    csv.end_row();
    for (const auto& e : rolling.entries) {
      const auto last = e.window + static_cast<std::size_t>(options.window) - 1;
      csv.cell(format_date(returns.dates[last])).num(e.table.total);
      for (const auto* v : {&e.table.to_degree, &e.table.from_degree, &e.table.net_degree}) {
        for (Eigen::Index k = 0; k < v->size(); ++k) csv.num((*v)(k));
      }
      csv.end_row();
    }
    csv.close();
    written.push_back(path);
  }
  json gaps = json::array();
  for (const auto& g : rolling.gaps) {
    gaps.push_back({{"window", g.window},
                    {"window_end_date",
                     format_date(returns.dates[g.window + static_cast<std::size_t>(options.window) - 1])},
                    {"code", to_string(g.code)},
                    {"message", g.message}});
  }
  json manifest{{"software", {{"name", "dccanet"}, {"version", kVersion}}},
                {"command", "connectedness"},
                {"config",
                 {{"window", options.window},
                  {"lags", options.lags},
                  {"horizon", options.horizon},
                  {"input", options.filtered ? "filtered" : "raw"}}},
                {"input", input_json(global, panel)},
                {"timing", {{"started_at", started_at}, {"elapsed_seconds", elapsed}}},
                {"windows",
                 {{"count", rolling.entries.size() + rolling.gaps.size()},
                  {"records", rolling.entries.size()},
                  {"gaps", rolling.gaps.size()}}},
                {"gap_log", gaps},
                {"full_sample", {{"total", table.total}, {"explosive", model.explosive}}},
                {"outputs", json::array()}};
  for (const auto& p : written) manifest["outputs"].push_back(p.filename().string());
  const auto manifest_path = global.output_dir / "connectedness_manifest.json";
  write_json(manifest_path, manifest);
  written.push_back(manifest_path);
  return written;
}

std::vector<fs::path> cmd_simulate(const GlobalOptions& global, const SimulateOptions& options) {
  if (options.series < 2 || options.rows < 3) {
    throw Error(ErrorCode::invalid_argument, "simulate needs at least 2 series and 3 rows");
  }
  const auto n = static_cast<std::size_t>(options.series);
  const auto t = static_cast<std::size_t>(options.rows - 1);
  const auto jump = options.jump > 0 ? static_cast<std::size_t>(options.jump) : t / 2;
  const auto returns = simulate::regime_returns(n, t, options.rho_before, options.rho_after, jump,
                                                options.volatility, global.seed);
  const auto panel = simulate::panel_from_returns(returns, simulate::default_tickers(n));
  auto path = options.output;
  if (path.is_relative()) path = global.output_dir / path;
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_panel_csv(path, global.date_column, panel.dates, panel.tickers, panel.prices, 10);
  return {path};
}

std::vector<std::string> config_file_arguments(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path.string() + "'");
  std::vector<std::string> args;
  std::string line;
  int row = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const auto unquote = [](std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
      return s.substr(1, s.size() - 2);
    }
    return s;
  };
  while (std::getline(in, line)) {
    ++row;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') quoted = !quoted;
      if (line[k] == '#' && !quoted) {
        line.erase(k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(row) +
                                        ": tables are not supported; use flat key = value pairs");
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(row) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(row) + ": empty key or value");
    }
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    if (value.front() == '[') {
      if (value.back() != ']') {
        throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(row) + ": unterminated array");
      }
      std::string joined;
      for (auto& item : split_csv_line(value.substr(1, value.size() - 2))) {
        if (item.empty()) continue;
        if (!joined.empty()) joined += ',';
        joined += unquote(trim(item));
      }
      value = joined;
    } else {
      value = unquote(value);
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace dccanet::cli
