#include <algorithm>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "dccanet/error.hpp"

namespace dccanet::cli {

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

const std::vector<std::string> kSubcommands{"stats", "dcca-table", "run", "sweep", "connectedness",
                                            "simulate"};

// Validation messages arrive as a header line followed by "  - item" lines.
json error_report(std::string_view code, const std::string& message) {
  json details = json::array();
  std::istringstream in(message);
  std::string line;
  std::string head;
  while (std::getline(in, line)) {
    if (line.rfind("  - ", 0) == 0) {
      details.push_back(line.substr(4));
    } else if (head.empty()) {
      head = line;
    }
  }
  json report{{"error", {{"code", code}, {"message", head}}}};
  if (!details.empty()) report["error"]["details"] = details;
  return report;
}

int fail(std::string_view code, const std::string& message, int exit_code) {
  std::cerr << error_report(code, message).dump() << '\n';
  return exit_code;
}

std::string option_key(std::string_view arg) {
  const auto eq = arg.find('=');
  return std::string(arg.substr(0, eq));
}

// Locates --config in argv and splices the file's settings in after the
// subcommand token, dropping keys the command line already sets.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) config_path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) config_path = args[k].substr(9);
  }
  if (config_path.empty()) return args;

  std::vector<std::string> present;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k].rfind("--", 0) == 0) present.push_back(option_key(args[k]));
  }
  std::vector<std::string> extra;
  for (auto& a : config_file_arguments(config_path)) {
    if (std::find(present.begin(), present.end(), option_key(a)) == present.end()) {
      extra.push_back(std::move(a));
    }
  }
  auto position = std::find_first_of(args.begin() + 1, args.end(), kSubcommands.begin(), kSubcommands.end());
  std::vector<std::string> out(args.begin(), position == args.end() ? args.end() : position + 1);
  out.insert(out.end(), extra.begin(), extra.end());
  if (position != args.end()) out.insert(out.end(), position + 1, args.end());
  return out;
}

struct RunFlags {
  std::string garch = "per-window";
  bool no_garch = false;
  std::string eigen_target = "mst";
  std::string eigen_weights = "distance";
  std::string box_scheme = "forward";
  bool connectedness = false;
  std::string connectedness_input = "raw";
  bool no_mst_export = false;
};

void add_rolling_options(CLI::App* cmd, RunOptions& run, RunFlags& flags) {
  auto& c = run.config;
  cmd->add_option("--window", c.window, "Window length in price rows")->capture_default_str();
  cmd->add_option("--step", c.step, "Window step in rows")->capture_default_str();
  cmd->add_option("--scales", c.scales, "DCCA scales in days (comma list)")->delimiter(',');
  cmd->add_option("--dccc-pair", c.dccc_pair, "Short and long scale of the DCCC ratio")->delimiter(',');
  cmd->add_option("--eigen-scale", c.eigen_scale, "Scale of the eigenvalue network (0: long DCCC scale)");
  cmd->add_option("--garch", flags.garch, "GARCH filter: per-window, global or off")->capture_default_str();
  cmd->add_flag("--no-garch", flags.no_garch, "Skip the GARCH filter");
  cmd->add_option("--eigen-target", flags.eigen_target, "mst, full or both")->capture_default_str();
  cmd->add_option("--eigen-weights", flags.eigen_weights, "distance or abs-rho")->capture_default_str();
  cmd->add_option("--box-scheme", flags.box_scheme, "forward or forward-backward")->capture_default_str();
  cmd->add_flag("--connectedness", flags.connectedness, "Also compute rolling total connectedness");
  cmd->add_option("--lags", [&c](const CLI::results_t& r) {
    if (!c.connectedness) c.connectedness.emplace();
    return CLI::detail::lexical_cast(r[0], c.connectedness->lags);
  }, "VAR lag order (implies --connectedness)")->type_name("INT [3]");
  cmd->add_option("--horizon", [&c](const CLI::results_t& r) {
    if (!c.connectedness) c.connectedness.emplace();
    return CLI::detail::lexical_cast(r[0], c.connectedness->horizon);
  }, "Forecast horizon (implies --connectedness)")->type_name("INT [12]");
  cmd->add_option("--connectedness-input", flags.connectedness_input, "raw or filtered returns for the VAR")
      ->capture_default_str();
  cmd->add_flag("--keep-density", c.keep_density, "Write the kernel density of every window");
  cmd->add_flag("--export-garch", run.export_garch, "Write fitted GARCH parameters");
  cmd->add_flag("--export-standardized", run.export_standardized, "Write standardized prices");
  cmd->add_flag("--no-mst-export", flags.no_mst_export, "Skip the MST edge list");
}

// Converts the string-valued flags, collecting every problem.
std::vector<std::string> finish_rolling(RunOptions& run, const RunFlags& flags) {
  std::vector<std::string> errors;
  auto& c = run.config;
  const auto attempt = [&errors](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      errors.emplace_back(e.what());
    }
  };
  attempt([&] { c.garch = flags.no_garch ? pipeline::GarchMode::off : pipeline::parse_garch_mode(flags.garch); });
  attempt([&] { c.eigen_target = pipeline::parse_eigen_target(flags.eigen_target); });
  attempt([&] { c.eigen_weights = pipeline::parse_eigen_weights(flags.eigen_weights); });
  attempt([&] { c.box_scheme = pipeline::parse_box_scheme(flags.box_scheme); });
  if (flags.connectedness && !c.connectedness) c.connectedness.emplace();
  if (c.connectedness) {
    attempt([&] { c.connectedness->input = pipeline::parse_connectedness_input(flags.connectedness_input); });
  }
  run.export_mst = !flags.no_mst_export;
  for (auto& e : c.validate()) errors.push_back(std::move(e));
  return errors;
}

void print_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what(), kExitUsage);
  }

  CLI::App app{"Multiscale DCCA networks and connectedness indicators for market panels", "dccanet"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  std::string alignment = "intersection";
  std::string config_path;
  app.add_option("--input,-i", global.input, "Price panel CSV (one date column, one column per ticker)");
  app.add_option("--date-column", global.date_column, "Name of the date column")->capture_default_str();
  app.add_option("--alignment", alignment, "intersection or forward-fill")->capture_default_str();
  app.add_option("--output-dir,-o", global.output_dir, "Directory for output files")->capture_default_str();
  app.add_option("--seed", global.seed, "Seed of the simulators")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_flag("--full-precision", global.full_precision, "Print 17 significant digits instead of 6");
  app.add_option("--config", config_path, "Flat key = value TOML file; command-line flags win");
  app.add_option("--tickers", global.tickers, "Columns to use (comma list; default all)")->delimiter(',');

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Summary statistics table");
  stats_cmd->add_option("--annualization", stats.annualization, "Trading days per year")->capture_default_str();

  DccaTableOptions table;
  bool table_no_garch = false;
  std::string table_scheme = "forward";
  auto* table_cmd = app.add_subcommand("dcca-table", "Full-sample DCCA coefficient tables");
  table_cmd->add_option("--scale,--scales", table.scales, "Scales in days (comma list)")->delimiter(',');
  table_cmd->add_flag("--no-garch", table_no_garch, "Use raw instead of GARCH-filtered returns");
  table_cmd->add_option("--box-scheme", table_scheme, "forward or forward-backward")->capture_default_str();

  RunOptions run;
  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Rolling-window indicator pipeline");
  add_rolling_options(run_cmd, run, run_flags);
  run_cmd->add_option("--windows", run.windows, "Window lengths for a sensitivity sweep")->delimiter(',');

  RunOptions sweep;
  RunFlags sweep_flags;
  sweep.windows = {150, 200, 250, 300};
  auto* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweep over window lengths");
  add_rolling_options(sweep_cmd, sweep, sweep_flags);
  sweep_cmd->add_option("--windows", sweep.windows, "Window lengths (comma list)")->delimiter(',');

  ConnectednessOptions conn;
  auto* conn_cmd = app.add_subcommand("connectedness", "Diebold-Yilmaz connectedness table and rolling total");
  conn_cmd->add_option("--window", conn.window, "Rolling window in returns")->capture_default_str();
  conn_cmd->add_option("--lags", conn.lags, "VAR lag order")->capture_default_str();
  conn_cmd->add_option("--horizon", conn.horizon, "Forecast horizon")->capture_default_str();
  conn_cmd->add_flag("--filtered", conn.filtered, "Use GARCH-filtered instead of raw returns");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a synthetic price panel with a correlation regime shift");
  sim_cmd->add_option("--output", sim.output, "Output CSV (relative to --output-dir)")->capture_default_str();
  sim_cmd->add_option("--series", sim.series, "Number of series")->capture_default_str();
  sim_cmd->add_option("--rows", sim.rows, "Number of price rows")->capture_default_str();
  sim_cmd->add_option("--rho-before", sim.rho_before, "Equicorrelation before the shift")->capture_default_str();
  sim_cmd->add_option("--rho-after", sim.rho_after, "Equicorrelation after the shift")->capture_default_str();
  sim_cmd->add_option("--jump", sim.jump, "Return index of the shift (0: middle)")->capture_default_str();
  sim_cmd->add_option("--volatility", sim.volatility, "Daily return volatility")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  std::vector<std::string> errors;
  try {
    global.alignment = parse_alignment(alignment);
  } catch (const Error& e) {
    errors.emplace_back(e.what());
  }

  try {
    if (*stats_cmd) {
      if (!errors.empty()) throw Error(ErrorCode::invalid_argument, "");
      print_written(cmd_stats(global, stats));
    } else if (*table_cmd) {
      table.garch = !table_no_garch;
      try {
        table.box_scheme = pipeline::parse_box_scheme(table_scheme);
      } catch (const Error& e) {
        errors.emplace_back(e.what());
      }
      if (!errors.empty()) throw Error(ErrorCode::invalid_argument, "");
      print_written(cmd_dcca_table(global, table));
    } else if (*run_cmd || *sweep_cmd) {
      auto& options = *run_cmd ? run : sweep;
      for (auto& e : finish_rolling(options, *run_cmd ? run_flags : sweep_flags)) errors.push_back(std::move(e));
      if (!errors.empty()) throw Error(ErrorCode::invalid_argument, "");
      print_written(*run_cmd ? cmd_run(global, options) : cmd_sweep(global, options));
    } else if (*conn_cmd) {
      if (!errors.empty()) throw Error(ErrorCode::invalid_argument, "");
      print_written(cmd_connectedness(global, conn));
    } else if (*sim_cmd) {
      if (!errors.empty()) throw Error(ErrorCode::invalid_argument, "");
      print_written(cmd_simulate(global, sim));
    }
  } catch (const Error& e) {
    if (!errors.empty()) {
      std::string message = "invalid configuration:";
      for (const auto& item : errors) message += "\n  - " + item;
      return fail("invalid_argument", message, kExitUsage);
    }
    const bool usage = e.code() == ErrorCode::invalid_argument;
    return fail(to_string(e.code()), e.what(), usage ? kExitUsage : kExitRuntime);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitRuntime);
  }
  return 0;
}

}  // namespace dccanet::cli
