// tscore: minimum-score estimation for Gaussian AR(1), MA(1) and
// ARFIMA(0,d,0) panels.
//
//   tscore simulate <config> -o <dir> [--threads N]
//   tscore curve    <config> -o <dir> [--threads N]
//   tscore fit <data.csv> --model {ar1|ma1|arfima} --estimator {mle|pl|ht|hw|h}
//              [--sigma2 X] [--single-series]
//
// Exit codes: 0 success, 1 runtime failure, 2 config/input validation,
// 3 precondition violation.

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tscore/config.hpp"
#include "tscore/error.hpp"
#include "tscore/estimation.hpp"
#include "tscore/experiment.hpp"
#include "tscore/kernels.hpp"
#include "tscore/report.hpp"
#include "tscore/version.hpp"

namespace fs = std::filesystem;
using namespace tscore;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InputError: return kExitInput;
    case ErrorCode::DegreesOfFreedom: return kExitPrecondition;
    default: return kExitRuntime;
  }
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct RunOutputs {
  std::vector<ExperimentSummary> rows;
  nlohmann::json manifest;
};

RunOutputs run_configs(const fs::path& config_path, const fs::path& out_dir, unsigned threads) {
  const auto configs = load_config(config_path);
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  const unsigned workers = resolve_threads(threads);

  RunOutputs out;
  nlohmann::json seeds = nlohmann::json::object();
  for (const auto& c : configs) {
    auto rows = run_experiment(c, workers);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    seeds[c.name] = c.seed;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.manifest = {{"tool", "tscore"},
                  {"tool_version", kVersion},
                  {"config", fs::absolute(config_path).string()},
                  {"config_text", read_text(config_path)},
                  {"output_dir", fs::absolute(out_dir).string()},
                  {"started_utc", started},
                  {"wall_clock_seconds", seconds},
                  {"threads", workers},
                  {"simd", std::string(kernels::to_string(kernels::active().isa))},
                  {"seeds", seeds}};
  return out;
}

int finish_run(const RunOutputs& run) {
  for (const auto& row : run.rows) {
    if (!row.ok) {
      std::cerr << "error: more than 1% of replicates failed for " << row.name << " at lambda = "
                << format_number(row.true_lambda) << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_simulate(const fs::path& config, const fs::path& out_dir, unsigned threads) {
  fs::create_directories(out_dir);
  const RunOutputs run = run_configs(config, out_dir, threads);
  write_file_atomic(out_dir / "summary.csv", summary_csv(run.rows));
  write_file_atomic(out_dir / "summary.json", summary_json(run.rows));
  write_file_atomic(out_dir / "manifest.json", run.manifest.dump(2) + "\n");
  return finish_run(run);
}

int cmd_curve(const fs::path& config, const fs::path& out_dir, unsigned threads) {
  fs::create_directories(out_dir);
  const RunOutputs run = run_configs(config, out_dir, threads);
  write_file_atomic(out_dir / "curve.csv", curve_csv(run.rows));
  write_file_atomic(out_dir / "manifest.json", run.manifest.dump(2) + "\n");
  return finish_run(run);
}

std::vector<std::vector<double>> read_csv_panel(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open data file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw Error(ErrorCode::InputError,
                    path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" + t + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::InputError, path.string() + ":" + std::to_string(line_no) + ": row has " +
                                             std::to_string(row.size()) + " values, expected " +
                                             std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::InputError, path.string() + ": no data rows");
  return rows;
}

int cmd_fit(const fs::path& data, const std::string& model, const std::string& estimator,
            std::optional<double> sigma2, bool single_series, std::size_t bootstrap, std::uint64_t seed) {
  const ModelSpec spec{parse_family(model), sigma2, std::nullopt};
  const EstimatorKind kind = parse_estimator(estimator);
  const auto rows = read_csv_panel(data);
  FitOptions options;
  options.bootstrap_replicates = bootstrap;
  options.bootstrap_seed = seed;

  FitResult result;
  if (single_series || kind == EstimatorKind::H_single) {
    if (kind != EstimatorKind::H_single)
      throw Error(ErrorCode::InputError, "--single-series fits the Hyvarinen estimator (--estimator h)");
    if (rows.size() != 1) throw Error(ErrorCode::InputError, "--single-series expects exactly one data row");
    result = fit_single_series(spec, rows.front(), options);
  } else {
    const SeriesPanel panel = SeriesPanel::from_rows(rows);
    if (kind == EstimatorKind::HW && panel.n() < panel.T() + 2)
      throw Error(ErrorCode::DegreesOfFreedom, "HW needs rows >= columns + 2 (got " + std::to_string(panel.n()) +
                                                   " rows, " + std::to_string(panel.T()) + " columns)");
    if (!sigma2) {
      if (kind != EstimatorKind::PL)
        throw Error(ErrorCode::InputError, "--sigma2 is required for " + std::string(to_string(kind)) +
                                               " in panel mode");
      options.profile_sigma2 = true;
    }
    result = fit(kind, spec, panel, sigma2.value_or(1.0), options);
    if (options.profile_sigma2) result.estimate.sigma2 = std::numeric_limits<double>::quiet_NaN();
  }
  std::cout << fit_json(result, spec.family);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-score estimation for stationary Gaussian time-series panels"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, data_path, model, estimator;
  unsigned threads = 0;
  std::optional<double> sigma2;
  bool single_series = false;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 0x5eed;

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo efficiency study from a config file");
  simulate->add_option("config", config_path, "Experiment config")->required();
  simulate->add_option("-o,--out", out_dir, "Output directory")->required();
  simulate->add_option("--threads", threads, "Worker threads (default: TSCORE_THREADS or all cores)");

  auto* curve = app.add_subcommand("curve", "Emit ARE-versus-lambda curves as long-format CSV");
  curve->add_option("config", config_path, "Experiment config")->required();
  curve->add_option("-o,--out", out_dir, "Output directory")->required();
  curve->add_option("--threads", threads, "Worker threads (default: TSCORE_THREADS or all cores)");

  auto* fit_cmd = app.add_subcommand("fit", "Fit one estimator to a CSV panel (one series per row)");
  fit_cmd->add_option("data", data_path, "CSV data, no header")->required();
  fit_cmd->add_option("--model", model, "ar1 | ma1 | arfima")->required();
  fit_cmd->add_option("--estimator", estimator, "mle | pl | ht | hw | h")->required();
  fit_cmd->add_option("--sigma2", sigma2, "Known innovation variance");
  fit_cmd->add_flag("--single-series", single_series, "Joint (sigma2, lambda) fit of a single long series");
  fit_cmd->add_option("--bootstrap", bootstrap, "Parametric bootstrap size for HW / single-series sd");
  fit_cmd->add_option("--seed", seed, "Seed for the parametric bootstrap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir, threads);
    if (*curve) return cmd_curve(config_path, out_dir, threads);
    if (*fit_cmd) return cmd_fit(data_path, model, estimator, sigma2, single_series, bootstrap, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
