#include "tscore/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "tscore/error.hpp"
#include "tscore/estimation.hpp"
#include "tscore/samplers.hpp"

namespace tscore {

namespace {

constexpr std::uint64_t kBootstrapTag = 0xB0075;

std::vector<EstimatorKind> fitted_kinds(const ExperimentConfig& config) {
  std::vector<EstimatorKind> kinds{EstimatorKind::MLE};
  for (EstimatorKind k : config.estimators)
    if (k != EstimatorKind::MLE) kinds.push_back(k);
  return kinds;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw Error(ErrorCode::ConfigError, field + ": " + msg);
  };
  if (c.lambda_grid.empty()) fail("lambda_grid", "lambda_grid must be non-empty");
  const Interval dom = parameter_domain(ModelSpec{c.family, {}, {}});
  for (double l : c.lambda_grid)
    if (!dom.contains(l))
      fail("lambda_grid", "value " + std::to_string(l) + " outside [" + std::to_string(dom.lower) + ", " +
                              std::to_string(dom.upper) + "]");
  if (c.n < 1) fail("n", "n must be >= 1");
  if (c.T < 2) fail("T", "T must be >= 2");
  if (c.replicates < 1) fail("replicates", "replicates must be >= 1");
  if (!(c.sigma2 > 0.0) || !std::isfinite(c.sigma2)) fail("sigma2", "sigma2 must be positive");
  if (!std::isfinite(c.mu)) fail("mu", "mu must be finite");
  if (c.estimators.empty()) fail("estimators", "at least one estimator is required");
  for (std::size_t i = 0; i < c.estimators.size(); ++i) {
    const EstimatorKind k = c.estimators[i];
    if (std::find(c.estimators.begin(), c.estimators.begin() + static_cast<std::ptrdiff_t>(i), k) !=
        c.estimators.begin() + static_cast<std::ptrdiff_t>(i))
      fail("estimators", "estimator listed twice");
    if (k == EstimatorKind::H_single) fail("estimators", "the single-series estimator is not a panel estimator");
    if (k == EstimatorKind::HW && c.n < c.T + 2) fail("estimators", "HW needs n >= T + 2");
  }
  if (c.bootstrap_replicates < 2) fail("bootstrap", "bootstrap must be >= 2");
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TSCORE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<ReplicateFit>> run_grid_point(const ExperimentConfig& config, std::size_t g,
                                                      unsigned threads) {
  const ModelSpec spec{config.family, config.sigma2, config.mu};
  const Theta truth{config.mu, config.sigma2, config.lambda_grid.at(g)};
  const auto kinds = fitted_kinds(config);
  // Shared by every replicate of this grid point.
  const CovarianceBundle bundle = build_covariance(spec, truth.lambda, config.T);

  std::vector<std::vector<ReplicateFit>> fits(kinds.size(), std::vector<ReplicateFit>(config.replicates));

  auto run_one = [&](std::size_t r) {
    RandomStream stream(config.seed, {g, r});
    SeriesPanel panel = simulate_panel(spec, truth, config.n, config.T, stream, &bundle);
    if (config.mu != 0.0) {
      std::vector<double> centered(panel.values().begin(), panel.values().end());
      for (double& v : centered) v -= config.mu;
      panel = SeriesPanel(config.n, config.T, std::move(centered));
    }
    FitOptions options;
    options.bootstrap_replicates = config.bootstrap_replicates;
    options.bootstrap_seed = derive_seed(config.seed, {g, r, kBootstrapTag});
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      try {
        const FitResult f = fit(kinds[k], spec, panel, config.sigma2, options);
        fits[k][r] = ReplicateFit{f.estimate.lambda, f.sd, !std::isfinite(f.sd)};
      } catch (const Error&) {
        fits[k][r] = ReplicateFit{0.0, 0.0, true};
      }
    }
  };

  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(config.replicates));
  if (workers <= 1) {
    for (std::size_t r = 0; r < config.replicates; ++r) run_one(r);
    return fits;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> has_error{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < config.replicates; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            if (!has_error.exchange(true)) error = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return fits;
}

std::vector<ExperimentSummary> run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate(config);
  const auto kinds = fitted_kinds(config);
  std::vector<ExperimentSummary> out;
  for (std::size_t g = 0; g < config.lambda_grid.size(); ++g) {
    const auto fits = run_grid_point(config, g, threads);

    std::vector<EstimatorSummary> per_kind(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      EstimatorSummary& s = per_kind[k];
      s.kind = kinds[k];
      double sum = 0.0, sum_sd = 0.0;
      for (const ReplicateFit& f : fits[k]) {
        if (f.failed) {
          ++s.failures;
          continue;
        }
        ++s.replicates;
        sum += f.estimate;
        sum_sd += f.sd;
      }
      const double m = static_cast<double>(s.replicates);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.mean_est = s.replicates > 0 ? sum / m : nan;
      s.mean_sd = s.replicates > 0 ? sum_sd / m : nan;
      double ss = 0.0;
      for (const ReplicateFit& f : fits[k])
        if (!f.failed) ss += (f.estimate - s.mean_est) * (f.estimate - s.mean_est);
      s.mc_se = s.replicates > 1 ? std::sqrt(ss / (m - 1.0) / m) : nan;
    }
    const double sd_mle = per_kind.front().mean_sd;
    for (auto& s : per_kind)
      s.are = (sd_mle > 0.0 && s.mean_sd > 0.0) ? are(sd_mle, s.mean_sd) : std::numeric_limits<double>::quiet_NaN();

    ExperimentSummary summary;
    summary.name = config.name;
    summary.family = config.family;
    summary.true_lambda = config.lambda_grid[g];
    for (const auto& s : per_kind) {
      if (static_cast<double>(s.failures) > 0.01 * static_cast<double>(config.replicates)) summary.ok = false;
      const bool requested =
          std::find(config.estimators.begin(), config.estimators.end(), s.kind) != config.estimators.end();
      if (requested) summary.estimators.push_back(s);
    }
    // Report in the order the config lists the estimators.
    std::vector<EstimatorSummary> ordered;
    for (EstimatorKind k : config.estimators)
      for (const auto& s : summary.estimators)
        if (s.kind == k) ordered.push_back(s);
    summary.estimators = std::move(ordered);
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace tscore
