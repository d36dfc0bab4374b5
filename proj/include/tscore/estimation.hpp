#pragma once
// Minimum-score estimation of the dependence parameter, with sandwich
// (Godambe) standard deviations.

#include <cstddef>
#include <cstdint>
#include <span>

#include "tscore/models.hpp"
#include "tscore/scoring.hpp"

namespace tscore {

/// Per-series variability J, sensitivity K, and Godambe information K^2 / J.
struct GodambeInfo {
  double J = 0.0;
  double K = 0.0;
  double G = 0.0;
};

struct FitResult {
  EstimatorKind kind = EstimatorKind::MLE;
  Theta estimate;
  double sd = 0.0;  // asymptotic sd of the lambda component
  int evaluations = 0;
  bool converged = false;
  GodambeInfo info;
};

struct FitOptions {
  double tol = 1e-6;
  int max_evaluations = 200;
  bool compute_sd = true;
  /// Parametric bootstrap size for the HW variability and the single-series sd.
  std::size_t bootstrap_replicates = 200;
  std::uint64_t bootstrap_seed = 0x5eed;
  /// PL only: maximize the pairwise likelihood with sigma2 profiled out
  /// instead of held at the supplied value. For AR1 this is the closed-form
  /// Yule-Walker type estimator.
  bool profile_sigma2 = false;
};

/// Panel fit with known sigma2 and zero mean; lambda is optimized over
/// parameter_domain(spec). Throws NotConverged when the budget runs out.
FitResult fit(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel, double sigma2,
              const FitOptions& options = {});

struct SdEstimate {
  double sd = 0.0;
  GodambeInfo info;
};

/// Sandwich sd of lambda_hat. MLE uses observed information; MLE/PL/HT use
/// per-series numeric score contributions; HW estimates J by parametric
/// bootstrap of the sufficient statistic at lambda_hat.
SdEstimate godambe_sd(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel, double sigma2,
                      double lambda_hat, const FitOptions& options = {});

/// Joint (sigma2, lambda) minimization of the single-series Hyvarinen score
/// by Nelder-Mead over (log sigma2, logit-rescaled lambda). The mean is
/// spec.known_mu (zero when unset). sd comes from a parametric-bootstrap
/// sandwich at the estimate.
FitResult fit_single_series(const ModelSpec& spec, std::span<const double> series, const FitOptions& options = {});

/// (sd_mle / sd_est)^2
double are(double sd_mle, double sd_est);

}  // namespace tscore
