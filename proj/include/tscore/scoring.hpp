#pragma once
// Objective functions for minimum-score estimation of lambda: Hyvarinen scores
// (single series, total over a panel, and the Wishart/matrix form on the
// sufficient statistic), the Gaussian log-likelihood, and the first-order
// consecutive pairwise log-likelihood.
//
// Panel functions take the process mean to be zero.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tscore/linalg.hpp"
#include "tscore/models.hpp"

namespace tscore {

enum class EstimatorKind { MLE, PL, HT, HW, H_single };

std::string_view to_string(EstimatorKind k);
/// "mle", "pl", "ht", "hw", "h" (case-insensitive). Throws InputError.
EstimatorKind parse_estimator(std::string_view name);

/// n independent series of common length T, stored row-major.
class SeriesPanel {
public:
  /// Throws InputError unless n >= 1, T >= 2, data.size() == n*T, all finite.
  SeriesPanel(std::size_t n, std::size_t T, std::vector<double> data);
  static SeriesPanel from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t T() const noexcept { return T_; }
  std::span<const double> row(std::size_t p) const { return {data_.data() + p * T_, T_}; }
  std::span<const double> values() const noexcept { return data_; }

private:
  std::size_t n_;
  std::size_t T_;
  std::vector<double> data_;
};

/// Sum-of-squares-and-products matrix S = Y^T Y with n degrees of freedom.
struct SspMatrix {
  linalg::SymMatrix s;
  std::size_t n = 0;
  std::size_t T() const noexcept { return s.dim(); }
};

SspMatrix sufficient_statistic(const SeriesPanel& panel);

// --- Hyvarinen score of a single series --------------------------------------

/// -(1/s2) sum_i G^{ii} + 1/2 sum_i (sum_t G^{it} (y_t - mu) / s2)^2
double hyvarinen_single(const Theta& theta, std::span<const double> series,
                        const CovarianceBundle& bundle);
/// Same score through a precision operator (used for long series).
double hyvarinen_single(const Theta& theta, std::span<const double> series,
                        const PrecisionOperator& precision);

// --- Panel objectives --------------------------------------------------------

double hyvarinen_total(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec);
double hyvarinen_total(const SeriesPanel& panel, double sigma2, const CovarianceBundle& bundle);

double gaussian_loglik(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec);
double gaussian_loglik(const SeriesPanel& panel, double sigma2, const CovarianceBundle& bundle);

/// Unit-variance variance and lag-one covariance of a consecutive pair.
struct PairCovariance {
  double variance;
  double covariance;
};
PairCovariance pair_covariance(const ModelSpec& spec, double lambda);

/// Lag-zero and lag-one sums pooled over the panel: sum y_t^2 over all t,
/// and the pair sums sum (y_t^2 + y_{t+1}^2), sum y_t y_{t+1}, over the
/// consecutive pairs.
struct PairSums {
  double squares = 0.0;  // sum over pairs of y_t^2 + y_{t+1}^2
  double cross = 0.0;    // sum over pairs of y_t * y_{t+1}
  std::size_t pairs = 0;
};
PairSums pair_sums(const SeriesPanel& panel);
PairSums pair_sums(std::span<const double> series);

double pairwise_loglik(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec);
/// Pairwise log-likelihood with sigma2 replaced by its closed-form maximizer.
double pairwise_loglik_profiled(double lambda, const SeriesPanel& panel, const ModelSpec& spec);
/// 2 sum y_t y_{t-1} / sum (y_t^2 + y_{t-1}^2), pooled over series and
/// clipped to the AR1 domain. Throws ZeroDenominator on an all-zero panel.
double pairwise_ar1_closed_form(const SeriesPanel& panel);

// --- Wishart (matrix) Hyvarinen score ----------------------------------------

/// S together with its inverse, which does not depend on lambda.
struct WishartObservation {
  SspMatrix ssp;
  linalg::SymMatrix inverse;
};
/// Throws DegreesOfFreedom if n < T + 2, NotPositiveDefinite if S is singular.
WishartObservation prepare_wishart(SspMatrix ssp);

double hyvarinen_wishart(double lambda, const SspMatrix& ssp, double sigma2, const ModelSpec& spec);
double hyvarinen_wishart(const WishartObservation& obs, double sigma2, const linalg::SymMatrix& gamma_inverse);

/// d Gamma^{-1} / d lambda by central differences of the assembled inverse.
linalg::SymMatrix precision_derivative(const ModelSpec& spec, double lambda, std::size_t T);

double hyvarinen_wishart_gradient(double lambda, const SspMatrix& ssp, double sigma2, const ModelSpec& spec);
double hyvarinen_wishart_gradient(const WishartObservation& obs, double sigma2,
                                  const linalg::SymMatrix& gamma_inverse,
                                  const linalg::SymMatrix& d_gamma_inverse);

// --- Uniform access used by the estimators -------------------------------------

/// Value minimized by each estimator: -loglik (MLE), -pairwise (PL), total
/// Hyvarinen (HT), Wishart Hyvarinen (HW). H_single is not a panel objective.
double panel_objective(EstimatorKind kind, double lambda, const SeriesPanel& panel, double sigma2,
                       const ModelSpec& spec);

/// Per-series contributions to `panel_objective` (MLE, PL, HT only). Their
/// sum equals the panel objective.
std::vector<double> series_objectives(EstimatorKind kind, double lambda, const SeriesPanel& panel,
                                      double sigma2, const ModelSpec& spec);

}  // namespace tscore
