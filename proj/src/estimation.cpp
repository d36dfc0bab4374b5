#include "tscore/estimation.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "tscore/error.hpp"
#include "tscore/optimize.hpp"
#include "tscore/samplers.hpp"

namespace tscore {

namespace {

constexpr double kMinSensitivity = 1e-10;

std::function<double(double)> make_objective(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel,
                                             double sigma2, const FitOptions& options) {
  switch (kind) {
    case EstimatorKind::MLE:
      return [&spec, &panel, sigma2](double l) {
        return -gaussian_loglik(panel, sigma2, build_covariance(spec, l, panel.T()));
      };
    case EstimatorKind::HT:
      return [&spec, &panel, sigma2](double l) {
        return hyvarinen_total(panel, sigma2, build_covariance(spec, l, panel.T()));
      };
    case EstimatorKind::PL:
      if (options.profile_sigma2) return [&spec, &panel](double l) { return -pairwise_loglik_profiled(l, panel, spec); };
      return [&spec, &panel, sigma2](double l) { return -pairwise_loglik(l, panel, sigma2, spec); };
    case EstimatorKind::HW: {
      auto obs = std::make_shared<WishartObservation>(prepare_wishart(sufficient_statistic(panel)));
      return [obs, &spec, sigma2](double l) {
        return hyvarinen_wishart(*obs, sigma2, build_covariance(spec, l, obs->ssp.T()).inverse);
      };
    }
    case EstimatorKind::H_single: break;
  }
  throw Error(ErrorCode::InputError, "H_single is fitted with fit_single_series");
}

SdEstimate finish(double J, double K, std::size_t n, bool observed_information) {
  if (!(std::abs(K) >= kMinSensitivity) || !std::isfinite(K))
    throw Error(ErrorCode::SingularInformation, "sensitivity K = " + std::to_string(K));
  const double nd = static_cast<double>(n);
  if (observed_information) {
    if (K <= 0.0) throw Error(ErrorCode::SingularInformation, "observed information is not positive");
    return {1.0 / std::sqrt(nd * K), GodambeInfo{K, K, K}};
  }
  return {std::sqrt(J / (nd * K * K)), GodambeInfo{J, K, K * K / J}};
}

SdEstimate per_series_sandwich(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel, double sigma2,
                               double lambda_hat) {
  const std::size_t n = panel.n();
  auto accumulate = [&](const optimize::Stencil& st) {
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 0; k < st.offsets.size(); ++k) {
      const auto v = series_objectives(kind, lambda_hat + st.offsets[k], panel, sigma2, spec);
      for (std::size_t p = 0; p < n; ++p) d[p] += st.weights[k] * v[p];
    }
    return d;
  };
  const auto g = accumulate(optimize::derivative_stencil(lambda_hat, 1));
  const auto h = accumulate(optimize::derivative_stencil(lambda_hat, 2));
  double J = 0.0, K = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    J += g[p] * g[p];
    K += h[p];
  }
  J /= static_cast<double>(n);
  K /= static_cast<double>(n);
  return finish(J, K, n, kind == EstimatorKind::MLE);
}

SdEstimate wishart_bootstrap(const ModelSpec& spec, const SeriesPanel& panel, double sigma2, double lambda_hat,
                             const FitOptions& options) {
  const std::size_t T = panel.T();
  const std::size_t n = panel.n();
  if (options.bootstrap_replicates < 2)
    throw Error(ErrorCode::InputError, "HW bootstrap needs at least two replicates");
  const WishartObservation observed = prepare_wishart(sufficient_statistic(panel));

  const double K_total = optimize::numeric_derivative(
      [&](double l) { return hyvarinen_wishart(observed, sigma2, build_covariance(spec, l, T).inverse); },
      lambda_hat, 2);

  const CovarianceBundle bundle = build_covariance(spec, lambda_hat, T);
  const linalg::SymMatrix d_inverse = precision_derivative(spec, lambda_hat, T);
  double sum_sq = 0.0;
  for (std::size_t b = 0; b < options.bootstrap_replicates; ++b) {
    RandomStream stream(options.bootstrap_seed, {b});
    const linalg::Matrix root = draw_wishart_root(bundle.factor, sigma2, n, stream);
    WishartObservation draw{SspMatrix{linalg::lower_gram(root), n},
                            linalg::lower_gram_transposed(linalg::lower_triangular_inverse(root))};
    const double g = hyvarinen_wishart_gradient(draw, sigma2, bundle.inverse, d_inverse);
    sum_sq += g * g;
  }
  const double J_total = sum_sq / static_cast<double>(options.bootstrap_replicates);
  const double nd = static_cast<double>(n);
  return finish(J_total / nd, K_total / nd, n, false);
}

SdEstimate profiled_pairwise_sandwich(const ModelSpec& spec, const SeriesPanel& panel, double lambda_hat) {
  // Two estimating equations (sigma2, lambda); sigma2 sits at its profile value.
  const PairCovariance pc = pair_covariance(spec, lambda_hat);
  const PairSums all = pair_sums(panel);
  const double det = pc.variance * pc.variance - pc.covariance * pc.covariance;
  const double sigma2_hat =
      (pc.variance * all.squares - 2.0 * pc.covariance * all.cross) / det / (2.0 * static_cast<double>(all.pairs));
  const std::size_t n = panel.n();

  auto series_value = [&](std::size_t p, double s2, double l) {
    const std::vector<double> row(panel.row(p).begin(), panel.row(p).end());
    return -pairwise_loglik(l, SeriesPanel(1, row.size(), row), s2, spec);
  };
  const double eps = std::numeric_limits<double>::epsilon();
  const std::array<double, 2> x{sigma2_hat, lambda_hat};
  const std::array<double, 2> h1{std::cbrt(eps) * std::max(std::abs(x[0]), 1.0),
                                 std::cbrt(eps) * std::max(std::abs(x[1]), 1.0)};
  const std::array<double, 2> h2{std::sqrt(std::sqrt(eps)) * std::max(std::abs(x[0]), 1.0),
                                 std::sqrt(std::sqrt(eps)) * std::max(std::abs(x[1]), 1.0)};
  std::array<double, 4> J{};
  for (std::size_t p = 0; p < n; ++p) {
    const double g0 = (series_value(p, x[0] + h1[0], x[1]) - series_value(p, x[0] - h1[0], x[1])) / (2 * h1[0]);
    const double g1 = (series_value(p, x[0], x[1] + h1[1]) - series_value(p, x[0], x[1] - h1[1])) / (2 * h1[1]);
    J[0] += g0 * g0;
    J[1] += g0 * g1;
    J[3] += g1 * g1;
  }
  auto total = [&](double s2, double l) {
    if (s2 <= 0.0) throw Error(ErrorCode::DomainError, "sigma2 stencil left the domain");
    return -pairwise_loglik(l, panel, s2, spec);
  };
  const double f0 = total(x[0], x[1]);
  const double k00 = (total(x[0] + h2[0], x[1]) - 2 * f0 + total(x[0] - h2[0], x[1])) / (h2[0] * h2[0]);
  const double k11 = (total(x[0], x[1] + h2[1]) - 2 * f0 + total(x[0], x[1] - h2[1])) / (h2[1] * h2[1]);
  const double k01 = (total(x[0] + h2[0], x[1] + h2[1]) - total(x[0] + h2[0], x[1] - h2[1]) -
                      total(x[0] - h2[0], x[1] + h2[1]) + total(x[0] - h2[0], x[1] - h2[1])) /
                     (4 * h2[0] * h2[1]);
  const double nd = static_cast<double>(n);
  J[2] = J[1];
  for (double& v : J) v /= nd;
  const double K[4] = {k00 / nd, k01 / nd, k01 / nd, k11 / nd};
  const double kdet = K[0] * K[3] - K[1] * K[2];
  if (!(std::abs(kdet) >= kMinSensitivity)) throw Error(ErrorCode::SingularInformation, "profiled pairwise K");
  // Row 2 of K^{-1}: (-K10, K00) / det
  const double a = -K[2] / kdet, b = K[0] / kdet;
  const double v_lambda = a * a * J[0] + 2 * a * b * J[1] + b * b * J[3];
  const double sd = std::sqrt(v_lambda / nd);
  const double k_eff = 1.0 / b;  // Schur complement of K for lambda
  return {sd, GodambeInfo{v_lambda * k_eff * k_eff, k_eff, 1.0 / v_lambda}};
}

}  // namespace

SdEstimate godambe_sd(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel, double sigma2,
                      double lambda_hat, const FitOptions& options) {
  switch (kind) {
    case EstimatorKind::MLE:
    case EstimatorKind::HT: return per_series_sandwich(kind, spec, panel, sigma2, lambda_hat);
    case EstimatorKind::PL:
      if (options.profile_sigma2) return profiled_pairwise_sandwich(spec, panel, lambda_hat);
      return per_series_sandwich(kind, spec, panel, sigma2, lambda_hat);
    case EstimatorKind::HW: return wishart_bootstrap(spec, panel, sigma2, lambda_hat, options);
    case EstimatorKind::H_single: break;
  }
  throw Error(ErrorCode::InputError, "use fit_single_series for the single-series estimator");
}

FitResult fit(EstimatorKind kind, const ModelSpec& spec, const SeriesPanel& panel, double sigma2,
              const FitOptions& options) {
  if (kind == EstimatorKind::H_single) {
    if (panel.n() != 1) throw Error(ErrorCode::InputError, "single-series estimator needs exactly one series");
    return fit_single_series(spec, panel.row(0), options);
  }
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::DomainError, "sigma2 must be positive");

  const Interval dom = parameter_domain(spec);
  FitResult result;
  result.kind = kind;
  result.estimate = Theta{0.0, sigma2, 0.0};

  if (kind == EstimatorKind::PL && options.profile_sigma2 && spec.family == Family::AR1) {
    result.estimate.lambda = pairwise_ar1_closed_form(panel);
    result.converged = true;
  } else {
    const auto objective = make_objective(kind, spec, panel, sigma2, options);
    const auto m = optimize::minimize_scalar(objective, dom.lower, dom.upper, options.tol, options.max_evaluations);
    if (!m.converged)
      throw Error(ErrorCode::NotConverged, std::string(to_string(kind)) + " fit exhausted " +
                                               std::to_string(options.max_evaluations) + " evaluations");
    result.estimate.lambda = m.argmin;
    result.evaluations = m.evaluations;
    result.converged = true;
  }
  if (options.compute_sd) {
    const SdEstimate sd = godambe_sd(kind, spec, panel, sigma2, result.estimate.lambda, options);
    result.sd = sd.sd;
    result.info = sd.info;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct SingleSeriesModel {
  const ModelSpec& spec;
  Interval dom;

  double lambda_of(double u) const { return dom.lower + (dom.upper - dom.lower) / (1.0 + std::exp(-u)); }
  double u_of(double lambda) const {
    const double r = (lambda - dom.lower) / (dom.upper - dom.lower);
    return std::log(r / (1.0 - r));
  }
};

// Gradient and Hessian of H over (sigma2, lambda), by central differences.
struct LocalH {
  const ModelSpec& spec;
  std::size_t T;
  double sigma2;
  double lambda;
  double h_sigma;
  double h_lambda;
  PrecisionOperator minus, centre, plus;

  LocalH(const ModelSpec& s, std::size_t len, double s2, double l, double hs, double hl)
      : spec(s), T(len), sigma2(s2), lambda(l), h_sigma(hs), h_lambda(hl),
        minus(s, l - hl, len), centre(s, l, len), plus(s, l + hl, len) {}

  double at(std::span<const double> y, double s2, int lambda_step) const {
    const PrecisionOperator& op = lambda_step < 0 ? minus : (lambda_step > 0 ? plus : centre);
    return hyvarinen_single(Theta{0.0, s2, lambda + lambda_step * h_lambda}, y, op);
  }

  std::array<double, 2> gradient(std::span<const double> y) const {
    return {(at(y, sigma2 + h_sigma, 0) - at(y, sigma2 - h_sigma, 0)) / (2 * h_sigma),
            (at(y, sigma2, 1) - at(y, sigma2, -1)) / (2 * h_lambda)};
  }

  std::array<double, 4> hessian(std::span<const double> y) const {
    const double f0 = at(y, sigma2, 0);
    const double hss = (at(y, sigma2 + h_sigma, 0) - 2 * f0 + at(y, sigma2 - h_sigma, 0)) / (h_sigma * h_sigma);
    const double hll = (at(y, sigma2, 1) - 2 * f0 + at(y, sigma2, -1)) / (h_lambda * h_lambda);
    const double hsl = (at(y, sigma2 + h_sigma, 1) - at(y, sigma2 + h_sigma, -1) - at(y, sigma2 - h_sigma, 1) +
                        at(y, sigma2 - h_sigma, -1)) /
                       (4 * h_sigma * h_lambda);
    return {hss, hsl, hsl, hll};
  }
};

}  // namespace

FitResult fit_single_series(const ModelSpec& spec, std::span<const double> series, const FitOptions& options) {
  const std::size_t T = series.size();
  if (T < 2) throw Error(ErrorCode::InputError, "single-series fit needs T >= 2");
  const double mu = spec.known_mu.value_or(0.0);
  std::vector<double> y(series.begin(), series.end());
  for (double& v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InputError, "series contains a non-finite value");
    v -= mu;
  }
  double mean_square = 0.0;
  for (double v : y) mean_square += v * v;
  mean_square /= static_cast<double>(T);
  if (!(mean_square > 0.0)) throw Error(ErrorCode::ZeroDenominator, "series is identically equal to its mean");

  const SingleSeriesModel model{spec, parameter_domain(spec)};
  int evaluations = 0;
  auto objective = [&](std::span<const double> x) {
    ++evaluations;
    const double lambda = model.lambda_of(x[1]);
    return hyvarinen_single(Theta{0.0, std::exp(x[0]), lambda}, y, PrecisionOperator(spec, lambda, T));
  };
  const double midpoint = 0.5 * (model.dom.lower + model.dom.upper);
  const auto m = optimize::nelder_mead(objective, {std::log(mean_square), model.u_of(midpoint)}, {0.5, 0.5},
                                       0.1 * options.tol, 500);
  if (!m.converged) throw Error(ErrorCode::NotConverged, "Nelder-Mead did not converge in 500 iterations");

  FitResult result;
  result.kind = EstimatorKind::H_single;
  result.estimate = Theta{mu, std::exp(m.argmin[0]), model.lambda_of(m.argmin[1])};
  result.evaluations = evaluations;
  result.converged = true;
  if (!options.compute_sd) return result;

  // Sandwich K^{-1} J K^{-1} for (sigma2, lambda): K from the observed
  // Hessian, J from score outer products over series simulated at the fit.
  const double eps = std::numeric_limits<double>::epsilon();
  const double s2 = result.estimate.sigma2;
  const double l = result.estimate.lambda;
  const LocalH hess(spec, T, s2, l, std::sqrt(std::sqrt(eps)) * std::max(s2, 1.0),
                    std::sqrt(std::sqrt(eps)) * std::max(std::abs(l), 1.0));
  const LocalH grad(spec, T, s2, l, std::cbrt(eps) * std::max(s2, 1.0), std::cbrt(eps) * std::max(std::abs(l), 1.0));
  const auto K = hess.hessian(y);
  std::array<double, 4> J{};
  const Theta truth{0.0, s2, l};
  CovarianceBundle bundle;
  if (spec.family != Family::AR1) bundle = build_covariance(spec, l, T);
  for (std::size_t b = 0; b < options.bootstrap_replicates; ++b) {
    RandomStream stream(options.bootstrap_seed, {b});
    const auto yb = spec.family == Family::AR1 ? simulate_ar1(truth, T, stream)
                                               : simulate_gaussian_exact(bundle.factor, truth, stream);
    const auto g = grad.gradient(yb);
    J[0] += g[0] * g[0];
    J[1] += g[0] * g[1];
    J[3] += g[1] * g[1];
  }
  const double B = static_cast<double>(options.bootstrap_replicates);
  J[0] /= B;
  J[1] /= B;
  J[3] /= B;
  J[2] = J[1];
  const double kdet = K[0] * K[3] - K[1] * K[2];
  if (!(std::abs(kdet) >= kMinSensitivity)) throw Error(ErrorCode::SingularInformation, "single-series Hessian");
  const double a = -K[2] / kdet, c = K[0] / kdet;
  const double v_lambda = a * a * J[0] + 2 * a * c * J[1] + c * c * J[3];
  result.sd = std::sqrt(v_lambda);
  const double k_eff = 1.0 / c;
  result.info = GodambeInfo{v_lambda * k_eff * k_eff, k_eff, 1.0 / v_lambda};
  return result;
}

double are(double sd_mle, double sd_est) {
  if (!(sd_mle > 0.0) || !(sd_est > 0.0))
    throw Error(ErrorCode::DomainError, "ARE needs positive standard deviations");
  const double r = sd_mle / sd_est;
  return r * r;
}

}  // namespace tscore
