#include "tscore/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tscore/error.hpp"
#include "tscore/kernels.hpp"

namespace tscore {

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::MLE: return "MLE";
    case EstimatorKind::PL: return "PL";
    case EstimatorKind::HT: return "HT";
    case EstimatorKind::HW: return "HW";
    case EstimatorKind::H_single: return "H";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "mle") return EstimatorKind::MLE;
  if (s == "pl") return EstimatorKind::PL;
  if (s == "ht") return EstimatorKind::HT;
  if (s == "hw") return EstimatorKind::HW;
  if (s == "h" || s == "h_single") return EstimatorKind::H_single;
  throw Error(ErrorCode::InputError, "unknown estimator '" + std::string(name) + "'");
}

SeriesPanel::SeriesPanel(std::size_t n, std::size_t T, std::vector<double> data)
    : n_(n), T_(T), data_(std::move(data)) {
  if (n_ < 1) throw Error(ErrorCode::InputError, "panel needs at least one series");
  if (T_ < 2) throw Error(ErrorCode::InputError, "panel series need length T >= 2");
  if (data_.size() != n_ * T_) throw Error(ErrorCode::DimensionMismatch, "panel data size != n*T");
  for (double v : data_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InputError, "panel contains a non-finite value");
}

SeriesPanel SeriesPanel::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::InputError, "panel needs at least one series");
  const std::size_t T = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * T);
  for (const auto& r : rows) {
    if (r.size() != T) throw Error(ErrorCode::InputError, "ragged panel rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return SeriesPanel(rows.size(), T, std::move(data));
}

SspMatrix sufficient_statistic(const SeriesPanel& panel) {
  const std::size_t T = panel.T();
  linalg::Matrix acc(T, T);
  for (std::size_t p = 0; p < panel.n(); ++p) {
    const auto y = panel.row(p);
    for (std::size_t i = 0; i < T; ++i) {
      // upper triangle only
      kernels::axpy(y[i], y.subspan(i), acc.row(i).subspan(i));
    }
  }
  return SspMatrix{linalg::SymMatrix::from_upper(acc), panel.n()};
}

// ---------------------------------------------------------------------------

namespace {

double trace(const linalg::SymMatrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

// 1/2 |Gamma^{-1} (y - mu)|^2, before the sigma scaling.
double precision_norm(std::span<const double> series, double mu, const linalg::SymMatrix& inverse,
                      std::vector<double>& centered, std::vector<double>& z) {
  for (std::size_t t = 0; t < series.size(); ++t) centered[t] = series[t] - mu;
  linalg::multiply(inverse, centered, z);
  return kernels::sum_squares(z);
}

void check_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw Error(ErrorCode::DomainError, "sigma2 must be positive and finite");
}

}  // namespace

double hyvarinen_single(const Theta& theta, std::span<const double> series, const CovarianceBundle& bundle) {
  if (series.size() != bundle.T)
    throw Error(ErrorCode::DimensionMismatch, "series length " + std::to_string(series.size()) +
                                                  " != covariance dimension " + std::to_string(bundle.T));
  check_sigma2(theta.sigma2);
  std::vector<double> centered(bundle.T), z(bundle.T);
  const double q = precision_norm(series, theta.mu, bundle.inverse, centered, z);
  const double s2 = theta.sigma2;
  return -trace(bundle.inverse) / s2 + 0.5 * q / (s2 * s2);
}

double hyvarinen_single(const Theta& theta, std::span<const double> series, const PrecisionOperator& precision) {
  if (series.size() != precision.size())
    throw Error(ErrorCode::DimensionMismatch, "series length != precision dimension");
  check_sigma2(theta.sigma2);
  const std::size_t T = series.size();
  std::vector<double> centered(T), z(T);
  for (std::size_t t = 0; t < T; ++t) centered[t] = series[t] - theta.mu;
  precision.apply(centered, z);
  const double s2 = theta.sigma2;
  return -precision.trace() / s2 + 0.5 * kernels::sum_squares(z) / (s2 * s2);
}

double hyvarinen_total(const SeriesPanel& panel, double sigma2, const CovarianceBundle& bundle) {
  const Theta theta{0.0, sigma2, bundle.lambda};
  double total = 0.0;
  for (std::size_t p = 0; p < panel.n(); ++p) total += hyvarinen_single(theta, panel.row(p), bundle);
  return total;
}

double hyvarinen_total(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec) {
  return hyvarinen_total(panel, sigma2, build_covariance(spec, lambda, panel.T()));
}

namespace {

std::vector<double> gaussian_rows(const SeriesPanel& panel, double sigma2, const CovarianceBundle& bundle) {
  check_sigma2(sigma2);
  if (panel.T() != bundle.T) throw Error(ErrorCode::DimensionMismatch, "panel length != covariance dimension");
  const double T = static_cast<double>(panel.T());
  const double constant =
      -0.5 * T * std::log(2.0 * std::numbers::pi) - 0.5 * T * std::log(sigma2) - 0.5 * bundle.logdet;
  std::vector<double> out(panel.n());
  std::vector<double> z(panel.T());
  for (std::size_t p = 0; p < panel.n(); ++p) {
    const auto y = panel.row(p);
    linalg::multiply(bundle.inverse, y, z);
    out[p] = constant - 0.5 * kernels::dot(y, z) / sigma2;
  }
  return out;
}

}  // namespace

double gaussian_loglik(const SeriesPanel& panel, double sigma2, const CovarianceBundle& bundle) {
  double total = 0.0;
  for (double v : gaussian_rows(panel, sigma2, bundle)) total += v;
  return total;
}

double gaussian_loglik(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec) {
  return gaussian_loglik(panel, sigma2, build_covariance(spec, lambda, panel.T()));
}

// ---------------------------------------------------------------------------

PairCovariance pair_covariance(const ModelSpec& spec, double lambda) {
  check_lambda(spec, lambda);
  return {unit_autocovariance(spec.family, lambda, 0), unit_autocovariance(spec.family, lambda, 1)};
}

PairSums pair_sums(std::span<const double> y) {
  PairSums s;
  for (std::size_t t = 1; t < y.size(); ++t) {
    s.squares += y[t] * y[t] + y[t - 1] * y[t - 1];
    s.cross += y[t] * y[t - 1];
  }
  s.pairs = y.empty() ? 0 : y.size() - 1;
  return s;
}

PairSums pair_sums(const SeriesPanel& panel) {
  PairSums total;
  for (std::size_t p = 0; p < panel.n(); ++p) {
    const PairSums s = pair_sums(panel.row(p));
    total.squares += s.squares;
    total.cross += s.cross;
    total.pairs += s.pairs;
  }
  return total;
}

namespace {

double pairwise_from_sums(const PairSums& s, double sigma2, const PairCovariance& pc) {
  const double det = pc.variance * pc.variance - pc.covariance * pc.covariance;
  const double N = static_cast<double>(s.pairs);
  const double quad = (pc.variance * s.squares - 2.0 * pc.covariance * s.cross) / det;
  return -N * std::log(2.0 * std::numbers::pi) - 0.5 * N * std::log(sigma2 * sigma2 * det) -
         0.5 * quad / sigma2;
}

}  // namespace

double pairwise_loglik(double lambda, const SeriesPanel& panel, double sigma2, const ModelSpec& spec) {
  check_sigma2(sigma2);
  return pairwise_from_sums(pair_sums(panel), sigma2, pair_covariance(spec, lambda));
}

double pairwise_loglik_profiled(double lambda, const SeriesPanel& panel, const ModelSpec& spec) {
  const PairCovariance pc = pair_covariance(spec, lambda);
  const PairSums s = pair_sums(panel);
  const double det = pc.variance * pc.variance - pc.covariance * pc.covariance;
  const double quad = (pc.variance * s.squares - 2.0 * pc.covariance * s.cross) / det;
  if (!(quad > 0.0)) throw Error(ErrorCode::ZeroDenominator, "pairwise profile on an all-zero panel");
  const double N = static_cast<double>(s.pairs);
  const double sigma2_hat = quad / (2.0 * N);
  return -N * std::log(2.0 * std::numbers::pi) - N * std::log(sigma2_hat) - 0.5 * N * std::log(det) - N;
}

double pairwise_ar1_closed_form(const SeriesPanel& panel) {
  const PairSums s = pair_sums(panel);
  if (s.squares == 0.0) throw Error(ErrorCode::ZeroDenominator, "pairwise closed form on an all-zero panel");
  const Interval dom = parameter_domain(ModelSpec{Family::AR1, {}, {}});
  return std::clamp(2.0 * s.cross / s.squares, dom.lower, dom.upper);
}

// ---------------------------------------------------------------------------

WishartObservation prepare_wishart(SspMatrix ssp) {
  const std::size_t T = ssp.T();
  if (ssp.n < T + 2)
    throw Error(ErrorCode::DegreesOfFreedom, "Wishart score needs n >= T + 2 (n = " + std::to_string(ssp.n) +
                                                 ", T = " + std::to_string(T) + ")");
  auto inverse = linalg::invert_spd(ssp.s);
  return WishartObservation{std::move(ssp), std::move(inverse)};
}

double hyvarinen_wishart(const WishartObservation& obs, double sigma2, const linalg::SymMatrix& gamma_inverse) {
  check_sigma2(sigma2);
  const std::size_t T = obs.ssp.T();
  if (gamma_inverse.dim() != T) throw Error(ErrorCode::DimensionMismatch, "Wishart dimension mismatch");
  const double c = 0.5 * static_cast<double>(obs.ssp.n - T - 1);
  const double g = 0.5 / sigma2;
  double diag = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double sii = obs.inverse(i, i);
    diag += sii * sii;
    const auto srow = obs.inverse.row(i);
    const auto grow = gamma_inverse.row(i);
    for (std::size_t j = 0; j < T; ++j) {
      const double r = c * srow[j] - g * grow[j];
      quad += r * r;
    }
  }
  return -c * diag + 0.5 * quad;
}

double hyvarinen_wishart(double lambda, const SspMatrix& ssp, double sigma2, const ModelSpec& spec) {
  const WishartObservation obs = prepare_wishart(ssp);
  return hyvarinen_wishart(obs, sigma2, build_covariance(spec, lambda, ssp.T()).inverse);
}

linalg::SymMatrix precision_derivative(const ModelSpec& spec, double lambda, std::size_t T) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(lambda), 1.0);
  const auto plus = build_covariance(spec, lambda + h, T).inverse;
  const auto minus = build_covariance(spec, lambda - h, T).inverse;
  linalg::SymMatrix d(T);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = i; j < T; ++j) d.set(i, j, (plus(i, j) - minus(i, j)) / (2.0 * h));
  return d;
}

double hyvarinen_wishart_gradient(const WishartObservation& obs, double sigma2,
                                  const linalg::SymMatrix& gamma_inverse,
                                  const linalg::SymMatrix& d_gamma_inverse) {
  check_sigma2(sigma2);
  const std::size_t T = obs.ssp.T();
  if (gamma_inverse.dim() != T || d_gamma_inverse.dim() != T)
    throw Error(ErrorCode::DimensionMismatch, "Wishart dimension mismatch");
  const double c = 0.5 * static_cast<double>(obs.ssp.n - T - 1);
  const double g = 0.5 / sigma2;
  double acc = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const auto srow = obs.inverse.row(i);
    const auto grow = gamma_inverse.row(i);
    const auto drow = d_gamma_inverse.row(i);
    for (std::size_t j = 0; j < T; ++j) acc += (c * srow[j] - g * grow[j]) * drow[j];
  }
  return -g * acc;
}

double hyvarinen_wishart_gradient(double lambda, const SspMatrix& ssp, double sigma2, const ModelSpec& spec) {
  const WishartObservation obs = prepare_wishart(ssp);
  const std::size_t T = ssp.T();
  return hyvarinen_wishart_gradient(obs, sigma2, build_covariance(spec, lambda, T).inverse,
                                    precision_derivative(spec, lambda, T));
}

// ---------------------------------------------------------------------------

std::vector<double> series_objectives(EstimatorKind kind, double lambda, const SeriesPanel& panel,
                                      double sigma2, const ModelSpec& spec) {
  std::vector<double> out(panel.n());
  switch (kind) {
    case EstimatorKind::MLE: {
      out = gaussian_rows(panel, sigma2, build_covariance(spec, lambda, panel.T()));
      for (double& v : out) v = -v;
      return out;
    }
    case EstimatorKind::HT: {
      const auto bundle = build_covariance(spec, lambda, panel.T());
      const Theta theta{0.0, sigma2, lambda};
      for (std::size_t p = 0; p < panel.n(); ++p) out[p] = hyvarinen_single(theta, panel.row(p), bundle);
      return out;
    }
    case EstimatorKind::PL: {
      check_sigma2(sigma2);
      const PairCovariance pc = pair_covariance(spec, lambda);
      for (std::size_t p = 0; p < panel.n(); ++p) out[p] = -pairwise_from_sums(pair_sums(panel.row(p)), sigma2, pc);
      return out;
    }
    case EstimatorKind::HW:
    case EstimatorKind::H_single: break;
  }
  throw Error(ErrorCode::InputError, std::string(to_string(kind)) + " has no per-series decomposition");
}

double panel_objective(EstimatorKind kind, double lambda, const SeriesPanel& panel, double sigma2,
                       const ModelSpec& spec) {
  switch (kind) {
    case EstimatorKind::MLE: return -gaussian_loglik(lambda, panel, sigma2, spec);
    case EstimatorKind::PL: return -pairwise_loglik(lambda, panel, sigma2, spec);
    case EstimatorKind::HT: return hyvarinen_total(lambda, panel, sigma2, spec);
    case EstimatorKind::HW: return hyvarinen_wishart(lambda, sufficient_statistic(panel), sigma2, spec);
    case EstimatorKind::H_single: break;
  }
  throw Error(ErrorCode::InputError, "H_single is not a panel objective");
}

}  // namespace tscore
