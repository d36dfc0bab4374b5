#include "tscore/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tscore/error.hpp"

namespace tscore {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::AR1: return "ar1";
    case Family::MA1: return "ma1";
    case Family::ARFIMA0d0: return "arfima";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "ar1") return Family::AR1;
  if (s == "ma1") return Family::MA1;
  if (s == "arfima" || s == "arfima0d0") return Family::ARFIMA0d0;
  throw Error(ErrorCode::InputError, "unknown model family '" + std::string(name) + "'");
}

Interval parameter_domain(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::AR1:
    case Family::MA1: return {-0.99, 0.99};
    case Family::ARFIMA0d0: return {0.001, 0.499};
  }
  return {0.0, 0.0};
}

void check_lambda(const ModelSpec& spec, double lambda) {
  const bool ok = spec.family == Family::ARFIMA0d0 ? (lambda > 0.0 && lambda < 0.5)
                                                   : (std::abs(lambda) < 1.0);
  if (!ok)
    throw Error(ErrorCode::DomainError, "lambda = " + std::to_string(lambda) +
                                            " outside the domain of " +
                                            std::string(to_string(spec.family)));
}

namespace {

// gamma(k) = Gamma(1-2d) (-1)^k / (Gamma(k-d+1) Gamma(1-k-d)). The reflection
// formula turns (-1)^k / Gamma(1-k-d) into Gamma(k+d) sin(pi d) / pi, which
// removes the alternating signs; everything left is positive on 0 < d < 0.5.
double arfima_unit_acv(double d, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double log_mag = std::lgamma(1.0 - 2.0 * d) + std::lgamma(k + d) - std::lgamma(k + 1.0 - d) +
                         std::log(std::sin(std::numbers::pi * d)) - std::log(std::numbers::pi);
  return std::exp(log_mag);
}

}  // namespace

double unit_autocovariance(Family family, double lambda, std::size_t lag) {
  switch (family) {
    case Family::AR1: return std::pow(lambda, static_cast<double>(lag)) / (1.0 - lambda * lambda);
    case Family::MA1:
      if (lag == 0) return 1.0 + lambda * lambda;
      return lag == 1 ? lambda : 0.0;
    case Family::ARFIMA0d0: return arfima_unit_acv(lambda, lag);
  }
  return 0.0;
}

double autocovariance(const ModelSpec& spec, const Theta& theta, std::size_t lag) {
  check_lambda(spec, theta.lambda);
  if (!(theta.sigma2 > 0.0)) throw Error(ErrorCode::DomainError, "sigma2 must be positive");
  return theta.sigma2 * unit_autocovariance(spec.family, theta.lambda, lag);
}

linalg::SymMatrix toeplitz(std::span<const double> first_row) {
  const std::size_t n = first_row.size();
  linalg::SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, first_row[j - i]);
  return m;
}

namespace {

CovarianceBundle assemble(std::vector<double> first_row, double lambda) {
  CovarianceBundle b;
  b.T = first_row.size();
  b.lambda = lambda;
  b.gamma = toeplitz(first_row);
  b.factor = linalg::cholesky(b.gamma);
  b.inverse = linalg::invert_from_factor(b.factor);
  b.logdet = linalg::log_det(b.factor);
  return b;
}

}  // namespace

CovarianceBundle build_covariance(const ModelSpec& spec, double lambda, std::size_t T) {
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "covariance requires T >= 1");
  check_lambda(spec, lambda);
  std::vector<double> row(T);
  for (std::size_t k = 0; k < T; ++k) row[k] = unit_autocovariance(spec.family, lambda, k);
  return assemble(std::move(row), lambda);
}

CovarianceBundle build_covariance(const AutocovarianceFn& acv, double lambda, std::size_t T) {
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "covariance requires T >= 1");
  std::vector<double> row(T);
  for (std::size_t k = 0; k < T; ++k) row[k] = acv(lambda, k);
  return assemble(std::move(row), lambda);
}

PrecisionOperator::PrecisionOperator(const ModelSpec& spec, double lambda, std::size_t T) : T_(T) {
  check_lambda(spec, lambda);
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "precision requires T >= 1");
  if (spec.family == Family::AR1) {
    rep_ = Tridiagonal{lambda};
    trace_ = T == 1 ? 1.0 - lambda * lambda
                    : 2.0 + static_cast<double>(T - 2) * (1.0 + lambda * lambda);
    return;
  }
  auto bundle = build_covariance(spec, lambda, T);
  double tr = 0.0;
  for (std::size_t i = 0; i < T; ++i) tr += bundle.inverse(i, i);
  trace_ = tr;
  rep_ = std::move(bundle.inverse);
}

void PrecisionOperator::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != T_ || out.size() != T_)
    throw Error(ErrorCode::DimensionMismatch, "precision operator length");
  if (const auto* dense = std::get_if<linalg::SymMatrix>(&rep_)) {
    linalg::multiply(*dense, x, out);
    return;
  }
  const double phi = std::get<Tridiagonal>(rep_).phi;
  if (T_ == 1) {
    out[0] = (1.0 - phi * phi) * x[0];
    return;
  }
  const double mid = 1.0 + phi * phi;
  out[0] = x[0] - phi * x[1];
  for (std::size_t i = 1; i + 1 < T_; ++i) out[i] = mid * x[i] - phi * (x[i - 1] + x[i + 1]);
  out[T_ - 1] = x[T_ - 1] - phi * x[T_ - 2];
}

}  // namespace tscore
