#include "tscore/samplers.hpp"

#include <cmath>

#include "tscore/error.hpp"

namespace tscore {

std::vector<double> simulate_ar1(const Theta& theta, std::size_t T, RandomStream& stream) {
  const double phi = theta.lambda;
  if (!(std::abs(phi) < 1.0)) throw Error(ErrorCode::DomainError, "AR(1) requires |phi| < 1");
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "series length must be >= 1");
  const double sigma = std::sqrt(theta.sigma2);
  std::vector<double> y(T);
  double prev = sigma * stream.normal() / std::sqrt(1.0 - phi * phi);
  y[0] = theta.mu + prev;
  for (std::size_t t = 1; t < T; ++t) {
    prev = phi * prev + sigma * stream.normal();
    y[t] = theta.mu + prev;
  }
  return y;
}

std::vector<double> simulate_ma1_direct(const Theta& theta, std::size_t T, RandomStream& stream) {
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "series length must be >= 1");
  const double sigma = std::sqrt(theta.sigma2);
  std::vector<double> y(T);
  double prev = sigma * stream.normal();
  for (std::size_t t = 0; t < T; ++t) {
    const double z = sigma * stream.normal();
    y[t] = theta.mu + z + theta.lambda * prev;
    prev = z;
  }
  return y;
}

std::vector<double> simulate_gaussian_exact(const linalg::CholeskyFactor& factor, const Theta& theta,
                                            RandomStream& stream) {
  const std::size_t T = factor.dim();
  std::vector<double> z(T);
  for (double& v : z) v = stream.normal();
  const double sigma = std::sqrt(theta.sigma2);
  std::vector<double> y(T);
  for (std::size_t i = 0; i < T; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= i; ++k) acc += factor.lower(i, k) * z[k];
    y[i] = theta.mu + sigma * acc;
  }
  return y;
}

std::vector<double> simulate_gaussian_exact(const ModelSpec& spec, const Theta& theta, std::size_t T,
                                            RandomStream& stream) {
  return simulate_gaussian_exact(build_covariance(spec, theta.lambda, T).factor, theta, stream);
}

SeriesPanel simulate_panel(const ModelSpec& spec, const Theta& theta, std::size_t n, std::size_t T,
                           RandomStream& stream, const CovarianceBundle* bundle) {
  std::vector<double> data;
  data.reserve(n * T);
  if (spec.family == Family::AR1) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto y = simulate_ar1(theta, T, stream);
      data.insert(data.end(), y.begin(), y.end());
    }
    return SeriesPanel(n, T, std::move(data));
  }
  CovarianceBundle local;
  if (bundle == nullptr) {
    local = build_covariance(spec, theta.lambda, T);
    bundle = &local;
  }
  if (bundle->T != T) throw Error(ErrorCode::DimensionMismatch, "shared covariance has the wrong length");
  for (std::size_t p = 0; p < n; ++p) {
    const auto y = simulate_gaussian_exact(bundle->factor, theta, stream);
    data.insert(data.end(), y.begin(), y.end());
  }
  return SeriesPanel(n, T, std::move(data));
}

linalg::Matrix draw_wishart_root(const linalg::CholeskyFactor& factor, double sigma2, std::size_t n,
                                 RandomStream& stream) {
  const std::size_t T = factor.dim();
  if (n < T) throw Error(ErrorCode::DegreesOfFreedom, "Wishart draw needs n >= T");
  linalg::Matrix a(T, T);
  for (std::size_t i = 0; i < T; ++i) {
    a(i, i) = std::sqrt(stream.chi_squared(static_cast<double>(n - i)));
    for (std::size_t j = 0; j < i; ++j) a(i, j) = stream.normal();
  }
  linalg::Matrix root = linalg::multiply_lower(factor.lower, a);
  const double sigma = std::sqrt(sigma2);
  for (double& v : root.values()) v *= sigma;
  return root;
}

SspMatrix draw_wishart(const linalg::CholeskyFactor& factor, double sigma2, std::size_t n, RandomStream& stream) {
  return SspMatrix{linalg::lower_gram(draw_wishart_root(factor, sigma2, n, stream)), n};
}

}  // namespace tscore
