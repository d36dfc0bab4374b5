#pragma once
// Exact samplers for the three process families and for the Wishart law of
// the sum-of-squares-and-products matrix.

#include <cstddef>
#include <vector>

#include "tscore/linalg.hpp"
#include "tscore/models.hpp"
#include "tscore/random.hpp"
#include "tscore/scoring.hpp"

namespace tscore {

/// Stationary AR(1) by the recursion y_1 = mu + z_1 / sqrt(1 - phi^2),
/// y_t = mu + phi (y_{t-1} - mu) + z_t, z_t ~ N(0, sigma2).
std::vector<double> simulate_ar1(const Theta& theta, std::size_t T, RandomStream& stream);

/// MA(1) straight from innovations: y_t = mu + z_t + alpha z_{t-1}.
std::vector<double> simulate_ma1_direct(const Theta& theta, std::size_t T, RandomStream& stream);

/// y = mu + sigma L z, L the Cholesky factor of the unit-variance Gamma.
std::vector<double> simulate_gaussian_exact(const ModelSpec& spec, const Theta& theta, std::size_t T,
                                            RandomStream& stream);
std::vector<double> simulate_gaussian_exact(const linalg::CholeskyFactor& factor, const Theta& theta,
                                            RandomStream& stream);

/// n independent series. AR1 uses the recursion; MA1 and ARFIMA use the exact
/// Cholesky draw with `bundle` (built here when null).
SeriesPanel simulate_panel(const ModelSpec& spec, const Theta& theta, std::size_t n, std::size_t T,
                           RandomStream& stream, const CovarianceBundle* bundle = nullptr);

/// Lower-triangular root R of a Wishart_T(n, sigma2 Gamma) draw, S = R R^T,
/// from the Bartlett decomposition R = sigma L A.
linalg::Matrix draw_wishart_root(const linalg::CholeskyFactor& factor, double sigma2, std::size_t n,
                                 RandomStream& stream);

SspMatrix draw_wishart(const linalg::CholeskyFactor& factor, double sigma2, std::size_t n,
                       RandomStream& stream);

}  // namespace tscore
