#pragma once
// Stationary Gaussian linear process families and their covariance structure.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "tscore/linalg.hpp"

namespace tscore {

enum class Family { AR1, MA1, ARFIMA0d0 };

std::string_view to_string(Family f);
/// Accepts "ar1", "ma1", "arfima" (case-insensitive). Throws InputError.
Family parse_family(std::string_view name);

struct ModelSpec {
  Family family = Family::AR1;
  std::optional<double> known_sigma2;
  std::optional<double> known_mu;
};

/// Parameters of the linear process: mean, innovation variance, and the
/// dependence parameter (phi for AR1, alpha for MA1, d for ARFIMA(0,d,0)).
struct Theta {
  double mu = 0.0;
  double sigma2 = 1.0;
  double lambda = 0.0;
};

struct Interval {
  double lower;
  double upper;
  bool contains(double x) const { return x >= lower && x <= upper; }
};

/// Compact search domain for lambda: (-0.99, 0.99) for AR1 and MA1,
/// (0.001, 0.499) for ARFIMA(0,d,0).
Interval parameter_domain(const ModelSpec& spec);

/// Throws DomainError unless lambda lies in the family's open domain
/// (|lambda| < 1, or 0 < d < 0.5). Slightly wider than parameter_domain so
/// that finite-difference stencils around a boundary estimate stay valid.
void check_lambda(const ModelSpec& spec, double lambda);

/// Unit-variance autocovariance gamma_lambda(lag).
double unit_autocovariance(Family family, double lambda, std::size_t lag);

/// sigma^2 * gamma_lambda(lag).
double autocovariance(const ModelSpec& spec, const Theta& theta, std::size_t lag);

/// Unit-variance autocovariance supplied by the caller, as (lambda, lag) -> value.
using AutocovarianceFn = std::function<double(double lambda, std::size_t lag)>;

struct CovarianceBundle {
  std::size_t T = 0;
  double lambda = 0.0;
  linalg::SymMatrix gamma;  // unit-sigma^2 Toeplitz matrix
  linalg::CholeskyFactor factor;
  linalg::SymMatrix inverse;
  double logdet = 0.0;
};

CovarianceBundle build_covariance(const ModelSpec& spec, double lambda, std::size_t T);
inline CovarianceBundle build_covariance(const ModelSpec& spec, const Theta& theta, std::size_t T) {
  return build_covariance(spec, theta.lambda, T);
}
/// Same construction for an arbitrary stationary autocovariance. No domain
/// checks beyond positive-definiteness.
CovarianceBundle build_covariance(const AutocovarianceFn& acv, double lambda, std::size_t T);

/// Symmetric Toeplitz matrix with first row `first_row`.
linalg::SymMatrix toeplitz(std::span<const double> first_row);

/// Precision Gamma^{-1} as an operator, for single-series work at lengths
/// where forming the dense inverse is too expensive. AR1 uses the closed-form
/// tridiagonal precision; other families fall back to the dense bundle.
class PrecisionOperator {
public:
  PrecisionOperator(const ModelSpec& spec, double lambda, std::size_t T);

  std::size_t size() const noexcept { return T_; }
  double trace() const noexcept { return trace_; }
  /// out = Gamma^{-1} x
  void apply(std::span<const double> x, std::span<double> out) const;

private:
  struct Tridiagonal {
    double phi;
  };
  std::size_t T_;
  double trace_ = 0.0;
  std::variant<Tridiagonal, linalg::SymMatrix> rep_;
};

}  // namespace tscore
