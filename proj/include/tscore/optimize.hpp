#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tscore::optimize {

using ScalarFn = std::function<double(double)>;

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Bounded Brent minimization (golden section with parabolic steps) on
/// [lower, upper]. Returns a bound when the objective is lower there than at
/// the interior optimum. Throws NonFinite if any probe is not finite.
/// `converged` is false when the evaluation budget ran out.
ScalarMinimum minimize_scalar(const ScalarFn& objective, double lower, double upper, double tol = 1e-6,
                              int max_evaluations = 200);

/// Finite-difference rule f^(order)(x) ~= sum_k weights[k] * f(x + offsets[k]).
/// Order 1: central difference, h = eps^(1/3) max(|x|, 1).
/// Order 2: central second difference at h = eps^(1/4) max(|x|, 1) with one
/// Richardson step against 2h (the five-point rule).
struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;
};
Stencil derivative_stencil(double x, int order);

double numeric_derivative(const ScalarFn& objective, double x, int order);

using VectorFn = std::function<double(std::span<const double>)>;

struct SimplexMinimum {
  std::vector<double> argmin;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Unconstrained Nelder-Mead; stops once the simplex characteristic size
/// drops below `size_tol` or after `max_iterations`.
SimplexMinimum nelder_mead(const VectorFn& objective, std::vector<double> start, std::vector<double> step,
                           double size_tol = 1e-9, int max_iterations = 500);

}  // namespace tscore::optimize
