#include "tscore/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <string>

#include "tscore/error.hpp"

namespace tscore::optimize {

ScalarMinimum minimize_scalar(const ScalarFn& objective, double lower, double upper, double tol,
                              int max_evaluations) {
  if (!(lower < upper)) throw Error(ErrorCode::DomainError, "minimize_scalar needs lower < upper");
  if (!(tol > 0.0)) throw Error(ErrorCode::DomainError, "minimize_scalar needs tol > 0");

  int evaluations = 0;
  auto probe = [&](double x) {
    ++evaluations;
    const double v = objective(x);
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFinite, "objective is not finite at x = " + std::to_string(x));
    return v;
  };

  // Boost stops when the bracket is within roughly 2 * 2^(1-bits) * (|x| + 1/4)
  // of the minimizer, so pick bits from the widest |x| on the interval.
  const double scale = 2.0 * (std::max(std::abs(lower), std::abs(upper)) + 0.25);
  const int max_bits = std::numeric_limits<double>::digits / 2;
  const int bits = std::clamp(static_cast<int>(std::ceil(1.0 - std::log2(tol / scale))), 4, max_bits);

  // One evaluation for the initial point plus one per iteration; two more are
  // reserved for the bound checks.
  const std::uintmax_t budget = static_cast<std::uintmax_t>(std::max(max_evaluations - 3, 1));
  std::uintmax_t iterations = budget;
  const auto [x, fx] = boost::math::tools::brent_find_minima(probe, lower, upper, bits, iterations);

  ScalarMinimum result{x, fx, 0, iterations < budget};
  for (double bound : {lower, upper}) {
    try {
      const double fb = probe(bound);
      if (fb < result.value) {
        result.argmin = bound;
        result.value = fb;
      }
    } catch (const Error& e) {
      // A bound can sit on a numerically singular edge of the model; skip it.
      if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    }
  }
  result.evaluations = evaluations;
  return result;
}

Stencil derivative_stencil(double x, int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(x), 1.0);
  if (order == 1) {
    const double h = std::cbrt(eps) * scale;
    return {{-h, h}, {-0.5 / h, 0.5 / h}};
  }
  if (order == 2) {
    const double h = std::sqrt(std::sqrt(eps)) * scale;
    const double h2 = h * h;
    // (4 D(h) - D(2h)) / 3 with D the plain central second difference.
    return {{-2.0 * h, -h, 0.0, h, 2.0 * h},
            {-1.0 / (12.0 * h2), 4.0 / (3.0 * h2), -5.0 / (2.0 * h2), 4.0 / (3.0 * h2), -1.0 / (12.0 * h2)}};
  }
  throw Error(ErrorCode::DomainError, "derivative order must be 1 or 2");
}

double numeric_derivative(const ScalarFn& objective, double x, int order) {
  const Stencil st = derivative_stencil(x, order);
  double acc = 0.0;
  for (std::size_t k = 0; k < st.offsets.size(); ++k) {
    const double v = objective(x + st.offsets[k]);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "objective not finite in derivative stencil");
    acc += st.weights[k] * v;
  }
  return acc;
}

namespace {

struct CallbackState {
  const VectorFn* fn;
  std::size_t dim;
  std::exception_ptr error;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* state = static_cast<CallbackState*>(params);
  if (state->error) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::vector<double> x(state->dim);
    for (std::size_t i = 0; i < state->dim; ++i) x[i] = gsl_vector_get(v, i);
    return (*state->fn)(x);
  } catch (...) {
    state->error = std::current_exception();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexMinimum nelder_mead(const VectorFn& objective, std::vector<double> start, std::vector<double> step,
                           double size_tol, int max_iterations) {
  const std::size_t dim = start.size();
  if (dim == 0 || step.size() != dim) throw Error(ErrorCode::DimensionMismatch, "nelder_mead start/step");
  gsl_set_error_handler_off();

  CallbackState state{&objective, dim, nullptr};
  gsl_multimin_function fn{&gsl_trampoline, dim, &state};

  std::unique_ptr<gsl_vector, VectorDeleter> x0(gsl_vector_alloc(dim));
  std::unique_ptr<gsl_vector, VectorDeleter> ss(gsl_vector_alloc(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x0.get(), i, start[i]);
    gsl_vector_set(ss.get(), i, step[i]);
  }
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  if (gsl_multimin_fminimizer_set(m.get(), &fn, x0.get(), ss.get()) != GSL_SUCCESS) {
    if (state.error) std::rethrow_exception(state.error);
    throw Error(ErrorCode::NonFinite, "objective not finite at the initial simplex");
  }

  SimplexMinimum result;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && result.iterations < max_iterations) {
    ++result.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), size_tol);
  }
  if (state.error) std::rethrow_exception(state.error);

  result.converged = status == GSL_SUCCESS;
  result.value = gsl_multimin_fminimizer_minimum(m.get());
  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  result.argmin.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) result.argmin[i] = gsl_vector_get(best, i);
  if (!std::isfinite(result.value)) throw Error(ErrorCode::NonFinite, "Nelder-Mead ended on a non-finite value");
  return result;
}

}  // namespace tscore::optimize
