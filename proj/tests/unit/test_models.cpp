#include <doctest.h>

#include <cmath>

#include "tscore/error.hpp"
#include "tscore/models.hpp"
#include "tscore/scoring.hpp"

using namespace tscore;

namespace {

// ARFIMA(0,d,0) autocovariance from gamma(0) = G(1-2d)/G(1-d)^2 and the
// ratio recursion gamma(k) = gamma(k-1) (k-1+d)/(k-d).
double hosking_acv(double d, std::size_t lag) {
  double g = std::tgamma(1 - 2 * d) / (std::tgamma(1 - d) * std::tgamma(1 - d));
  for (std::size_t k = 1; k <= lag; ++k) g *= (k - 1 + d) / (k - d);
  return g;
}

const ModelSpec kAr1{Family::AR1, 1.0, 0.0};
const ModelSpec kMa1{Family::MA1, 1.0, 0.0};
const ModelSpec kArfima{Family::ARFIMA0d0, 1.0, 0.0};

}  // namespace

TEST_SUITE("models") {

TEST_CASE("parameter domains") {
  CHECK(parameter_domain(kAr1).lower == -0.99);
  CHECK(parameter_domain(kAr1).upper == 0.99);
  CHECK(parameter_domain(kMa1).lower == -0.99);
  CHECK(parameter_domain(kMa1).upper == 0.99);
  CHECK(parameter_domain(kArfima).lower == 0.001);
  CHECK(parameter_domain(kArfima).upper == 0.499);
}

TEST_CASE("family names round-trip") {
  for (Family f : {Family::AR1, Family::MA1, Family::ARFIMA0d0}) CHECK(parse_family(to_string(f)) == f);
  CHECK(parse_family("AR1") == Family::AR1);
  CHECK_THROWS_AS(parse_family("arma11"), Error);
}

TEST_CASE("autocovariance examples") {
  CHECK(autocovariance(kAr1, {0, 1, 0}, 0) == 1.0);
  CHECK(autocovariance(kMa1, {0, 1, 0.5}, 1) == doctest::Approx(0.5));
  CHECK(autocovariance(kMa1, {0, 1, 0.5}, 0) == doctest::Approx(1.25));
  CHECK(autocovariance(kMa1, {0, 1, 0.5}, 2) == 0.0);
  CHECK(autocovariance(kArfima, {0, 1, 0.25}, 0) == doctest::Approx(1.18034).epsilon(1e-5));
  CHECK(autocovariance(kAr1, {0, 2.0, 0.5}, 3) == doctest::Approx(2.0 * 0.125 / 0.75));
}

TEST_CASE("ARFIMA autocovariance matches the ratio recursion") {
  for (double d : {0.01, 0.1, 0.25, 0.4, 0.49})
    for (std::size_t lag : {0u, 1u, 2u, 10u, 49u, 200u}) {
      CAPTURE(d);
      CAPTURE(lag);
      CHECK(unit_autocovariance(Family::ARFIMA0d0, d, lag) == doctest::Approx(hosking_acv(d, lag)).epsilon(1e-11));
    }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(autocovariance(kAr1, {0, 1, 1.0}, 0), Error);
  CHECK_THROWS_AS(autocovariance(kArfima, {0, 1, 0.5}, 0), Error);
  CHECK_THROWS_AS(autocovariance(kArfima, {0, 1, 0.0}, 0), Error);
  CHECK_THROWS_AS(autocovariance(kMa1, {0, -1, 0.2}, 0), Error);
  CHECK_NOTHROW(check_lambda(kAr1, 0.995));
}

TEST_CASE("build_covariance examples") {
  const auto w = build_covariance(kAr1, 0.0, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(w.gamma(i, j) == (i == j ? 1.0 : 0.0));

  const auto a = build_covariance(kAr1, 0.5, 2);
  CHECK(a.gamma(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(a.gamma(0, 1) == doctest::Approx(2.0 / 3.0));

  const auto m = build_covariance(kMa1, 0.5, 3);
  CHECK(m.gamma(0, 0) == doctest::Approx(1.25));
  CHECK(m.gamma(1, 1) == doctest::Approx(1.25));
  CHECK(m.gamma(0, 1) == doctest::Approx(0.5));
  CHECK(m.gamma(0, 2) == 0.0);
}

TEST_CASE("covariance bundles are Toeplitz with a consistent inverse") {
  for (const ModelSpec& spec : {kAr1, kMa1, kArfima}) {
    const double lambda = spec.family == Family::ARFIMA0d0 ? 0.3 : -0.7;
    const auto b = build_covariance(spec, lambda, 30);
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 30; ++j) {
        const std::size_t lag = i > j ? i - j : j - i;
        CHECK(b.gamma(i, j) == b.gamma(0, lag));
      }
    const auto prod = linalg::multiply(b.gamma.dense(), b.inverse.dense());
    CHECK(linalg::max_abs_diff(prod, linalg::Matrix::identity(30)) < 1e-8);
  }
}

TEST_CASE("custom autocovariance") {
  const AutocovarianceFn acv = [](double l, std::size_t k) { return k == 0 ? 1.0 : (k == 1 ? l : 0.0); };
  const auto b = build_covariance(acv, 0.3, 4);
  CHECK(b.gamma(1, 2) == 0.3);
  CHECK(b.gamma(0, 3) == 0.0);
}

TEST_CASE("pair covariance") {
  const auto p = pair_covariance(kArfima, 0.25);
  CHECK(p.variance == doctest::Approx(1.18034).epsilon(1e-5));
  CHECK(p.covariance == doctest::Approx(0.393447).epsilon(1e-5));
  const auto q = pair_covariance(kMa1, 0.5);
  CHECK(q.variance == doctest::Approx(1.25));
  CHECK(q.covariance == doctest::Approx(0.5));
}

TEST_CASE("precision operator agrees with the dense inverse") {
  for (const ModelSpec& spec : {kAr1, kMa1, kArfima}) {
    const double lambda = spec.family == Family::ARFIMA0d0 ? 0.2 : 0.6;
    const std::size_t T = 25;
    const PrecisionOperator op(spec, lambda, T);
    const auto b = build_covariance(spec, lambda, T);
    double tr = 0.0;
    for (std::size_t i = 0; i < T; ++i) tr += b.inverse(i, i);
    CHECK(op.trace() == doctest::Approx(tr).epsilon(1e-10));
    std::vector<double> x(T), out(T), ref(T);
    for (std::size_t i = 0; i < T; ++i) x[i] = std::cos(0.3 * i);
    op.apply(x, out);
    linalg::multiply(b.inverse, x, ref);
    for (std::size_t i = 0; i < T; ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-9));
  }
}

}
