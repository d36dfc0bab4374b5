#include <doctest.h>

#include <cmath>
#include <random>

#include "tscore/error.hpp"
#include "tscore/kernels.hpp"
#include "tscore/linalg.hpp"
#include "tscore/models.hpp"

using namespace tscore;
using namespace tscore::linalg;

namespace {

SymMatrix sym2(double a, double b, double c) {
  SymMatrix m(2);
  m.set(0, 0, a);
  m.set(0, 1, b);
  m.set(1, 1, c);
  return m;
}

SymMatrix random_spd(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Matrix a(n, n);
  for (auto& v : a.values()) v = z(rng);
  Matrix g = multiply(a, a.transposed());
  for (std::size_t i = 0; i < n; ++i) g(i, i) += n;
  return SymMatrix::from_upper(g);
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("cholesky examples") {
  const auto id = cholesky(SymMatrix::identity(3));
  CHECK(max_abs_diff(id.lower, Matrix::identity(3)) == 0.0);

  const auto f = cholesky(sym2(4, 2, 5));
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
  CHECK(f.lower(0, 1) == 0.0);
  CHECK(f.lower(1, 0) == doctest::Approx(1.0));
  CHECK(f.lower(1, 1) == doctest::Approx(2.0));

  try {
    cholesky(sym2(1, 2, 1));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("from_dense rejects asymmetric input") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(SymMatrix::from_dense(m), Error);
  m(1, 0) = 1.0;
  CHECK(SymMatrix::from_dense(m)(1, 0) == 1.0);
}

TEST_CASE("invert_spd examples") {
  const auto inv4 = invert_spd(SymMatrix::identity(4));
  CHECK(max_abs_diff(inv4.dense(), Matrix::identity(4)) == 0.0);

  const ModelSpec ar1{Family::AR1, 1.0, 0.0};
  const auto inv2 = invert_spd(build_covariance(ar1, 0.5, 2).gamma);
  CHECK(inv2(0, 0) == doctest::Approx(1.0));
  CHECK(inv2(0, 1) == doctest::Approx(-0.5));
  CHECK(inv2(1, 1) == doctest::Approx(1.0));

  const auto inv5 = invert_spd(build_covariance(ar1, 0.5, 5).gamma);
  const double diag[] = {1, 1.25, 1.25, 1.25, 1};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(inv5(i, i) == doctest::Approx(diag[i]).epsilon(1e-12));
    for (std::size_t j = i + 1; j < 5; ++j)
      CHECK(inv5(i, j) == doctest::Approx(j == i + 1 ? -0.5 : 0.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("inverse times matrix is identity on random SPD matrices") {
  for (std::size_t n : {1u, 2u, 7u, 33u}) {
    const auto m = random_spd(n, 3 + n);
    const auto inv = invert_spd(m);
    CHECK(max_abs_diff(multiply(m.dense(), inv.dense()), Matrix::identity(n)) < 1e-10);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(inv(i, j) == inv(j, i));
  }
}

TEST_CASE("solve agrees with the inverse") {
  const auto m = random_spd(9, 42);
  const auto f = cholesky(m);
  std::vector<double> b(9);
  for (std::size_t i = 0; i < 9; ++i) b[i] = std::sin(1.0 + i);
  const auto x = solve(f, b);
  std::vector<double> back(9);
  multiply(m, x, back);
  for (std::size_t i = 0; i < 9; ++i) CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK(quadratic_form(invert_from_factor(f), b) == doctest::Approx(kernels::dot(b, x)).epsilon(1e-12));
}

TEST_CASE("log_det examples") {
  CHECK(log_det(cholesky(SymMatrix::identity(3))) == 0.0);
  CHECK(log_det(cholesky(sym2(4, 0, 4))) == doctest::Approx(std::log(16.0)));
  const ModelSpec ar1{Family::AR1, 1.0, 0.0};
  CHECK(log_det(cholesky(build_covariance(ar1, 0.5, 2).gamma)) == doctest::Approx(std::log(4.0 / 3.0)));
}

TEST_CASE("analytic AR(1) precision examples") {
  CHECK(max_abs_diff(ar1_precision_analytic(0.0, 3).dense(), Matrix::identity(3)) == 0.0);
  const auto p2 = ar1_precision_analytic(0.5, 2);
  CHECK(p2(0, 0) == 1.0);
  CHECK(p2(0, 1) == -0.5);
  CHECK(p2(1, 1) == 1.0);
  const auto p4 = ar1_precision_analytic(0.9, 4);
  CHECK(p4(0, 0) == 1.0);
  CHECK(p4(1, 1) == doctest::Approx(1.81));
  CHECK(p4(2, 2) == doctest::Approx(1.81));
  CHECK(p4(3, 3) == 1.0);
  CHECK(p4(0, 1) == -0.9);
  CHECK(p4(0, 2) == 0.0);
  CHECK_THROWS_AS(ar1_precision_analytic(1.0, 3), Error);
}

TEST_CASE("dense inversion matches the analytic AR(1) precision") {
  const ModelSpec ar1{Family::AR1, 1.0, 0.0};
  for (double phi : {-0.95, -0.5, 0.0, 0.3, 0.9, 0.99})
    for (std::size_t T : {2u, 10u, 50u}) {
      CAPTURE(phi);
      CAPTURE(T);
      const auto b = build_covariance(ar1, phi, T);
      CHECK(max_abs_diff(b.inverse.dense(), ar1_precision_analytic(phi, T).dense()) < 1e-8);
    }
}

TEST_CASE("triangular helpers") {
  const auto m = random_spd(6, 5);
  const auto f = cholesky(m);
  CHECK(max_abs_diff(lower_gram(f.lower).dense(), m.dense()) < 1e-12);
  const auto linv = lower_triangular_inverse(f.lower);
  CHECK(max_abs_diff(multiply_lower(linv, f.lower), Matrix::identity(6)) < 1e-12);
  // (L L^T)^{-1} = L^{-T} L^{-1}
  CHECK(max_abs_diff(lower_gram_transposed(linv).dense(), invert_spd(m).dense()) < 1e-12);
}

TEST_CASE("linear algebra results do not depend on the kernel ISA") {
  if (!kernels::available(kernels::Isa::Avx2)) return;
  const auto before = kernels::active().isa;
  const auto m = random_spd(40, 17);
  kernels::select(kernels::Isa::Scalar);
  const auto a = invert_spd(m);
  kernels::select(kernels::Isa::Avx2);
  const auto b = invert_spd(m);
  kernels::select(before);
  CHECK(max_abs_diff(a.dense(), b.dense()) < 1e-12);
}

}
