#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tscore/error.hpp"
#include "tscore/estimation.hpp"
#include "tscore/optimize.hpp"
#include "tscore/samplers.hpp"

using namespace tscore;

namespace {

const ModelSpec kAr1{Family::AR1, 1.0, 0.0};
const ModelSpec kMa1{Family::MA1, 1.0, 0.0};
const ModelSpec kArfima{Family::ARFIMA0d0, 1.0, 0.0};

SeriesPanel simulated(const ModelSpec& spec, double lambda, std::size_t n, std::size_t T, std::uint64_t seed) {
  RandomStream rs(seed);
  return simulate_panel(spec, {0.0, 1.0, lambda}, n, T, rs);
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("minimize_scalar examples") {
  auto q = optimize::minimize_scalar([](double x) { return (x - 0.3) * (x - 0.3); }, -0.99, 0.99, 1e-6);
  CHECK(std::abs(q.argmin - 0.3) <= 1e-6);
  CHECK(q.converged);
  CHECK(q.evaluations > 0);

  auto lin = optimize::minimize_scalar([](double x) { return x; }, 0.0, 1.0, 1e-6);
  CHECK(lin.argmin == 0.0);

  auto c = optimize::minimize_scalar([](double x) { return std::cos(x); }, 0.0, 6.0, 1e-6);
  CHECK(std::abs(c.argmin - std::numbers::pi) <= 1e-6);

  CHECK_THROWS_AS(optimize::minimize_scalar([](double) { return NAN; }, 0.0, 1.0), Error);
}

TEST_CASE("numeric derivative examples") {
  CHECK(std::abs(optimize::numeric_derivative([](double x) { return x * x; }, 3.0, 1) - 6.0) <= 1e-7);
  CHECK(std::abs(optimize::numeric_derivative([](double x) { return x * x * x; }, 2.0, 2) - 12.0) <= 1e-5);
  const auto s = optimize::derivative_stencil(0.5, 2);
  double wsum = 0.0;
  for (double w : s.weights) wsum += w;
  CHECK(std::abs(wsum) < 1e-6 * std::abs(s.weights.front()));
}

TEST_CASE("Nelder-Mead on a quadratic") {
  auto r = optimize::nelder_mead([](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + 3 * (x[1] + 2) * (x[1] + 2); },
                                 {0.0, 0.0}, {0.5, 0.5}, 1e-10, 2000);
  CHECK(r.converged);
  CHECK(r.argmin[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.argmin[1] == doctest::Approx(-2.0).epsilon(1e-4));
}

TEST_CASE("ARE examples") {
  CHECK(are(0.01, 0.01) == 1.0);
  CHECK(are(0.0041, 0.0150) == doctest::Approx(0.0747).epsilon(1e-3));
  CHECK(are(0.0087, 0.0122) == doctest::Approx(0.5085).epsilon(1e-3));
  CHECK_THROWS_AS(are(0.0, 0.1), Error);
}

TEST_CASE("panel fits recover the parameter") {
  struct Case {
    ModelSpec spec;
    double lambda;
    std::size_t n;
  };
  for (const Case& c : {Case{kAr1, 0.5, 200}, Case{kMa1, -0.5, 200}, Case{kArfima, 0.2, 100}}) {
    const auto panel = simulated(c.spec, c.lambda, c.n, 50, 31);
    for (EstimatorKind k : {EstimatorKind::MLE, EstimatorKind::PL, EstimatorKind::HT, EstimatorKind::HW}) {
      CAPTURE(to_string(k));
      CAPTURE(c.lambda);
      const auto r = fit(k, c.spec, panel, 1.0);
      CHECK(r.converged);
      CHECK(parameter_domain(c.spec).contains(r.estimate.lambda));
      CHECK(std::isfinite(r.sd));
      CHECK(r.sd > 0.0);
      CHECK(std::abs(r.estimate.lambda - c.lambda) < 5 * r.sd);
    }
  }
}

TEST_CASE("MLE sd agrees with the AR1 Fisher information") {
  // Per-series Fisher information for phi at T = 50 with mean and sigma2 known:
  // (T-1)/(1-phi^2) + 2 phi^2/(1-phi^2)^2, up to O(1) terms that are exact here.
  const double phi = 0.5;
  const std::size_t n = 200, T = 50;
  const ModelSpec spec = kAr1;
  auto info = [&](double l) {
    const auto b = build_covariance(spec, l, T);
    return -0.5 * b.logdet;
  };
  (void)info;
  const double fisher = (T - 1.0) / (1 - phi * phi) + 2 * phi * phi / ((1 - phi * phi) * (1 - phi * phi));
  const auto r = fit(EstimatorKind::MLE, spec, simulated(spec, phi, n, T, 9), 1.0);
  CHECK(r.sd == doctest::Approx(1.0 / std::sqrt(n * fisher)).epsilon(0.05));
}

TEST_CASE("sd scales as one over root n") {
  const auto big = simulated(kMa1, 0.3, 400, 30, 4);
  std::vector<double> half(big.values().begin(), big.values().begin() + 100 * 30);
  const auto small = SeriesPanel(100, 30, half);
  for (EstimatorKind k : {EstimatorKind::MLE, EstimatorKind::HT, EstimatorKind::PL}) {
    const auto a = fit(k, kMa1, big, 1.0);
    const auto b = fit(k, kMa1, small, 1.0);
    CHECK(b.sd / a.sd == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("profiled PL on AR1 equals the closed form") {
  const auto panel = simulated(kAr1, -0.4, 100, 20, 12);
  FitOptions o;
  o.profile_sigma2 = true;
  const auto r = fit(EstimatorKind::PL, kAr1, panel, 1.0, o);
  CHECK(r.estimate.lambda == pairwise_ar1_closed_form(panel));
  CHECK(r.sd > 0.0);
}

TEST_CASE("HW fit needs n >= T + 2") {
  const auto panel = simulated(kAr1, 0.2, 10, 9, 1);
  try {
    fit(EstimatorKind::HW, kAr1, panel, 1.0);
    FAIL("expected DegreesOfFreedom");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreesOfFreedom);
  }
}

TEST_CASE("Godambe info of the MLE is information-balanced") {
  const auto panel = simulated(kMa1, 0.4, 300, 30, 8);
  const auto r = fit(EstimatorKind::MLE, kMa1, panel, 1.0);
  const auto g = godambe_sd(EstimatorKind::MLE, kMa1, panel, 1.0, r.estimate.lambda);
  CHECK(g.info.J == doctest::Approx(g.info.K).epsilon(0.2));
  CHECK(g.sd == doctest::Approx(r.sd));
}

TEST_CASE("fits are deterministic") {
  const auto panel = simulated(kArfima, 0.1, 100, 50, 3);
  const auto a = fit(EstimatorKind::HW, kArfima, panel, 1.0);
  const auto b = fit(EstimatorKind::HW, kArfima, panel, 1.0);
  CHECK(a.estimate.lambda == b.estimate.lambda);
  CHECK(a.sd == b.sd);
}

TEST_CASE("single-series joint fit") {
  RandomStream rs(42);
  const auto y = simulate_ar1({0.0, 1.0, 0.5}, 2000, rs);
  const auto r = fit_single_series(kAr1, y);
  CHECK(r.kind == EstimatorKind::H_single);
  CHECK(r.converged);
  CHECK(std::abs(r.estimate.sigma2 - 1.0) <= 0.05);
  CHECK(std::abs(r.estimate.lambda - 0.5) <= 0.08);
  CHECK(r.sd > 0.0);
  CHECK(r.sd < 0.2);
}

TEST_CASE("numeric gradient of the total score matches a secant slope") {
  const auto panel = simulated(kMa1, 0.3, 50, 20, 17);
  auto f = [&](double l) { return hyvarinen_total(l, panel, 1.0, kMa1); };
  const double g = optimize::numeric_derivative(f, 0.3, 1);
  const double secant = (f(0.3 + 1e-4) - f(0.3 - 1e-4)) / 2e-4;
  CHECK(std::abs(g - secant) <= 1e-4 * std::abs(secant));
}

TEST_CASE("zero-dependence panel") {
  const auto panel = simulated(kAr1, 0.0, 200, 50, 23);
  for (EstimatorKind k : {EstimatorKind::MLE, EstimatorKind::PL, EstimatorKind::HT, EstimatorKind::HW}) {
    CAPTURE(to_string(k));
    const auto r = fit(k, kAr1, panel, 1.0);
    CHECK(std::abs(r.estimate.lambda) <= 3 * r.sd);
  }
}

TEST_CASE("sandwich sd magnitudes at the reference design") {
  const auto ma = fit(EstimatorKind::HT, kMa1, simulated(kMa1, 0.5, 200, 50, 51), 1.0);
  CHECK(std::abs(ma.sd - 0.0101) <= 0.0015);
  const auto ar = fit(EstimatorKind::HT, kAr1, simulated(kAr1, 0.9, 200, 50, 52), 1.0);
  CHECK(std::abs(ar.sd - 0.0150) <= 0.002);
}

TEST_CASE("estimates fall within 4 sd of the truth in at least 95% of replicates") {
  struct Case {
    ModelSpec spec;
    double lambda;
  };
  FitOptions o;
  o.bootstrap_replicates = 50;
  for (const Case& c : {Case{kAr1, 0.6}, Case{kMa1, -0.4}, Case{kArfima, 0.15}}) {
    for (EstimatorKind k : {EstimatorKind::MLE, EstimatorKind::PL, EstimatorKind::HT, EstimatorKind::HW}) {
      CAPTURE(to_string(c.spec.family));
      CAPTURE(to_string(k));
      int inside = 0;
      for (std::uint64_t r = 0; r < 200; ++r) {
        RandomStream rs(900, {static_cast<std::uint64_t>(c.spec.family), r});
        const auto panel = simulate_panel(c.spec, {0.0, 1.0, c.lambda}, 40, 10, rs);
        o.bootstrap_seed = r;
        const auto f = fit(k, c.spec, panel, 1.0, o);
        inside += std::abs(f.estimate.lambda - c.lambda) <= 4 * f.sd;
      }
      CHECK(inside >= 190);
    }
  }
}

TEST_CASE("single-series fits on white noise") {
  RandomStream rs(61);
  std::vector<double> y(3000);
  for (auto& v : y) v = 1.7 * rs.normal();
  double v = 0.0;
  for (double x : y) v += x * x;
  v /= y.size();
  FitOptions o;
  o.compute_sd = false;
  const ModelSpec free{Family::AR1, std::nullopt, 0.0};
  const auto r = fit_single_series(free, y, o);
  CHECK(r.estimate.sigma2 == doctest::Approx(v).epsilon(0.05));
  CHECK(std::abs(r.estimate.lambda) <= 3 / std::sqrt(3000.0));
}

TEST_CASE("single-series fits are scale equivariant") {
  RandomStream rs(62);
  auto y = simulate_ar1({0.0, 1.0, 0.5}, 500, rs);
  FitOptions o;
  o.compute_sd = false;
  const ModelSpec free{Family::AR1, std::nullopt, 0.0};
  const auto a = fit_single_series(free, y, o);
  for (auto& v : y) v *= 2.0;
  const auto b = fit_single_series(free, y, o);
  CHECK(b.estimate.sigma2 == doctest::Approx(4 * a.estimate.sigma2).epsilon(1e-4));
  CHECK(std::abs(b.estimate.lambda - a.estimate.lambda) <= 1e-4);
}

TEST_CASE("single-series sd shrinks as one over root T") {
  FitOptions o;
  o.compute_sd = false;
  const ModelSpec free{Family::AR1, std::nullopt, 0.0};
  std::vector<double> scaled;
  for (std::size_t T : {250u, 1000u, 4000u}) {
    std::vector<double> est;
    for (std::uint64_t r = 0; r < 100; ++r) {
      RandomStream rs(63, {T, r});
      est.push_back(fit_single_series(free, simulate_ar1({0.0, 1.0, 0.5}, T, rs), o).estimate.lambda);
    }
    double m = 0.0, s = 0.0;
    for (double e : est) m += e / est.size();
    for (double e : est) s += (e - m) * (e - m) / (est.size() - 1);
    scaled.push_back(std::sqrt(s) * std::sqrt(static_cast<double>(T)));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo <= 1.25);
}

}
