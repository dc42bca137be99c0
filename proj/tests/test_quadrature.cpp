#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/quadrature.hpp"
#include "levy/special.hpp"

using namespace levy;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.truncation_target() == doctest::Approx(1e-10));
  cfg.max_segments = 8;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = QuadratureConfig{};
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("adaptive Gauss-Kronrod on smooth and kinked integrands") {
  QuadratureConfig cfg;
  auto r = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 5.0, cfg);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-13));
  CHECK(r.converged);
  const double kink[] = {0.3};
  r = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, cfg, kink);
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));
  r = integrate_adaptive([](double x) { return x; }, 1.0, 0.0, cfg);
  CHECK(r.value == doctest::Approx(-0.5));
}

TEST_CASE("power-law fit recovers exponents") {
  const PowerFit fit = fit_power_law([](double x) { return -3.0 * std::pow(x, -1.7); }, 1.0, 10.0);
  CHECK(fit.valid());
  CHECK(fit.sign == -1);
  CHECK(fit.exponent == doctest::Approx(-1.7).epsilon(1e-12));
  CHECK(fit(2.0) == doctest::Approx(-3.0 * std::pow(2.0, -1.7)).epsilon(1e-12));
  CHECK_FALSE(fit_power_law([](double x) { return std::sin(10 * x); }, 1.0, 10.0).valid());
}

TEST_CASE("integrate_singular examples") {
  QuadratureConfig cfg;
  auto r = integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, -0.5, 1.0, cfg);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  r = integrate_singular([](double x) { return (1.0 - std::cos(x)) * std::exp(-x); }, 2.0, 50.0, cfg);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));

  // x = u^2 turns this into 2 u^2 / (1 + u^2)^2, whose antiderivative gives pi/4 - 1/2.
  r = integrate_singular([](double x) { return std::sqrt(x) / ((1 + x) * (1 + x)); }, 0.5, 1.0, cfg);
  CHECK(r.value == doctest::Approx(kPi / 4.0 - 0.5).epsilon(1e-12));

  r = integrate_singular([](double x) { return std::pow(x, -0.95); }, -0.95, 1.0, cfg);
  CHECK(r.value == doctest::Approx(20.0).epsilon(1e-9));

  CHECK_THROWS_AS(integrate_singular([](double x) { return 1.0 / x; }, -1.0, 1.0, cfg),
                  NonIntegrableMeasure);
}

TEST_CASE("semi-infinite integrals close the tail with a fitted power law") {
  QuadratureConfig cfg;
  auto r = integrate_semi_infinite([](double x) { return std::pow(x, -1.5); }, 1.0, cfg);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 1.0, cfg);
  CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  r = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 1.0, cfg, 1e4);
  CHECK(r.value == doctest::Approx(kPi / 4.0).epsilon(1e-9));
  CHECK(r.estimated);
  CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return 1.0 / x; }, 1.0, cfg), SlowDecay);
}

TEST_CASE("classical Fourier integrals with honest error estimates") {
  QuadratureConfig cfg;
  struct Case {
    RealFn g;
    Kernel kernel;
    double x;
    double expected;
  };
  const Case cases[] = {
      {[](double l) { return 1.0 / (l * l); }, Kernel::kOneMinusCos, 1.0, kPi / 2.0},
      {[](double l) { return 1.0 / l; }, Kernel::kSin, 1.0, kPi / 2.0},
      {[](double l) { return std::exp(-l); }, Kernel::kNone, 3.0, 1.0},
  };
  for (const auto& c : cases) {
    const auto r = integrate_fourier_tail(c.g, c.kernel, c.x, 0.0, cfg);
    CAPTURE(r.value);
    CAPTURE(r.error_estimate);
    CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-9));
    CHECK(std::abs(r.value - c.expected) <= 2.0 * r.error_estimate);
    CHECK(r.converged);
  }
}

TEST_CASE("Fourier integrals at other frequencies and signs") {
  QuadratureConfig cfg;
  // int_0^inf sin(l x)/l = sgn(x) pi/2
  auto r = integrate_fourier_tail([](double l) { return 1.0 / l; }, Kernel::kSin, -2.5, 0.0, cfg);
  CHECK(r.value == doctest::Approx(-kPi / 2.0).epsilon(1e-9));
  // int_0^inf cos(l x) / (1 + l^2) = (pi/2) e^-|x|
  r = integrate_fourier_tail([](double l) { return 1.0 / (1.0 + l * l); }, Kernel::kCos, 4.0, 0.0, cfg);
  CHECK(r.value == doctest::Approx(kPi / 2.0 * std::exp(-4.0)).epsilon(1e-8));
  // int_0^inf (1 - cos l x) l^-alpha = pi C_alpha |x|^(alpha - 1)
  for (double alpha : {1.1, 1.5, 1.9, 2.5, 2.9}) {
    CAPTURE(alpha);
    r = integrate_fourier_tail([alpha](double l) { return std::pow(l, -alpha); }, Kernel::kOneMinusCos,
                               1.0, 0.0, cfg);
    CHECK(std::abs(r.value / kPi - c_alpha(alpha)) < 1e-10);
  }
  // Starting past the origin.
  r = integrate_fourier_tail([](double l) { return 1.0 / (l * l); }, Kernel::kNone, 0.0, 2.0, cfg);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("doubling the segment budget never worsens the error") {
  const RealFn g = [](double l) { return 1.0 / (1.0 + l * l); };
  const double exact = kPi / 2.0 * std::exp(-3.0);
  double last = kInf;
  for (int segs : {16, 32, 64, 128}) {
    QuadratureConfig cfg;
    cfg.max_segments = segs;
    cfg.rel_tol = 1e-6;
    IntegralResult r;
    try {
      r = integrate_fourier_tail(g, Kernel::kCos, 3.0, 0.0, cfg);
    } catch (const QuadratureFailure&) {
      continue;
    }
    const double err = std::abs(r.value - exact);
    CHECK(err <= last * (1.0 + 1e-12) + 1e-15);
    last = err;
  }
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
  WynnEpsilon wynn;
  double s = 0.0;
  for (int k = 0; k < 15; ++k) {
    s += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1.0);
    wynn.push(s);
  }
  CHECK(wynn.estimate() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(wynn.error() < 1e-8);
}
