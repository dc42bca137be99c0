#include "levy/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "levy/errors.hpp"

namespace levy {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Valid for 1/2 <= x <= ~10. The series error grows roughly linearly with x,
// so larger arguments go through the recurrence instead.
double lanczos_gamma(double x) {
  const double z = x - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

double reduced_gamma(double x) {
  if (x <= 10.0) return lanczos_gamma(x);
  const double steps = std::ceil(x - 10.0);
  double base = x - steps;
  double product = 1.0;
  for (int i = 0; i < static_cast<int>(steps); ++i) {
    product *= base;
    base += 1.0;
  }
  return product * lanczos_gamma(x - steps);
}

void require_open_interval(double alpha, double lo, double hi, const char* name) {
  if (!(alpha > lo && alpha < hi)) {
    throw DomainError(std::string(name) + ": alpha = " + std::to_string(alpha) +
                      " outside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

}  // namespace

double gamma_fn(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(alpha));
  }
  if (alpha > 170.0) {
    throw DomainError("gamma_fn: argument " + std::to_string(alpha) + " overflows (limit 170)");
  }
  if (alpha < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::numbers::pi / (std::sin(std::numbers::pi * alpha) * reduced_gamma(1.0 - alpha));
  }
  return reduced_gamma(alpha);
}

double c_alpha(double alpha) {
  require_open_interval(alpha, 1.0, 3.0, "c_alpha");
  return 1.0 / (2.0 * gamma_fn(alpha) * std::sin(0.5 * std::numbers::pi * (alpha - 1.0)));
}

double sine_moment(double alpha) {
  require_open_interval(alpha, 1.0, 2.0, "sine_moment");
  // C_alpha tan(phi) with phi = pi (alpha - 1) / 2 simplifies to 1 / (2 Gamma cos(phi)),
  // which stays finite as alpha -> 1.
  return 1.0 / (2.0 * gamma_fn(alpha) * std::cos(0.5 * std::numbers::pi * (alpha - 1.0)));
}

double xsin_moment(double alpha) {
  require_open_interval(alpha, 1.0, 3.0, "xsin_moment");
  return c_alpha(alpha) / alpha;
}

}  // namespace levy
