#pragma once
// Test-only reference computations, independent of the library's integrators.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, long n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// (1/pi) int_0^inf (1 - cos x) x^-alpha dx by brute force: Taylor series on
/// [0, 1], Simpson on [1, 2 pi N], integration-by-parts expansion beyond.
inline double c_alpha_brute_force(double alpha) {
  double head = 0.0;
  double fact = 1.0;
  for (int k = 1; k < 20; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    head += sign / (fact * (2.0 * k + 1.0 - alpha));
  }
  const double big = 2.0 * std::numbers::pi * 400.0;
  const double body = simpson([alpha](double x) { return (1.0 - std::cos(x)) * std::pow(x, -alpha); },
                              1.0, big, 4000000);
  // int_X^inf x^-alpha = X^(1-alpha)/(alpha-1); int_X^inf cos(x) x^-alpha with
  // sin X = 0, cos X = 1 expands as alpha X^(-alpha-1) - alpha(alpha+1)(alpha+2) X^(-alpha-3).
  const double mean_tail = std::pow(big, 1.0 - alpha) / (alpha - 1.0);
  const double cos_tail = alpha * std::pow(big, -alpha - 1.0) -
                          alpha * (alpha + 1.0) * (alpha + 2.0) * std::pow(big, -alpha - 3.0);
  return (head + body + mean_tail - cos_tail) / std::numbers::pi;
}

/// Brownian q-resolvent density for Psi(l) = a l^2 + i b l with b = 0.
inline double brownian_resolvent(double a, double q, double x) {
  const double k = std::sqrt(q / a);
  return std::exp(-k * std::abs(x)) / (2.0 * a * k);
}

}  // namespace oracle
