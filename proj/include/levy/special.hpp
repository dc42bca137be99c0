#pragma once

namespace levy {

/// Gamma function on (0, 170]; Lanczos approximation (g = 7, 9 terms) with
/// reflection below 1/2. Relative error is below 1e-13 on that range.
/// Throws DomainError for alpha <= 0, alpha > 170 or non-finite input.
double gamma_fn(double alpha);

/// C_alpha = (1/pi) int_0^inf (1 - cos x) x^-alpha dx
///         = 1 / (2 Gamma(alpha) sin(pi (alpha - 1) / 2)),   1 < alpha < 3.
double c_alpha(double alpha);

/// (1/pi) int_0^inf sin(x) x^-alpha dx = C_alpha tan(pi (alpha - 1) / 2),
/// valid for 1 < alpha < 2.
double sine_moment(double alpha);

/// (1/pi) int_0^inf (x - sin x) x^-(alpha+1) dx = C_alpha / alpha,
/// valid for 1 < alpha < 3.
double xsin_moment(double alpha);

}  // namespace levy
