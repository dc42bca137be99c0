#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace levy {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances and budgets shared by every integrator in the library.
struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Cap on adaptive subintervals per integral and on half-period segments
  /// per oscillatory tail.
  int max_segments = 10000;
  /// Target for the extrapolated remainder of an oscillatory tail, relative to
  /// the running value. Defaults to rel_tol / 10 when unset.
  std::optional<double> truncation_budget;
  /// Minimum number of accelerated segments before a tail may be declared
  /// converged; the epsilon table spans 2 * order + 1 partial sums.
  int acceleration_order = 8;

  double truncation_target() const { return truncation_budget.value_or(rel_tol / 10.0); }

  /// Throws DomainError unless rel_tol, abs_tol > 0 and max_segments >= 16.
  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int segments_used = 0;
  /// Largest abscissa actually sampled (or the model frontier for fitted tails).
  double truncation_point = 0.0;
  bool converged = true;
  /// Share of error_estimate due to floating-point rounding in the sums; no
  /// refinement removes it.
  double rounding_floor = 0.0;
  /// Set when part of the value comes from a fitted decay model rather than
  /// from sampling the integrand.
  bool estimated = false;
};

/// a + sign * b, with errors and budgets accumulated.
IntegralResult combine(const IntegralResult& a, const IntegralResult& b, double sign = 1.0);

/// Convergence target max(abs_tol, rel_tol |value|, rounding floor).
double tolerance_target(const QuadratureConfig& cfg, double value, double l1_norm = 0.0);

/// error_estimate <= max(tolerance_target, 2 * rounding_floor).
bool within_tolerance(const IntegralResult& r, const QuadratureConfig& cfg, double l1_norm = 0.0);

/// Least-squares slope and intercept of log|f| against log x.
struct PowerFit {
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double log_coefficient = std::numeric_limits<double>::quiet_NaN();
  /// Largest absolute residual of the log-log regression.
  double max_residual = std::numeric_limits<double>::quiet_NaN();
  /// +1 / -1 when every sample has that sign, 0 if mixed or zero.
  int sign = 0;

  bool valid() const { return sign != 0 && exponent == exponent; }
  double operator()(double x) const;
};

/// Fits f(x) ~ C x^p on `samples` log-spaced points in [lo, hi].
PowerFit fit_power_law(const RealFn& f, double lo, double hi, int samples = 16);

/// Adaptive 21-point Gauss-Kronrod on [a, b] with optional interior
/// breakpoints. Never throws on a missed tolerance; check `converged`.
IntegralResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureConfig& cfg,
                                  std::span<const double> breakpoints = {});

/// Same, with geometric breakpoints at every decade between a > 0 and b.
IntegralResult integrate_log_spaced(const RealFn& f, double a, double b, const QuadratureConfig& cfg);

/// int_0^B f, where f(x) x^-origin_order stays bounded near 0. The power
/// stretch x = B t^m with m = 2 / (1 + origin_order) makes the transformed
/// integrand vanish linearly at t = 0.
/// Throws NonIntegrableMeasure when origin_order <= -1 and QuadratureFailure
/// when the tolerance is missed.
IntegralResult integrate_singular(const RealFn& f, double origin_order, double upper,
                                  const QuadratureConfig& cfg);

/// int_a^inf f for a > 0 and f eventually ~ C x^-p. Samples f up to
/// min(frontier, 1e12 a) and closes the remainder with the fitted power law.
/// Throws SlowDecay when the fitted p <= 1.
IntegralResult integrate_semi_infinite(const RealFn& f, double a, const QuadratureConfig& cfg,
                                       double frontier = kInf);

enum class Kernel { kNone, kCos, kSin, kOneMinusCos };

struct FourierOptions {
  /// Largest lambda at which g may be sampled; beyond it g is replaced by the
  /// power law fitted on [frontier / 10, frontier].
  double frontier = kInf;
  /// Known origin exponent of K(lambda x) g(lambda); fitted when absent.
  std::optional<double> origin_order;
};

/// int_{lambda0}^inf K(lambda x) g(lambda) d lambda for the kernels
/// cos, sin, 1 - cos and 1 (kNone). The oscillatory part is cut at the zeros
/// of the kernel, integrated per half period and summed with Wynn's epsilon
/// algorithm. Throws SlowDecay, NonIntegrableMeasure, or QuadratureFailure when
/// the sampled part misses the tolerance; the error of the fitted model past the
/// frontier only clears `converged`.
IntegralResult integrate_fourier_tail(const RealFn& g, Kernel kernel, double x, double lambda0,
                                      const QuadratureConfig& cfg, const FourierOptions& opts = {});

/// int_a^inf K(w y) f(y) dy for K in {cos, sin}, w > 0, a >= 0 and f smooth
/// on [a, inf). Does not throw on a missed tolerance.
IntegralResult integrate_oscillatory(const RealFn& f, Kernel kernel, double w, double a,
                                     const QuadratureConfig& cfg, double frontier = kInf);

/// Wynn epsilon extrapolation of a sequence of partial sums.
class WynnEpsilon {
 public:
  explicit WynnEpsilon(std::size_t window = 21) : window_(window) {}

  /// Adds the next partial sum; returns the current extrapolated limit.
  double push(double partial_sum);
  double estimate() const { return estimate_; }
  /// Spread of the last three extrapolations (infinite until three exist).
  double error() const { return error_; }
  std::size_t size() const { return count_; }

 private:
  std::size_t window_;
  std::size_t count_ = 0;
  std::vector<double> sums_;
  std::vector<double> history_;
  double estimate_ = 0.0;
  double error_ = kInf;
};

}  // namespace levy
