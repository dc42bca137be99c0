#pragma once

#include <ostream>
#include <vector>

#include "levy/process.hpp"
#include "levy/quadrature.hpp"

namespace levy {

/// A resolvent-type quantity with its quadrature diagnostics.
struct ResolventValue {
  double value = 0.0;
  double error_estimate = 0.0;
  double truncation_point = 0.0;
  int segments = 0;
  /// Part of the value rests on a fitted decay model.
  bool estimated = false;
  /// A slightly negative result (within the error estimate) was set to 0.
  bool clipped = false;
};

/// r_q(x) = (1/pi) int_0^inf Re(e^{-i lambda x} / (q + Psi)) d lambda, q > 0.
/// Throws AssumptionViolation('A') when 1/|q + Psi| does not decay fast enough.
ResolventValue eval_r_q(const ExponentEvaluator& ev, double q, double x, const QuadratureConfig& cfg = {});

/// h_q(x) = r_q(0) - r_q(-x), evaluated as one integral.
ResolventValue eval_h_q(const ExponentEvaluator& ev, double q, double x, const QuadratureConfig& cfg = {});

/// Renormalized zero resolvent h(x) = (1/pi) int_0^inf Re((1 - e^{i lambda x}) / Psi) d lambda.
/// Requires the (T) probe to pass; throws AssumptionViolation('T') otherwise.
ResolventValue eval_h(const ExponentEvaluator& ev, double x, const QuadratureConfig& cfg = {});

/// E_x[exp(-q T_0)] = r_q(-x) / r_q(0). Throws DegenerateResolvent when r_q(0)
/// is not resolved from zero.
ResolventValue hitting_laplace_ratio(const ExponentEvaluator& ev, double q, double x,
                                     const QuadratureConfig& cfg = {});

enum class ResolventQuantity { kRq, kHq };

/// One grid point. For kHq, q = 0 selects h.
struct GridPoint {
  double q = 0.0;
  double x = 0.0;
};

/// Worker count from LEVY_RESOLVENT_THREADS, else the hardware concurrency.
unsigned resolvent_threads();

/// Evaluates every point, possibly concurrently; results follow input order.
/// The first exception thrown by any point is rethrown.
std::vector<ResolventValue> evaluate_grid(const ExponentEvaluator& ev, ResolventQuantity what,
                                          const std::vector<GridPoint>& points, const QuadratureConfig& cfg = {},
                                          unsigned threads = 0);

/// Columns q, x, value, error_estimate, truncation_point, segments.
void write_grid_csv(std::ostream& out, const std::vector<GridPoint>& points,
                    const std::vector<ResolventValue>& values);

/// printf-style "%.17g".
std::string format_double(double v);

}  // namespace levy
