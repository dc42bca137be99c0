#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levy/quadrature.hpp"

namespace levy {

/// No jumps.
struct ZeroMeasure {};

/// K+ x^(-alpha-1) on x > 0 and K- |x|^(-alpha-1) on x < 0.
struct StableDensity {
  double k_plus = 1.0;
  double k_minus = 1.0;
  double alpha = 1.5;
};

/// K+- |x|^(-alpha-1) (1 + |x|)^(alpha - beta_tail): stable-like of index alpha
/// at the origin, tail index beta_tail at infinity.
struct TemperedPolynomial {
  double k_plus = 1.0;
  double k_minus = 1.0;
  double alpha = 1.5;
  double beta_tail = 1.0;
};

/// One-sided exp(-x / scale) on x > 0.
struct ExponentialDensity {
  double scale = 1.0;
};

/// coef x^power exp(-decay x) on lower <= x < upper.
struct PowerTerm {
  double coef = 1.0;
  double power = 0.0;
  double lower = 0.0;
  double upper = kInf;
  double decay = 0.0;

  double operator()(double x) const;
};

/// Regular-variation hint for one end of a custom density: index plus
/// constant slowly varying factors on the two half-lines.
struct SideHint {
  double index = 0.0;
  double k_plus = 0.0;
  double k_minus = 0.0;
};

/// xi+(x) and xi-(x) for x > 0 as sums of power terms, optionally plus an
/// arbitrary function (not serializable).
struct CustomDensity {
  std::vector<PowerTerm> plus;
  std::vector<PowerTerm> minus;
  RealFn extra_plus;
  RealFn extra_minus;
  /// alpha and K+- at 0.
  std::optional<SideHint> origin_hint;
  /// beta_tail and K+- at infinity.
  std::optional<SideHint> tail_hint;
};

using MeasureSpec =
    std::variant<ZeroMeasure, StableDensity, TemperedPolynomial, ExponentialDensity, CustomDensity>;

struct LevyProcessSpec {
  double a = 0.0;
  double b = 0.0;
  MeasureSpec measure = ZeroMeasure{};
};

/// Density of the Levy measure at side * y, y > 0 (side = +1 or -1).
double density(const MeasureSpec& m, int side, double y);

/// Whether the measure has no mass on the given side.
bool side_is_empty(const MeasureSpec& m, int side);

/// int_{from}^inf w(y) xi_side(y) dy, where w(y) ~ y^weight_order at 0.
/// Throws NonIntegrableMeasure if the integral diverges.
IntegralResult integrate_against_measure(const MeasureSpec& m, int side, const RealFn& w,
                                         double weight_order, double from,
                                         const QuadratureConfig& cfg);

/// Drift making the stable process strictly stable (alpha > 1):
/// b = (K+ - K-) / (alpha - 1), i.e. omega has no linear part.
double strictly_stable_drift(double k_plus, double k_minus, double alpha);

struct StableCoefficients {
  double c_theta = 0.0;
  double c_omega = 0.0;
};

/// theta = c_theta l^alpha, omega = c_omega l^alpha for the strictly stable
/// process with density K+- |x|^(-alpha-1).
StableCoefficients stable_coefficients(double k_plus, double k_minus, double alpha);

struct ClosedFormStable {
  double c_theta = 1.0;
  double c_omega = 0.0;
  double alpha = 1.5;
};

struct ClosedFormBrownian {
  double a = 0.5;
  double b = 0.0;
};

struct NumericFromMeasure {
  QuadratureConfig quad = default_quad();

  static QuadratureConfig default_quad() {
    QuadratureConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-14;
    return c;
  }
};

using EvaluatorMode = std::variant<ClosedFormStable, ClosedFormBrownian, NumericFromMeasure>;

/// Largest |lambda| accepted in numeric mode; beyond it 1 - cos(lambda x)
/// has no resolvable structure left.
inline constexpr double kNumericLambdaLimit = 1e6;

/// theta(lambda) and omega(lambda) together with their error estimates.
struct ExponentValue {
  IntegralResult theta;
  IntegralResult omega;

  std::complex<double> psi() const { return {theta.value, omega.value}; }
};

/// Immutable strategy for theta, omega and Psi of one process.
class ExponentEvaluator {
 public:
  ExponentEvaluator(LevyProcessSpec spec, EvaluatorMode mode);

  static ExponentEvaluator brownian(double a, double b);
  /// Builds the matching strictly stable spec; c_omega must correspond to a
  /// skewness in [-1, 1].
  static ExponentEvaluator stable(double c_theta, double c_omega, double alpha);
  static ExponentEvaluator numeric(LevyProcessSpec spec, QuadratureConfig quad = NumericFromMeasure::default_quad());
  /// Closed form where one exists for the spec, numeric otherwise.
  static ExponentEvaluator automatic(LevyProcessSpec spec, QuadratureConfig quad = NumericFromMeasure::default_quad());

  const LevyProcessSpec& spec() const { return spec_; }
  const EvaluatorMode& mode() const { return mode_; }
  bool is_numeric() const { return std::holds_alternative<NumericFromMeasure>(mode_); }
  /// Largest lambda at which Psi may be sampled.
  double frontier() const { return is_numeric() ? kNumericLambdaLimit : kInf; }
  /// Relative noise level of a single evaluation.
  double relative_noise() const;
  std::string describe() const;

  ExponentValue evaluate(double lambda) const;

 private:
  LevyProcessSpec spec_;
  EvaluatorMode mode_;
};

double eval_theta(const ExponentEvaluator& ev, double lambda);
double eval_omega(const ExponentEvaluator& ev, double lambda);
std::complex<double> eval_psi(const ExponentEvaluator& ev, double lambda);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  /// Fitted local exponent of xi+ + xi- on [1e-6, 1e-3]; NaN without mass there.
  double origin_exponent = std::numeric_limits<double>::quiet_NaN();
  /// Fitted local exponent on [1e4, 1e6]; NaN when the density vanishes there.
  double tail_exponent = std::numeric_limits<double>::quiet_NaN();

  bool passed() const;
};

ValidationReport validate_spec(const LevyProcessSpec& spec);

/// Throws SpecError listing the failed checks.
void require_valid(const LevyProcessSpec& spec);

}  // namespace levy
