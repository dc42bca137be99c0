#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "levy/probes.hpp"
#include "levy/process.hpp"
#include "levy/resolvent.hpp"

namespace levy {

enum class Location { kAtZero, kAtInfinity };

struct PotterDiagnostic {
  bool ok = true;
  /// Largest L(y)/L(z) / (2 max((y/z)^d, (z/y)^d)) over the sampled pairs; ok iff <= 1.
  double worst = 0.0;
  std::string detail;
};

/// Positive function with L(kx)/L(x) -> 1 at its location.
class SlowlyVaryingFn {
 public:
  SlowlyVaryingFn(RealFn eval, Location location, double potter_delta = 0.25);
  static SlowlyVaryingFn constant(double c, Location location);

  double operator()(double x) const;
  Location location() const { return location_; }
  double potter_delta() const { return delta_; }
  /// Soft check of the Potter-type bound on decades 1e-8..1e-4 (at 0) or
  /// 1e4..1e8 (at infinity).
  PotterDiagnostic potter_check() const;

 private:
  RealFn eval_;
  Location location_;
  double delta_;
};

/// theta ~ c_theta l^index L(l), omega ~ c_omega l^index L(l).
struct RegularVariationSpec {
  double index = 1.5;
  double c_theta = 1.0;
  double c_omega = 0.0;
  SlowlyVaryingFn L = SlowlyVaryingFn::constant(1.0, Location::kAtInfinity);
};

struct CoefficientPair {
  double c_plus = 0.0;
  double c_minus = 0.0;

  double side(int s) const { return s > 0 ? c_plus : c_minus; }
};

/// C_a / (c_theta^2 + c_omega^2) (c_theta +- c_omega cot(pi a / 2)), a = rv.index in (1, 2).
CoefficientPair coeff_c_pm(const RegularVariationSpec& rv);

/// Same shape, for laws at 0 feeding the behaviour of h at infinity.
CoefficientPair coeff_c_pm_zero(const RegularVariationSpec& rv0);

/// C_a / sqrt(c_theta^2 + c_omega^2): the common magnitude of the pair in the symmetric case.
double coefficient_scale(const RegularVariationSpec& rv);

/// lim K-/K+ at the functions' location from five geometric samples
/// (1e-4..1e-8 at 0, 1e4..1e8 at infinity). Infinite when the ratio exceeds
/// 1e6 and keeps growing. Throws UnstableLimit on more than 5% spread.
double estimate_limit_ratio(const SlowlyVaryingFn& k_plus, const SlowlyVaryingFn& k_minus);

/// Exponent laws at infinity induced by a density x^(-alpha-1) K+-(x) near 0.
RegularVariationSpec density_to_exponent_rv(double alpha, const SlowlyVaryingFn& k_plus,
                                            const SlowlyVaryingFn& k_minus);

/// 1/(2a) +- (1/pi) int_0^inf Im(lambda / Psi) d lambda; requires the (Z) probe.
CoefficientPair gaussian_coeff_c_pm(const ExponentEvaluator& ev, const QuadratureConfig& cfg = {});

enum class SmallLambdaCase {
  /// Tail xi+-(x) ~ K+-(x) x^(-beta-1) at infinity with beta in (0, 2).
  kRegularlyVaryingTail,
  /// int x^2 nu(dx) < inf.
  kSecondMoment,
  /// int_{|x| >= 1} |x| nu(dx) < inf.
  kFirstMomentTail,
};

/// Tail description at infinity: beta and slowly varying K+- there.
struct TailInfo {
  double beta_tail = 1.0;
  SlowlyVaryingFn k_plus = SlowlyVaryingFn::constant(1.0, Location::kAtInfinity);
  SlowlyVaryingFn k_minus = SlowlyVaryingFn::constant(1.0, Location::kAtInfinity);
};

/// f(l) ~ coefficient l^index L(l) as l -> 0.
struct ExponentLaw {
  double index = 0.0;
  double coefficient = 0.0;
  SlowlyVaryingFn L = SlowlyVaryingFn::constant(1.0, Location::kAtZero);
};

struct ZeroLaws {
  std::optional<ExponentLaw> theta;
  std::optional<ExponentLaw> omega;
  /// lim K-/K+ at infinity when a tail was involved.
  double k0 = std::numeric_limits<double>::quiet_NaN();
  std::string note;

  /// theta and omega share one index and L: the input of coeff_c_pm_zero.
  std::optional<RegularVariationSpec> joint() const;
};

/// Tail description implied by the spec itself (tempered family, or a custom
/// density with a tailHint).
std::optional<TailInfo> tail_info_of(const LevyProcessSpec& spec);

/// Origin description (alpha, K+- at 0) implied by the spec, when available.
std::optional<RegularVariationSpec> origin_rv_of(const LevyProcessSpec& spec);

/// Small-lambda laws of theta and omega under an explicitly declared case.
/// Throws CaseMismatch when numeric checks contradict the case.
ZeroLaws exponent_rv_at_zero(const LevyProcessSpec& spec, SmallLambdaCase which,
                             const std::optional<TailInfo>& tail = std::nullopt, const QuadratureConfig& cfg = {});

struct AsymptoticPoint {
  double x = 0.0;
  double h = 0.0;
  /// Normalized estimate whose limit is the predicted coefficient.
  double c_hat = 0.0;
  double error_estimate = 0.0;
};

struct AsymptoticReport {
  std::string quantity;
  int side = 1;
  Location regime = Location::kAtZero;
  std::vector<AsymptoticPoint> points;
  double predicted = 0.0;
  /// Magnitude used when predicted is 0; the finest estimate must fall below
  /// zero_fraction of it.
  double scale = 0.0;
  double tol_band = 0.05;
  double zero_fraction = 0.1;
  bool converged = false;
  /// (c_hat - predicted) / predicted at the finest point, or c_hat / scale when predicted is 0.
  double rel_deviation_at_finest = 0.0;
};

inline constexpr double kDefaultTolBand = 0.05;

/// Geometric magnitudes between start and stop with the given density per decade.
std::vector<double> geometric_grid(double start, double stop, int points_per_decade);

/// c_hat(x) = h(x) L(1/|x|) / |x|^(index - 1) along the grid (magnitudes; the
/// side sets the sign of x). The regime follows rv.L: a law at infinity
/// describes h near 0, a law at 0 describes h at infinity.
AsymptoticReport empirical_coefficient_estimate(const ExponentEvaluator& ev, const RegularVariationSpec& rv, int side,
                                                const std::vector<double>& grid, const QuadratureConfig& cfg = {},
                                                double tol_band = kDefaultTolBand);

/// Gaussian case: c_hat(x) = h(x) / |x| against gaussian_coeff_c_pm.
AsymptoticReport empirical_gaussian_estimate(const ExponentEvaluator& ev, int side, const std::vector<double>& grid,
                                             const QuadratureConfig& cfg = {}, double tol_band = kDefaultTolBand);

/// h_q(x) / h(x) along the grid, expected to tend to 1 as x -> 0 on a side
/// whose coefficient is nonzero; throws NotApplicable otherwise.
AsymptoticReport ratio_hq_h(const ExponentEvaluator& ev, double q, const CoefficientPair& predicted, int side,
                            const std::vector<double>& grid, const QuadratureConfig& cfg = {},
                            double tol_band = kDefaultTolBand);

nlohmann::json to_json(const AsymptoticReport& r);

/// Columns x, h, c_hat, error_estimate.
void write_report_csv(std::ostream& out, const AsymptoticReport& r);

}  // namespace levy
