#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "levy/process.hpp"

namespace levy {

enum class ProbeStatus { kPass, kFail, kInconclusive };

const char* to_string(ProbeStatus s);

/// Local power exponent of an integrand over [lo, hi], compared with the
/// threshold that separates integrable from non-integrable behaviour.
struct FittedExponent {
  std::string quantity;
  double lo = 0.0;
  double hi = 0.0;
  /// NaN when the quantity vanishes on the whole window.
  double exponent = 0.0;
  double threshold = 0.0;
  ProbeStatus status = ProbeStatus::kInconclusive;
};

struct ProbeReport {
  char assumption = 'A';
  ProbeStatus status = ProbeStatus::kInconclusive;
  std::vector<FittedExponent> fits;
  /// int_0^inf (lambda^2 ^ 1) / |Psi(lambda)| d lambda; infinite if it failed,
  /// NaN when not requested.
  double witness = std::numeric_limits<double>::quiet_NaN();
  double witness_error = std::numeric_limits<double>::quiet_NaN();
  std::string detail;

  bool passed() const { return status == ProbeStatus::kPass; }
};

/// Half-width of the inconclusive band around each threshold.
inline constexpr double kProbeMargin = 0.05;

/// int_0^inf d lambda / |q + Psi| < inf, judged by the decay of 1/|q + Psi|
/// on [1e5, 1e6].
ProbeReport check_A(const ExponentEvaluator& ev, double q, const QuadratureConfig& cfg, bool witness = true);

/// (A) plus int_0^1 |Im(lambda / Psi)| < inf, judged on [1e-6, 1e-4].
ProbeReport check_T(const ExponentEvaluator& ev, const QuadratureConfig& cfg, bool witness = true);

/// a > 0 and int_0^inf |Im(lambda / Psi)| < inf; both ends are fitted.
ProbeReport check_Z(const ExponentEvaluator& ev, const QuadratureConfig& cfg, bool witness = true);

nlohmann::json to_json(const ProbeReport& r);

}  // namespace levy
