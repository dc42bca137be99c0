#include "levy/probes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "levy/errors.hpp"

namespace levy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ProbeStatus classify(double exponent, double threshold, bool above_passes) {
  if (std::isnan(exponent)) return ProbeStatus::kInconclusive;
  const double d = above_passes ? exponent - threshold : threshold - exponent;
  if (d > kProbeMargin) return ProbeStatus::kPass;
  if (d < -kProbeMargin) return ProbeStatus::kFail;
  return ProbeStatus::kInconclusive;
}

ProbeStatus meet(ProbeStatus a, ProbeStatus b) {
  if (a == ProbeStatus::kFail || b == ProbeStatus::kFail) return ProbeStatus::kFail;
  if (a == ProbeStatus::kInconclusive || b == ProbeStatus::kInconclusive) return ProbeStatus::kInconclusive;
  return ProbeStatus::kPass;
}

// |Im(lambda / Psi)| = lambda |omega| / |Psi|^2, with omega below the
// evaluator's noise treated as zero.
double abs_im_ratio(const ExponentEvaluator& ev, double lambda) {
  const ExponentValue v = ev.evaluate(lambda);
  const double th = v.theta.value;
  const double om = v.omega.value;
  const double noise = 10.0 * ev.relative_noise() * std::max(std::abs(om), th) + v.omega.error_estimate;
  if (std::abs(om) <= noise) return 0.0;
  return lambda * std::abs(om) / (th * th + om * om);
}

FittedExponent fit_im_ratio(const ExponentEvaluator& ev, double lo, double hi, double threshold,
                            bool above_passes, const std::string& what) {
  FittedExponent f{what, lo, hi, kNaN, threshold, ProbeStatus::kInconclusive};
  bool all_zero = true;
  for (int i = 0; i < 16; ++i) {
    if (abs_im_ratio(ev, lo * std::pow(hi / lo, i / 15.0)) != 0.0) all_zero = false;
  }
  if (all_zero) {
    f.status = ProbeStatus::kPass;
    return f;
  }
  const PowerFit fit = fit_power_law([&](double l) { return abs_im_ratio(ev, l); }, lo, hi, 16);
  if (fit.valid()) {
    f.exponent = fit.exponent;
    f.status = classify(fit.exponent, threshold, above_passes);
  }
  return f;
}

void add_witness(const ExponentEvaluator& ev, const QuadratureConfig& cfg, ProbeReport& r) {
  const RealFn g = [&](double l) { return std::min(l * l, 1.0) / std::abs(eval_psi(ev, l)); };
  QuadratureConfig c = cfg;
  c.rel_tol = std::max(cfg.rel_tol, 1e-6);
  try {
    FourierOptions opts;
    opts.frontier = ev.frontier();
    const IntegralResult w = integrate_fourier_tail(g, Kernel::kNone, 0.0, 0.0, c, opts);
    r.witness = w.value;
    r.witness_error = w.error_estimate;
  } catch (const LevyError& e) {
    r.witness = std::numeric_limits<double>::infinity();
    r.witness_error = std::numeric_limits<double>::infinity();
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "witness integral failed: " + e.what();
  }
}

std::string exponent_text(const FittedExponent& f) {
  char buf[160];
  if (std::isnan(f.exponent)) {
    std::snprintf(buf, sizeof buf, "%s on [%.3g, %.3g]: %s", f.quantity.c_str(), f.lo, f.hi,
                  f.status == ProbeStatus::kPass ? "vanishes" : "no power law");
  } else {
    std::snprintf(buf, sizeof buf, "%s on [%.3g, %.3g]: exponent %.4f vs %.2f", f.quantity.c_str(), f.lo,
                  f.hi, f.exponent, f.threshold);
  }
  return buf;
}

void summarize(ProbeReport& r) {
  std::string text;
  for (const FittedExponent& f : r.fits) text += (text.empty() ? "" : "; ") + exponent_text(f);
  r.detail = r.detail.empty() ? text : text + "; " + r.detail;
}

FittedExponent decay_fit(const ExponentEvaluator& ev, double q) {
  const double hi = std::min(1e6, ev.frontier());
  const double lo = hi / 10.0;
  FittedExponent f{"1/|q+Psi|", lo, hi, kNaN, -1.0, ProbeStatus::kInconclusive};
  const PowerFit fit = fit_power_law([&](double l) { return 1.0 / std::abs(q + eval_psi(ev, l)); }, lo, hi, 16);
  if (fit.valid()) {
    f.exponent = fit.exponent;
    f.status = classify(fit.exponent, -1.0, false);
  }
  return f;
}

}  // namespace

const char* to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::kPass:
      return "pass";
    case ProbeStatus::kFail:
      return "fail";
    default:
      return "inconclusive";
  }
}

ProbeReport check_A(const ExponentEvaluator& ev, double q, const QuadratureConfig& cfg, bool witness) {
  ProbeReport r;
  r.assumption = 'A';
  if (!(q > 0.0)) throw DomainError("check_A: q must be positive");
  r.fits.push_back(decay_fit(ev, q));
  r.status = r.fits.back().status;
  if (ev.spec().a > 0.0) {
    r.status = ProbeStatus::kPass;
    r.detail = "a > 0: |q + Psi| grows like a lambda^2";
  }
  if (witness) add_witness(ev, cfg, r);
  summarize(r);
  return r;
}

ProbeReport check_T(const ExponentEvaluator& ev, const QuadratureConfig& cfg, bool witness) {
  ProbeReport r = check_A(ev, 1.0, cfg, witness);
  r.assumption = 'T';
  r.detail.clear();
  if (std::isinf(r.witness)) r.detail = "witness integral failed";
  const FittedExponent near = fit_im_ratio(ev, 1e-6, 1e-4, -1.0, true, "|Im(lambda/Psi)|");
  r.fits.push_back(near);
  const ProbeStatus a_status = ev.spec().a > 0.0 ? ProbeStatus::kPass : r.fits.front().status;
  r.status = meet(a_status, near.status);
  summarize(r);
  return r;
}

ProbeReport check_Z(const ExponentEvaluator& ev, const QuadratureConfig& cfg, bool witness) {
  ProbeReport r;
  r.assumption = 'Z';
  r.fits.push_back(fit_im_ratio(ev, 1e-6, 1e-4, -1.0, true, "|Im(lambda/Psi)| near 0"));
  const double hi = std::min(1e6, ev.frontier());
  r.fits.push_back(fit_im_ratio(ev, hi / 10.0, hi, -1.0, false, "|Im(lambda/Psi)| at infinity"));
  r.status = meet(r.fits[0].status, r.fits[1].status);
  if (!(ev.spec().a > 0.0)) {
    r.status = ProbeStatus::kFail;
    r.detail = "Gaussian coefficient a = 0";
  }
  if (witness) add_witness(ev, cfg, r);
  summarize(r);
  return r;
}

nlohmann::json to_json(const ProbeReport& r) {
  nlohmann::json fits = nlohmann::json::array();
  for (const FittedExponent& f : r.fits) {
    fits.push_back({{"quantity", f.quantity},
                    {"lo", f.lo},
                    {"hi", f.hi},
                    {"exponent", std::isnan(f.exponent) ? nlohmann::json(nullptr) : nlohmann::json(f.exponent)},
                    {"threshold", f.threshold},
                    {"status", to_string(f.status)}});
  }
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"assumption", std::string(1, r.assumption)},
          {"status", to_string(r.status)},
          {"fits", fits},
          {"witness", finite_or_null(r.witness)},
          {"witnessError", finite_or_null(r.witness_error)},
          {"detail", r.detail}};
}

}  // namespace levy
