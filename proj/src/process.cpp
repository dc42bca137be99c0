#include "levy/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "levy/errors.hpp"
#include "levy/special.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// A smooth function on (0, inf) restricted to [lower, upper).
struct Term {
  RealFn value;
  double lower = 0.0;
  double upper = kInf;
  double origin_order = kNaN;
  // Integrable at infinity, so int_l^u = int_l^inf - int_u^inf is usable.
  bool decays = true;
};

std::vector<Term> terms_of(const MeasureSpec& m, int side) {
  std::vector<Term> out;
  std::visit(overloaded{
                 [](const ZeroMeasure&) {},
                 [&](const StableDensity& s) {
                   const double k = side > 0 ? s.k_plus : s.k_minus;
                   if (k == 0.0) return;
                   const double e = -s.alpha - 1.0;
                   out.push_back({[k, e](double y) { return k * std::pow(y, e); }, 0.0, kInf, e, true});
                 },
                 [&](const TemperedPolynomial& t) {
                   const double k = side > 0 ? t.k_plus : t.k_minus;
                   if (k == 0.0) return;
                   const double e = -t.alpha - 1.0;
                   const double g = t.alpha - t.beta_tail;
                   out.push_back({[k, e, g](double y) { return k * std::pow(y, e) * std::pow(1.0 + y, g); },
                                  0.0, kInf, e, true});
                 },
                 [&](const ExponentialDensity& x) {
                   if (side < 0) return;
                   const double s = x.scale;
                   out.push_back({[s](double y) { return std::exp(-y / s); }, 0.0, kInf, 0.0, true});
                 },
                 [&](const CustomDensity& c) {
                   for (const PowerTerm& p : side > 0 ? c.plus : c.minus) {
                     if (p.coef == 0.0) continue;
                     const RealFn v = [p](double y) {
                       double r = p.coef * std::pow(y, p.power);
                       if (p.decay != 0.0) r *= std::exp(-p.decay * y);
                       return r;
                     };
                     out.push_back({v, p.lower, p.upper, p.power, p.decay > 0.0 || p.power < -1.0});
                   }
                   const RealFn& extra = side > 0 ? c.extra_plus : c.extra_minus;
                   if (extra) out.push_back({extra, 0.0, kInf, kNaN, true});
                 },
             },
             m);
  return out;
}

double origin_order_of(const Term& t) {
  if (!std::isnan(t.origin_order)) return t.origin_order;
  const PowerFit fit = fit_power_law(t.value, 1e-6, 1e-3, 16);
  return fit.valid() ? fit.exponent : 0.0;
}

enum class Weight { kTheta, kOmega };

// x - sin x without cancellation for small x.
double x_minus_sin(double z) {
  if (std::abs(z) >= 0.5) return z - std::sin(z);
  const double z2 = z * z;
  double term = z * z2 / 6.0;
  double sum = term;
  for (int k = 2; k <= 7; ++k) {
    term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
  }
  return sum;
}

double kernel(Weight w, double lambda, double y) {
  const double z = lambda * y;
  if (w == Weight::kTheta) {
    const double s = std::sin(0.5 * z);
    return 2.0 * s * s;
  }
  return y < 1.0 ? x_minus_sin(z) : -std::sin(z);
}

// kernel * density. Deep inside a power singularity the density alone
// overflows, so the leading power law is assembled in log space there.
double weighted(const Term& t, Weight w, double lambda, double y) {
  constexpr double kDeep = 1e-20;
  if (y < kDeep && !std::isnan(t.origin_order)) {
    const double ref = t.value(kDeep);
    if (ref == 0.0) return 0.0;
    const double lead = w == Weight::kTheta ? 0.5 * lambda * lambda : lambda * lambda * lambda / 6.0;
    const double k = w == Weight::kTheta ? 2.0 : 3.0;
    const double log_y = std::log(y);
    const double log_v = std::log(std::abs(ref)) + t.origin_order * (log_y - std::log(kDeep));
    return std::copysign(std::exp(std::log(lead) + log_v + k * log_y), ref);
  }
  const double v = t.value(y);
  return v == 0.0 ? 0.0 : kernel(w, lambda, y) * v;
}

std::vector<double> decade_cuts(double a, double b) {
  std::vector<double> cuts;
  if (a > 0.0) {
    for (double c = std::pow(10.0, std::ceil(std::log10(a))); c < b; c *= 10.0) cuts.push_back(c);
  }
  if (a < 1.0 && b > 1.0) cuts.push_back(1.0);
  return cuts;
}

IntegralResult semi_infinite_checked(const RealFn& f, double a, const QuadratureConfig& cfg) {
  try {
    return integrate_semi_infinite(f, a, cfg);
  } catch (const SlowDecay& e) {
    throw NonIntegrableMeasure(std::string("Levy density is not integrable at infinity: ") + e.what());
  }
}

// int_a^inf K(lambda y) f(y) dy for one term, a >= 0.
IntegralResult from_point(const Term& t, Weight w, double lambda, double a, const QuadratureConfig& cfg) {
  const double cycle = 2.0 * kPi / lambda;
  const RealFn full = [&](double y) { return weighted(t, w, lambda, y); };
  IntegralResult out;
  if (a < cycle) {
    double start = a;
    if (a == 0.0) {
      start = std::min(cycle, 1.0);
      const double order = origin_order_of(t) + (w == Weight::kTheta ? 2.0 : 3.0);
      out = integrate_singular(full, order, start, cfg);
    }
    if (start < cycle) {
      const auto cuts = decade_cuts(start, cycle);
      out = combine(out, integrate_adaptive(full, start, cycle, cfg, cuts));
    }
  }
  const double b0 = std::max(a, cycle);
  if (w == Weight::kTheta) {
    out = combine(out, semi_infinite_checked(t.value, b0, cfg));
    out = combine(out, integrate_oscillatory(t.value, Kernel::kCos, lambda, b0, cfg), -1.0);
  } else {
    if (b0 < 1.0) {
      const RealFn yf = [&](double y) { return y * t.value(y); };
      IntegralResult lin = integrate_adaptive(yf, b0, 1.0, cfg, decade_cuts(b0, 1.0));
      lin.value *= lambda;
      lin.error_estimate *= lambda;
      out = combine(out, lin);
    }
    out = combine(out, integrate_oscillatory(t.value, Kernel::kSin, lambda, b0, cfg), -1.0);
  }
  return out;
}

IntegralResult term_integral(const Term& t, Weight w, double lambda, const QuadratureConfig& cfg) {
  if (t.upper == kInf) return from_point(t, w, lambda, t.lower, cfg);
  // Differencing two tails cancels badly when the window holds few periods.
  const double periods = (t.upper - t.lower) * lambda / (2.0 * kPi);
  if (t.decays && periods > 1000.0) {
    return combine(from_point(t, w, lambda, t.lower, cfg), from_point(t, w, lambda, t.upper, cfg), -1.0);
  }
  // Bounded support without decay: integrate directly, cut at every half period.
  const RealFn full = [&](double y) { return weighted(t, w, lambda, y); };
  IntegralResult out;
  double start = t.lower;
  if (start == 0.0) {
    start = std::min({t.upper, 2.0 * kPi / lambda, 1.0});
    const double order = origin_order_of(t) + (w == Weight::kTheta ? 2.0 : 3.0);
    out = integrate_singular(full, order, start, cfg);
  }
  if (start >= t.upper) return out;
  const double half = kPi / lambda;
  const double pieces = (t.upper - start) / half;
  if (pieces > 1e5) {
    throw QuadratureFailure("bounded density term spans too many oscillations at lambda = " +
                            std::to_string(lambda));
  }
  std::vector<double> cuts = decade_cuts(start, t.upper);
  for (double c = (std::floor(start / half) + 1.0) * half; c < t.upper; c += half) cuts.push_back(c);
  QuadratureConfig wide = cfg;
  wide.max_segments = std::max(cfg.max_segments, 4 * static_cast<int>(cuts.size()) + 16);
  return combine(out, integrate_adaptive(full, start, t.upper, wide, cuts));
}

// Also accumulates the sum of |term| into l1, the scale against which the
// cancellation between sides has to be judged.
IntegralResult measure_part(const MeasureSpec& m, Weight w, double lambda, const QuadratureConfig& cfg,
                            double& l1) {
  IntegralResult total;
  for (int side : {1, -1}) {
    for (const Term& t : terms_of(m, side)) {
      const IntegralResult r = term_integral(t, w, lambda, cfg);
      l1 += std::abs(r.value);
      total = combine(total, r, (w == Weight::kOmega && side < 0) ? -1.0 : 1.0);
    }
  }
  return total;
}

IntegralResult exact(double v) {
  IntegralResult r;
  r.value = v;
  r.error_estimate = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v);
  return r;
}

void check_measure_params(const MeasureSpec& m, std::vector<ValidationCheck>& checks) {
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok, detail});
  };
  auto in_open = [](double v, double lo, double hi) { return v > lo && v < hi; };
  std::visit(overloaded{
                 [&](const ZeroMeasure&) { add("measure parameters", true, "no jumps"); },
                 [&](const StableDensity& s) {
                   add("stable kPlus, kMinus", s.k_plus >= 0.0 && s.k_minus >= 0.0 && s.k_plus + s.k_minus > 0.0,
                       "need K+, K- >= 0 with K+ + K- > 0");
                   add("stable alpha", in_open(s.alpha, 1.0, 2.0), "need 1 < alpha < 2");
                 },
                 [&](const TemperedPolynomial& t) {
                   add("tempered kPlus, kMinus", t.k_plus > 0.0 && t.k_minus > 0.0, "need K+, K- > 0");
                   add("tempered alpha", in_open(t.alpha, 1.0, 2.0), "need 1 < alpha < 2");
                   add("tempered betaTail", in_open(t.beta_tail, 0.0, 2.0), "need 0 < betaTail < 2");
                 },
                 [&](const ExponentialDensity& x) {
                   add("exponential scale", x.scale > 0.0 && std::isfinite(x.scale), "need scale > 0");
                 },
                 [&](const CustomDensity& c) {
                   bool ok = true;
                   for (const auto* side : {&c.plus, &c.minus}) {
                     for (const PowerTerm& p : *side) {
                       ok = ok && std::isfinite(p.coef) && std::isfinite(p.power) && p.lower >= 0.0 &&
                            p.upper > p.lower && std::isfinite(p.decay) && p.decay >= 0.0;
                     }
                   }
                   add("custom terms", ok, "need finite coef/power, 0 <= lower < upper, decay >= 0");
                   if (c.origin_hint) {
                     const SideHint& h = *c.origin_hint;
                     add("originHint", in_open(h.index, 1.0, 2.0) && h.k_plus >= 0.0 && h.k_minus >= 0.0 &&
                                           h.k_plus + h.k_minus > 0.0,
                         "need 1 < alpha < 2 and K+-(0) >= 0, not both 0");
                   }
                   if (c.tail_hint) {
                     const SideHint& h = *c.tail_hint;
                     add("tailHint", in_open(h.index, 0.0, 2.0) && h.k_plus >= 0.0 && h.k_minus >= 0.0 &&
                                         h.k_plus + h.k_minus > 0.0,
                         "need 0 < betaTail < 2 and K+-(inf) >= 0, not both 0");
                   }
                 },
             },
             m);
}

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

double PowerTerm::operator()(double x) const {
  if (!(x >= lower && x < upper)) return 0.0;
  double r = coef * std::pow(x, power);
  if (decay != 0.0) r *= std::exp(-decay * x);
  return r;
}

double density(const MeasureSpec& m, int side, double y) {
  if (!(y > 0.0)) return 0.0;
  double v = 0.0;
  for (const Term& t : terms_of(m, side)) {
    if (y >= t.lower && y < t.upper) v += t.value(y);
  }
  return v;
}

bool side_is_empty(const MeasureSpec& m, int side) { return terms_of(m, side).empty(); }

IntegralResult integrate_against_measure(const MeasureSpec& m, int side, const RealFn& w,
                                         double weight_order, double from, const QuadratureConfig& cfg) {
  IntegralResult total;
  for (const Term& t : terms_of(m, side)) {
    const double lo = std::max(from, t.lower);
    if (lo >= t.upper) continue;
    const RealFn f = [&](double y) {
      const double v = t.value(y);
      return v == 0.0 ? 0.0 : w(y) * v;
    };
    double start = lo;
    if (lo == 0.0) {
      start = std::min(1.0, t.upper);
      total = combine(total, integrate_singular(f, weight_order + origin_order_of(t), start, cfg));
    }
    if (start >= t.upper) continue;
    if (t.upper == kInf) {
      total = combine(total, semi_infinite_checked(f, start, cfg));
    } else {
      total = combine(total, integrate_adaptive(f, start, t.upper, cfg, decade_cuts(start, t.upper)));
    }
  }
  return total;
}

double strictly_stable_drift(double k_plus, double k_minus, double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("strictly_stable_drift: need 1 < alpha < 2");
  return (k_plus - k_minus) / (alpha - 1.0);
}

StableCoefficients stable_coefficients(double k_plus, double k_minus, double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("stable_coefficients: need 1 < alpha < 2");
  return {kPi * (k_plus + k_minus) * c_alpha(alpha + 1.0), (k_plus - k_minus) * kPi * xsin_moment(alpha)};
}

ExponentEvaluator::ExponentEvaluator(LevyProcessSpec spec, EvaluatorMode mode)
    : spec_(std::move(spec)), mode_(std::move(mode)) {
  std::visit(overloaded{
                 [](const ClosedFormStable& s) {
                   if (!(s.c_theta > 0.0) || !std::isfinite(s.c_omega) || !(s.alpha > 1.0 && s.alpha < 2.0)) {
                     throw DomainError("closed-form stable needs c_theta > 0 and 1 < alpha < 2");
                   }
                 },
                 [](const ClosedFormBrownian& b) {
                   if (!(b.a >= 0.0) || !std::isfinite(b.b)) throw DomainError("Brownian needs a >= 0");
                 },
                 [](const NumericFromMeasure& n) { n.quad.validate(); },
             },
             mode_);
}

ExponentEvaluator ExponentEvaluator::brownian(double a, double b) {
  return ExponentEvaluator(LevyProcessSpec{a, b, ZeroMeasure{}}, ClosedFormBrownian{a, b});
}

ExponentEvaluator ExponentEvaluator::stable(double c_theta, double c_omega, double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("stable evaluator: need 1 < alpha < 2");
  const double sum = c_theta / (kPi * c_alpha(alpha + 1.0));
  const double diff = c_omega / (kPi * xsin_moment(alpha));
  if (!(sum > 0.0) || std::abs(diff) > sum * (1.0 + 1e-12)) {
    throw DomainError("stable evaluator: c_omega outside the range of a stable Levy measure");
  }
  const double kp = std::max(0.0, 0.5 * (sum + diff));
  const double km = std::max(0.0, 0.5 * (sum - diff));
  LevyProcessSpec spec{0.0, strictly_stable_drift(kp, km, alpha), StableDensity{kp, km, alpha}};
  return ExponentEvaluator(spec, ClosedFormStable{c_theta, c_omega, alpha});
}

ExponentEvaluator ExponentEvaluator::numeric(LevyProcessSpec spec, QuadratureConfig quad) {
  return ExponentEvaluator(std::move(spec), NumericFromMeasure{quad});
}

ExponentEvaluator ExponentEvaluator::automatic(LevyProcessSpec spec, QuadratureConfig quad) {
  if (std::holds_alternative<ZeroMeasure>(spec.measure)) {
    const double a = spec.a;
    const double b = spec.b;
    return ExponentEvaluator(std::move(spec), ClosedFormBrownian{a, b});
  }
  if (const auto* s = std::get_if<StableDensity>(&spec.measure)) {
    const double centred = strictly_stable_drift(s->k_plus, s->k_minus, s->alpha);
    if (spec.a == 0.0 && std::abs(spec.b - centred) <= 1e-12 * std::max(1.0, std::abs(centred))) {
      const StableCoefficients c = stable_coefficients(s->k_plus, s->k_minus, s->alpha);
      const double alpha = s->alpha;
      return ExponentEvaluator(std::move(spec), ClosedFormStable{c.c_theta, c.c_omega, alpha});
    }
  }
  return numeric(std::move(spec), quad);
}

double ExponentEvaluator::relative_noise() const {
  if (const auto* n = std::get_if<NumericFromMeasure>(&mode_)) return n->quad.rel_tol;
  return 8.0 * std::numeric_limits<double>::epsilon();
}

std::string ExponentEvaluator::describe() const {
  return std::visit(overloaded{
                        [](const ClosedFormStable& s) {
                          return fmt("closed-form stable (alpha = %.17g", s.alpha) +
                                 fmt(", c_theta = %.17g", s.c_theta) + fmt(", c_omega = %.17g)", s.c_omega);
                        },
                        [](const ClosedFormBrownian& b) {
                          return fmt("closed-form Brownian (a = %.17g", b.a) + fmt(", b = %.17g)", b.b);
                        },
                        [](const NumericFromMeasure& n) {
                          return fmt("numeric from measure (rel_tol = %.3g)", n.quad.rel_tol);
                        },
                    },
                    mode_);
}

ExponentValue ExponentEvaluator::evaluate(double lambda) const {
  if (std::isnan(lambda) || std::isinf(lambda)) throw DomainError("lambda must be finite");
  ExponentValue out;
  if (lambda == 0.0) return out;
  const double l = std::abs(lambda);
  const double sign = lambda > 0.0 ? 1.0 : -1.0;
  std::visit(overloaded{
                 [&](const ClosedFormStable& s) {
                   const double p = std::pow(l, s.alpha);
                   out.theta = exact(s.c_theta * p);
                   out.omega = exact(s.c_omega * p);
                 },
                 [&](const ClosedFormBrownian& b) {
                   out.theta = exact(b.a * l * l);
                   out.omega = exact(b.b * l);
                 },
                 [&](const NumericFromMeasure& n) {
                   if (l > kNumericLambdaLimit) {
                     throw DomainError("numeric exponent requested at |lambda| = " + fmt("%.6g", l) +
                                       " beyond the resolvable limit 1e6");
                   }
                   QuadratureConfig tcfg = n.quad;
                   tcfg.abs_tol = n.quad.abs_tol * std::min(1.0, l * l);
                   QuadratureConfig ocfg = n.quad;
                   ocfg.abs_tol = n.quad.abs_tol * std::min(1.0, l);
                   tcfg.rel_tol = ocfg.rel_tol = n.quad.rel_tol / 4.0;
                   double l1_theta = spec_.a * l * l;
                   double l1_omega = std::abs(spec_.b) * l;
                   out.theta = combine(exact(spec_.a * l * l),
                                       measure_part(spec_.measure, Weight::kTheta, l, tcfg, l1_theta));
                   out.omega = combine(exact(spec_.b * l),
                                       measure_part(spec_.measure, Weight::kOmega, l, ocfg, l1_omega));
                   for (auto [r, l1] : {std::pair{&out.theta, l1_theta}, std::pair{&out.omega, l1_omega}}) {
                     r->converged = r->error_estimate <= tolerance_target(n.quad, r->value);
                     const double target = std::max(n.quad.abs_tol, n.quad.rel_tol * l1);
                     if (r->error_estimate > 10.0 * target) {
                       throw QuadratureFailure("exponent at lambda = " + fmt("%.6g", l) +
                                               " missed tolerance: error " + fmt("%.3g", r->error_estimate) +
                                               " for value " + fmt("%.6g", r->value));
                     }
                   }
                   // 1 - cos >= 0 and every term is nonnegative.
                   out.theta.value = std::max(out.theta.value, 0.0);
                 },
             },
             mode_);
  out.omega.value *= sign;
  return out;
}

double eval_theta(const ExponentEvaluator& ev, double lambda) { return ev.evaluate(lambda).theta.value; }

double eval_omega(const ExponentEvaluator& ev, double lambda) { return ev.evaluate(lambda).omega.value; }

std::complex<double> eval_psi(const ExponentEvaluator& ev, double lambda) { return ev.evaluate(lambda).psi(); }

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport validate_spec(const LevyProcessSpec& spec) {
  ValidationReport rep;
  rep.checks.push_back({"gaussian coefficient", spec.a >= 0.0 && std::isfinite(spec.a), fmt("a = %.17g", spec.a)});
  rep.checks.push_back({"drift", std::isfinite(spec.b) != 0, fmt("b = %.17g", spec.b)});
  check_measure_params(spec.measure, rep.checks);
  if (!rep.passed()) return rep;

  const auto both = [&](double y) { return density(spec.measure, 1, y) + density(spec.measure, -1, y); };
  bool nonneg = true;
  std::string where;
  for (int side : {1, -1}) {
    for (int i = 0; i <= 320; ++i) {
      const double y = std::pow(10.0, -8.0 + i * 0.05);
      const double v = density(spec.measure, side, y);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        nonneg = false;
        where = fmt("density %.6g", v) + fmt(" at x = %.6g", side * y);
        break;
      }
    }
  }
  rep.checks.push_back({"nonnegative density", nonneg, nonneg ? "sampled on 1e-8..1e8" : where});
  if (!nonneg) return rep;

  const PowerFit origin = fit_power_law(both, 1e-6, 1e-3, 16);
  if (origin.valid()) rep.origin_exponent = origin.exponent;
  const PowerFit tail = fit_power_law(both, 1e4, 1e6, 16);
  if (tail.valid()) rep.tail_exponent = tail.exponent;

  QuadratureConfig cfg;
  cfg.rel_tol = 1e-8;
  // int (x^2 ^ 1) nu(dx), split at |x| = 1.
  bool origin_ok = !origin.valid() || origin.exponent > -3.0;
  std::string origin_detail = origin.valid() ? fmt("fitted exponent %.6g near 0", origin.exponent)
                                             : std::string("no power-law mass near 0");
  bool tail_ok = !tail.valid() || tail.exponent < -1.0;
  std::string tail_detail = tail.valid() ? fmt("fitted exponent %.6g at infinity", tail.exponent)
                                         : std::string("density vanishes at infinity");
  if (origin_ok) {
    try {
      double mass = 0.0;
      for (int side : {1, -1}) {
        mass += integrate_against_measure(
                    spec.measure, side, [](double y) { return y < 1.0 ? y * y : 0.0; }, 2.0, 0.0, cfg)
                    .value;
      }
      origin_detail += fmt(", int_{|x|<1} x^2 nu = %.6g", mass);
      origin_ok = std::isfinite(mass);
    } catch (const LevyError& e) {
      origin_ok = false;
      origin_detail += std::string(", ") + e.what();
    }
  } else {
    origin_detail += ": int x^2 xi diverges";
  }
  if (tail_ok) {
    try {
      double mass = 0.0;
      for (int side : {1, -1}) {
        mass += integrate_against_measure(spec.measure, side, [](double) { return 1.0; }, 0.0, 1.0, cfg).value;
      }
      tail_detail += fmt(", nu(|x| >= 1) = %.6g", mass);
      tail_ok = std::isfinite(mass);
    } catch (const LevyError& e) {
      tail_ok = false;
      tail_detail += std::string(", ") + e.what();
    }
  } else {
    tail_detail += ": nu(|x| >= 1) diverges";
  }
  rep.checks.push_back({"integrable at origin", origin_ok, origin_detail});
  rep.checks.push_back({"integrable at infinity", tail_ok, tail_detail});
  return rep;
}

void require_valid(const LevyProcessSpec& spec) {
  const ValidationReport rep = validate_spec(spec);
  if (rep.passed()) return;
  std::string msg = "invalid process spec:";
  for (const ValidationCheck& c : rep.checks) {
    if (!c.passed) msg += " [" + c.name + ": " + c.detail + "]";
  }
  throw SpecError(msg);
}

}  // namespace levy
