#include "levy/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "levy/errors.hpp"
#include "levy/special.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_index(double index, const char* who) {
  if (!(index > 1.0 && index < 2.0)) throw DomainError(std::string(who) + ": index " + num(index) + " outside (1, 2)");
}

CoefficientPair pair_formula(const RegularVariationSpec& rv) {
  const double norm = c_alpha(rv.index) / (rv.c_theta * rv.c_theta + rv.c_omega * rv.c_omega);
  const double half_angle = 0.5 * kPi * rv.index;
  const double skew = rv.c_omega * (std::cos(half_angle) / std::sin(half_angle));
  return {norm * (rv.c_theta + skew), norm * (rv.c_theta - skew)};
}

std::vector<double> limit_samples(Location where) {
  std::vector<double> xs;
  for (int i = 4; i <= 8; ++i) xs.push_back(where == Location::kAtZero ? std::pow(10.0, -i) : std::pow(10.0, i));
  return xs;
}

double skew_factor(double k) { return std::isinf(k) ? -1.0 : (1.0 - k) / (1.0 + k); }

// (1 - k) / (1 + k) for k = lim K-/K+, written as (K+ - K-) / (K+ + K-) at the
// deepest sample so that swapping K+ and K- negates it exactly.
double skew_of(const SlowlyVaryingFn& k_plus, const SlowlyVaryingFn& k_minus) {
  const double k = estimate_limit_ratio(k_plus, k_minus);
  if (std::isinf(k)) return -1.0;
  if (k == 0.0) return 1.0;
  const double x = limit_samples(k_plus.location()).back();
  const double p = k_plus(x);
  const double m = k_minus(x);
  return (p - m) / (p + m);
}

SlowlyVaryingFn sum_at_reciprocal(const SlowlyVaryingFn& kp, const SlowlyVaryingFn& km, Location result,
                                  double delta) {
  return SlowlyVaryingFn([kp, km](double l) { return kp(1.0 / l) + km(1.0 / l); }, result, delta);
}

double measure_integral(const MeasureSpec& m, int side, const RealFn& w, double order, double from,
                        const QuadratureConfig& cfg, const char* what) {
  try {
    return integrate_against_measure(m, side, w, order, from, cfg).value;
  } catch (const NonIntegrableMeasure& e) {
    throw CaseMismatch(std::string(what) + " diverges: " + e.what());
  } catch (const QuadratureFailure& e) {
    throw CaseMismatch(std::string(what) + " could not be resolved: " + e.what());
  }
}

// b - int_{|x| >= 1} x nu(dx) with a degeneracy threshold.
struct FirstMoment {
  double value = 0.0;
  double noise = 0.0;
};

FirstMoment first_moment_coefficient(const LevyProcessSpec& spec, const QuadratureConfig& cfg) {
  const RealFn y = [](double v) { return v; };
  const double plus = measure_integral(spec.measure, 1, y, 1.0, 1.0, cfg, "int_{x >= 1} x nu(dx)");
  const double minus = measure_integral(spec.measure, -1, y, 1.0, 1.0, cfg, "int_{x <= -1} |x| nu(dx)");
  return {spec.b - (plus - minus), 1e-7 * (std::abs(spec.b) + plus + minus) + 1e-300};
}

void finalize(AsymptoticReport& r) {
  if (r.points.empty()) return;
  const double c = r.points.back().c_hat;
  if (std::abs(r.predicted) <= 1e-12 * r.scale) {
    r.rel_deviation_at_finest = c / r.scale;
    r.converged = std::abs(c) <= r.zero_fraction * r.scale;
  } else {
    r.rel_deviation_at_finest = (c - r.predicted) / r.predicted;
    r.converged = std::abs(c - r.predicted) <= r.tol_band * std::max(std::abs(r.predicted), r.scale);
  }
}

std::vector<double> ordered(std::vector<double> grid, Location regime) {
  for (double& g : grid) {
    g = std::abs(g);
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("asymptotic grid points must be nonzero and finite");
  }
  if (regime == Location::kAtZero) {
    std::sort(grid.begin(), grid.end(), std::greater<>());
  } else {
    std::sort(grid.begin(), grid.end());
  }
  if (std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw DomainError("asymptotic grid must be strictly monotone");
  }
  return grid;
}

std::vector<ResolventValue> h_values(const ExponentEvaluator& ev, int side, const std::vector<double>& xs, double q,
                                     const QuadratureConfig& cfg) {
  std::vector<GridPoint> pts;
  for (double x : xs) pts.push_back({q, side * x});
  return evaluate_grid(ev, ResolventQuantity::kHq, pts, cfg);
}

}  // namespace

SlowlyVaryingFn::SlowlyVaryingFn(RealFn eval, Location location, double potter_delta)
    : eval_(std::move(eval)), location_(location), delta_(potter_delta) {
  if (!eval_) throw DomainError("slowly varying function needs an evaluator");
  if (!(potter_delta > 0.0)) throw DomainError("Potter exponent must be positive");
}

SlowlyVaryingFn SlowlyVaryingFn::constant(double c, Location location) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("slowly varying constant must be finite and >= 0");
  return SlowlyVaryingFn([c](double) { return c; }, location);
}

double SlowlyVaryingFn::operator()(double x) const {
  const double v = eval_(x);
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("slowly varying function is negative or not finite at " + num(x));
  }
  return v;
}

PotterDiagnostic SlowlyVaryingFn::potter_check() const {
  PotterDiagnostic d;
  const auto xs = limit_samples(location_);
  for (double y : xs) {
    for (double z : xs) {
      const double ly = (*this)(y);
      const double lz = (*this)(z);
      if (ly == 0.0 && lz == 0.0) continue;
      if (lz == 0.0) {
        d.ok = false;
        d.worst = std::numeric_limits<double>::infinity();
        continue;
      }
      const double bound = 2.0 * std::max(std::pow(y / z, delta_), std::pow(y / z, -delta_));
      d.worst = std::max(d.worst, (ly / lz) / bound);
    }
  }
  d.ok = d.ok && d.worst <= 1.0;
  d.detail = d.ok ? "Potter bound holds on the sampled decades"
                  : "Potter bound violated (worst ratio " + num(d.worst) + ")";
  return d;
}

CoefficientPair coeff_c_pm(const RegularVariationSpec& rv) {
  require_index(rv.index, "coeff_c_pm");
  return pair_formula(rv);
}

CoefficientPair coeff_c_pm_zero(const RegularVariationSpec& rv0) {
  require_index(rv0.index, "coeff_c_pm_zero");
  return pair_formula(rv0);
}

double coefficient_scale(const RegularVariationSpec& rv) {
  require_index(rv.index, "coefficient_scale");
  return c_alpha(rv.index) / std::hypot(rv.c_theta, rv.c_omega);
}

double estimate_limit_ratio(const SlowlyVaryingFn& k_plus, const SlowlyVaryingFn& k_minus) {
  if (k_plus.location() != k_minus.location()) throw DomainError("K+ and K- must share a location");
  const auto xs = limit_samples(k_plus.location());
  std::vector<double> ratios;
  bool plus_zero = true;
  bool minus_zero = true;
  for (double x : xs) {
    const double p = k_plus(x);
    const double m = k_minus(x);
    plus_zero = plus_zero && p == 0.0;
    minus_zero = minus_zero && m == 0.0;
    ratios.push_back(p == 0.0 ? std::numeric_limits<double>::infinity() : m / p);
  }
  if (plus_zero && minus_zero) throw UnstableLimit("K+ and K- both vanish on the sample decade");
  if (minus_zero) return 0.0;
  if (plus_zero) return std::numeric_limits<double>::infinity();
  const bool huge = std::all_of(ratios.begin(), ratios.end(), [](double r) { return r > 1e6; });
  if (huge && std::is_sorted(ratios.begin(), ratios.end())) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  if (std::isinf(*hi) || *hi - *lo > 0.05 * *hi) {
    throw UnstableLimit("K-/K+ ranges over [" + num(*lo) + ", " + num(*hi) + "] across the sample decade");
  }
  return ratios.back();
}

RegularVariationSpec density_to_exponent_rv(double alpha, const SlowlyVaryingFn& k_plus,
                                            const SlowlyVaryingFn& k_minus) {
  require_index(alpha, "density_to_exponent_rv");
  if (k_plus.location() != Location::kAtZero || k_minus.location() != Location::kAtZero) {
    throw DomainError("density_to_exponent_rv: K+- must be slowly varying at 0");
  }
  const double skew = skew_of(k_plus, k_minus);
  const double delta = 0.5 * std::min(alpha - 1.0, 2.0 - alpha);
  RegularVariationSpec rv;
  rv.index = alpha;
  rv.c_theta = kPi * c_alpha(alpha + 1.0);
  rv.c_omega = skew * kPi * xsin_moment(alpha);
  rv.L = sum_at_reciprocal(k_plus, k_minus, Location::kAtInfinity, delta);
  return rv;
}

CoefficientPair gaussian_coeff_c_pm(const ExponentEvaluator& ev, const QuadratureConfig& cfg) {
  const double a = ev.spec().a;
  if (!(a > 0.0)) throw AssumptionViolation('Z', "Gaussian coefficient a = 0");
  const double base = 1.0 / (2.0 * a);
  if (const auto* bm = std::get_if<ClosedFormBrownian>(&ev.mode())) {
    // int_0^inf -b / (a^2 l^2 + b^2) d l = -(pi / 2) sgn(b) / a.
    if (bm->b == 0.0) return {base, base};
    const double s = bm->b > 0.0 ? 1.0 : -1.0;
    return {base - s * base, base + s * base};
  }
  const ProbeReport z = check_Z(ev, cfg, false);
  if (!z.passed()) throw AssumptionViolation('Z', std::string(to_string(z.status)) + ": " + z.detail);
  const RealFn im = [&ev](double l) {
    const ExponentValue v = ev.evaluate(l);
    const double th = v.theta.value;
    const double om = v.omega.value;
    return -l * om / (th * th + om * om);
  };
  QuadratureConfig c = cfg;
  c.rel_tol = std::max(cfg.rel_tol, 100.0 * ev.relative_noise());
  FourierOptions opts;
  opts.frontier = ev.frontier();
  const double integral = integrate_fourier_tail(im, Kernel::kNone, 0.0, 0.0, c, opts).value;
  return {base + integral / kPi, base - integral / kPi};
}

std::optional<RegularVariationSpec> ZeroLaws::joint() const {
  if (!theta || !omega) return std::nullopt;
  if (theta->index != omega->index) return std::nullopt;
  RegularVariationSpec rv;
  rv.index = theta->index;
  rv.c_theta = theta->coefficient;
  rv.c_omega = omega->coefficient;
  rv.L = theta->L;
  return rv;
}

std::optional<TailInfo> tail_info_of(const LevyProcessSpec& spec) {
  const auto at_inf = [](double c) { return SlowlyVaryingFn::constant(c, Location::kAtInfinity); };
  if (const auto* t = std::get_if<TemperedPolynomial>(&spec.measure)) {
    return TailInfo{t->beta_tail, at_inf(t->k_plus), at_inf(t->k_minus)};
  }
  if (const auto* s = std::get_if<StableDensity>(&spec.measure)) {
    return TailInfo{s->alpha, at_inf(s->k_plus), at_inf(s->k_minus)};
  }
  if (const auto* c = std::get_if<CustomDensity>(&spec.measure)) {
    if (c->tail_hint) {
      return TailInfo{c->tail_hint->index, at_inf(c->tail_hint->k_plus), at_inf(c->tail_hint->k_minus)};
    }
  }
  return std::nullopt;
}

std::optional<RegularVariationSpec> origin_rv_of(const LevyProcessSpec& spec) {
  if (spec.a != 0.0) return std::nullopt;
  const auto at0 = [](double c) { return SlowlyVaryingFn::constant(c, Location::kAtZero); };
  if (const auto* s = std::get_if<StableDensity>(&spec.measure)) {
    return density_to_exponent_rv(s->alpha, at0(s->k_plus), at0(s->k_minus));
  }
  if (const auto* t = std::get_if<TemperedPolynomial>(&spec.measure)) {
    return density_to_exponent_rv(t->alpha, at0(t->k_plus), at0(t->k_minus));
  }
  if (const auto* c = std::get_if<CustomDensity>(&spec.measure)) {
    if (c->origin_hint) {
      return density_to_exponent_rv(c->origin_hint->index, at0(c->origin_hint->k_plus),
                                    at0(c->origin_hint->k_minus));
    }
  }
  return std::nullopt;
}

ZeroLaws exponent_rv_at_zero(const LevyProcessSpec& spec, SmallLambdaCase which, const std::optional<TailInfo>& tail_in,
                             const QuadratureConfig& cfg) {
  ZeroLaws laws;
  const auto one = SlowlyVaryingFn::constant(1.0, Location::kAtZero);
  std::optional<TailInfo> tail = tail_in ? tail_in : tail_info_of(spec);

  // Degenerate first-moment case: omega ~ c l^beta L(l) with beta in (1, 3).
  auto degenerate_omega = [&](const FirstMoment& m1) {
    if (std::abs(m1.value) > m1.noise) return false;
    if (!tail || !(tail->beta_tail > 1.0 && tail->beta_tail < 3.0)) {
      laws.note = "b - int_{|x|>=1} x nu vanishes; no tail law with beta in (1, 3) to continue";
      return true;
    }
    const double k0 = estimate_limit_ratio(tail->k_plus, tail->k_minus);
    laws.k0 = k0;
    const double beta = tail->beta_tail;
    laws.omega = ExponentLaw{beta, skew_factor(k0) * kPi * c_alpha(beta) / beta,
                             sum_at_reciprocal(tail->k_plus, tail->k_minus, Location::kAtZero, 0.25)};
    laws.note = "degenerate first moment: omega of index beta";
    return true;
  };

  switch (which) {
    case SmallLambdaCase::kSecondMoment: {
      const RealFn y2 = [](double y) { return y * y; };
      double m2 = 0.0;
      for (int side : {1, -1}) m2 += measure_integral(spec.measure, side, y2, 2.0, 0.0, cfg, "int x^2 nu(dx)");
      laws.theta = ExponentLaw{2.0, spec.a + 0.5 * m2, one};
      const FirstMoment m1 = first_moment_coefficient(spec, cfg);
      if (!degenerate_omega(m1)) laws.omega = ExponentLaw{1.0, m1.value, one};
      break;
    }
    case SmallLambdaCase::kFirstMomentTail: {
      const FirstMoment m1 = first_moment_coefficient(spec, cfg);
      if (!degenerate_omega(m1)) laws.omega = ExponentLaw{1.0, m1.value, one};
      break;
    }
    case SmallLambdaCase::kRegularlyVaryingTail: {
      if (!tail) throw CaseMismatch("regularly varying tail declared but no tail description is available");
      const double beta = tail->beta_tail;
      if (!(beta > 0.0 && beta < 2.0)) throw CaseMismatch("tail index beta = " + num(beta) + " outside (0, 2)");
      const ValidationReport rep = validate_spec(spec);
      if (!std::isnan(rep.tail_exponent) && std::abs(rep.tail_exponent + beta + 1.0) > 0.1) {
        throw CaseMismatch("declared tail index " + num(beta) + " but the density decays like x^" +
                           num(rep.tail_exponent));
      }
      const double k0 = estimate_limit_ratio(tail->k_plus, tail->k_minus);
      laws.k0 = k0;
      const SlowlyVaryingFn L = sum_at_reciprocal(tail->k_plus, tail->k_minus, Location::kAtZero,
                                                  0.5 * std::min(beta, 2.0 - beta));
      laws.theta = ExponentLaw{beta, kPi * c_alpha(beta + 1.0), L};
      if (beta < 1.0) {
        laws.omega = ExponentLaw{beta, -skew_factor(k0) * kPi * c_alpha(beta + 1.0) * std::tan(0.5 * kPi * beta), L};
      } else if (beta > 1.0) {
        const FirstMoment m1 = first_moment_coefficient(spec, cfg);
        if (!degenerate_omega(m1)) laws.omega = ExponentLaw{1.0, m1.value, one};
      } else {
        laws.note = "beta = 1: the small-lambda law of omega is not covered";
      }
      break;
    }
  }
  return laws;
}

std::vector<double> geometric_grid(double start, double stop, int points_per_decade) {
  if (!(start > 0.0) || !(stop > 0.0) || start == stop || points_per_decade < 1) {
    throw DomainError("geometric grid needs positive start != stop and points per decade >= 1");
  }
  const double decades = std::log10(stop / start);
  const int n = static_cast<int>(std::round(std::abs(decades) * points_per_decade));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) {
    out.push_back(start * std::pow(10.0, decades * (n == 0 ? 0.0 : static_cast<double>(i) / n)));
  }
  out.back() = stop;
  return out;
}

AsymptoticReport empirical_coefficient_estimate(const ExponentEvaluator& ev, const RegularVariationSpec& rv, int side,
                                                const std::vector<double>& grid, const QuadratureConfig& cfg,
                                                double tol_band) {
  AsymptoticReport r;
  r.side = side > 0 ? 1 : -1;
  r.regime = rv.L.location() == Location::kAtInfinity ? Location::kAtZero : Location::kAtInfinity;
  r.quantity = "h(x) L(1/|x|) / |x|^(index-1)";
  r.tol_band = tol_band;
  const CoefficientPair c = r.regime == Location::kAtZero ? coeff_c_pm(rv) : coeff_c_pm_zero(rv);
  r.predicted = c.side(r.side);
  r.scale = coefficient_scale(rv);
  const auto xs = ordered(grid, r.regime);
  const auto hs = h_values(ev, r.side, xs, 0.0, cfg);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double norm = rv.L(1.0 / xs[i]) / std::pow(xs[i], rv.index - 1.0);
    r.points.push_back({r.side * xs[i], hs[i].value, hs[i].value * norm, hs[i].error_estimate * norm});
  }
  finalize(r);
  return r;
}

AsymptoticReport empirical_gaussian_estimate(const ExponentEvaluator& ev, int side, const std::vector<double>& grid,
                                             const QuadratureConfig& cfg, double tol_band) {
  AsymptoticReport r;
  r.side = side > 0 ? 1 : -1;
  r.regime = Location::kAtZero;
  r.quantity = "h(x) / |x|";
  r.tol_band = tol_band;
  r.predicted = gaussian_coeff_c_pm(ev, cfg).side(r.side);
  r.scale = 1.0 / (2.0 * ev.spec().a);
  const auto xs = ordered(grid, r.regime);
  const auto hs = h_values(ev, r.side, xs, 0.0, cfg);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r.points.push_back({r.side * xs[i], hs[i].value, hs[i].value / xs[i], hs[i].error_estimate / xs[i]});
  }
  finalize(r);
  return r;
}

AsymptoticReport ratio_hq_h(const ExponentEvaluator& ev, double q, const CoefficientPair& predicted, int side,
                            const std::vector<double>& grid, const QuadratureConfig& cfg, double tol_band) {
  AsymptoticReport r;
  r.side = side > 0 ? 1 : -1;
  r.regime = Location::kAtZero;
  r.quantity = "h_q(x) / h(x)";
  r.tol_band = tol_band;
  const double mag = std::max(std::abs(predicted.c_plus), std::abs(predicted.c_minus));
  if (std::abs(predicted.side(r.side)) <= 1e-12 * mag) {
    throw NotApplicable("the coefficient on this side is 0, so h_q / h has no limit claim");
  }
  r.predicted = 1.0;
  r.scale = 1.0;
  const auto xs = ordered(grid, r.regime);
  const auto h = h_values(ev, r.side, xs, 0.0, cfg);
  const auto hq = h_values(ev, r.side, xs, q, cfg);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(h[i].value > h[i].error_estimate)) {
      throw DegenerateResolvent("h(" + num(r.side * xs[i]) + ") is not resolved from zero");
    }
    const double ratio = hq[i].value / h[i].value;
    const double err = std::abs(ratio) * (h[i].error_estimate / h[i].value) + hq[i].error_estimate / h[i].value;
    r.points.push_back({r.side * xs[i], h[i].value, ratio, err});
  }
  finalize(r);
  return r;
}

nlohmann::json to_json(const AsymptoticReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const AsymptoticPoint& p : r.points) {
    pts.push_back({{"x", p.x}, {"h", p.h}, {"cHat", p.c_hat}, {"errorEstimate", p.error_estimate}});
  }
  return {{"quantity", r.quantity},
          {"side", r.side > 0 ? "plus" : "minus"},
          {"regime", r.regime == Location::kAtZero ? "origin" : "infinity"},
          {"predicted", r.predicted},
          {"scale", r.scale},
          {"tolBand", r.tol_band},
          {"converged", r.converged},
          {"relDeviationAtFinest", r.rel_deviation_at_finest},
          {"points", pts}};
}

void write_report_csv(std::ostream& out, const AsymptoticReport& r) {
  out << "x,h,c_hat,error_estimate\n";
  for (const AsymptoticPoint& p : r.points) {
    out << format_double(p.x) << ',' << format_double(p.h) << ',' << format_double(p.c_hat) << ','
        << format_double(p.error_estimate) << '\n';
  }
}

}  // namespace levy
