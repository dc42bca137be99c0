#include "levy/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <string>

#include "levy/errors.hpp"

namespace levy {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK dqk21).
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.14887433898163121088482600112972,
    0.0};
constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.03255816230796472747881897245939,
    0.05475589657435199603138130024458,  0.07503967481091995276704314091619,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double floor = 0.0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double eval_checked(const RealFn& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw QuadratureFailure("integrand is not finite at x = " + num(x));
  }
  return v;
}

Panel gauss_kronrod_21(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  const double fc = eval_checked(f, center);
  double res_gauss = 0.0;
  double res_kronrod = kKronrodWeights[10] * fc;
  double res_abs = std::abs(res_kronrod);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kKronrodNodes[jtw];
    const double v1 = eval_checked(f, center - dx);
    const double v2 = eval_checked(f, center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    res_gauss += kGaussWeights[j] * (v1 + v2);
    res_kronrod += kKronrodWeights[jtw] * (v1 + v2);
    res_abs += kKronrodWeights[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kKronrodNodes[jtwm1];
    const double v1 = eval_checked(f, center - dx);
    const double v2 = eval_checked(f, center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    res_kronrod += kKronrodWeights[jtwm1] * (v1 + v2);
    res_abs += kKronrodWeights[jtwm1] * (std::abs(v1) + std::abs(v2));
  }
  const double mean = 0.5 * res_kronrod;
  double res_asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  res_asc *= scale;
  res_abs *= scale;
  double err = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  const double floor = 50.0 * kEps * res_abs;
  err = std::max(err, floor);
  return Panel{a, b, res_kronrod * half, err, res_abs, floor};
}

bool by_error(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

// Power law fitted at a sampling frontier; replaces g beyond it.
class FrontierExtension {
 public:
  FrontierExtension(const RealFn& g, double frontier) : g_(g), frontier_(frontier) {}

  double operator()(double x) const {
    if (x <= frontier_) return g_(x);
    fit_once();
    used_ = true;
    return fit_.sign == 0 ? 0.0 : fit_(x);
  }

  bool used() const { return used_; }
  double frontier() const { return frontier_; }

  /// Bound on the error made by the model, given the magnitude of the
  /// integral carried beyond the frontier.
  double model_error(double carried) const {
    if (!used_) return 0.0;
    return std::abs(carried) * uncertainty_;
  }

  const PowerFit& fit() const {
    fit_once();
    return fit_;
  }

 private:
  void fit_once() const {
    if (fitted_) return;
    fitted_ = true;
    const double lo = frontier_ / 10.0;
    const double mid = frontier_ / std::sqrt(10.0);
    fit_ = fit_power_law(g_, lo, frontier_, 16);
    if (!fit_.valid()) {
      const double probe = g_(frontier_);
      if (probe == 0.0) {
        fit_.sign = 0;
        uncertainty_ = 0.0;
        return;
      }
      throw QuadratureFailure("integrand has no power-law decay at the sampling frontier " +
                              num(frontier_));
    }
    const PowerFit low = fit_power_law(g_, lo, mid, 8);
    const PowerFit high = fit_power_law(g_, mid, frontier_, 8);
    const double dp = (low.valid() && high.valid()) ? std::abs(high.exponent - low.exponent) : 1.0;
    uncertainty_ = dp + fit_.max_residual;
  }

  const RealFn& g_;
  double frontier_;
  mutable bool fitted_ = false;
  mutable bool used_ = false;
  mutable PowerFit fit_;
  mutable double uncertainty_ = 0.0;
};

IntegralResult to_result(const std::vector<Panel>& panels, double b, const QuadratureConfig& cfg) {
  IntegralResult out;
  double l1 = 0.0;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.error_estimate += p.error;
    out.rounding_floor += p.floor;
    l1 += p.l1;
  }
  out.segments_used = static_cast<int>(panels.size());
  out.truncation_point = b;
  out.converged = out.error_estimate <= tolerance_target(cfg, out.value, l1);
  return out;
}

IntegralResult singular_impl(const RealFn& f, double origin_order, double upper,
                             const QuadratureConfig& cfg) {
  if (!(origin_order > -1.0)) {
    throw NonIntegrableMeasure("integrand behaves like x^" + num(origin_order) +
                               " at the origin and is not integrable");
  }
  if (!(upper > 0.0)) throw DomainError("integrate_singular: upper limit must be positive");
  if (origin_order >= 1.0) return integrate_adaptive(f, 0.0, upper, cfg);
  const double m = 2.0 / (1.0 + origin_order);
  const RealFn stretched = [&](double t) {
    const double x = upper * std::pow(t, m);
    if (x < 1e-300) return 0.0;
    return f(x) * m * upper * std::pow(t, m - 1.0);
  };
  IntegralResult r = integrate_adaptive(stretched, 0.0, 1.0, cfg);
  r.truncation_point = upper;
  return r;
}

// int_lo^hi of f where lo may be the (possibly singular) origin.
IntegralResult head_region(const RealFn& f, double lo, double hi, double scale,
                           std::optional<double> origin_order, const QuadratureConfig& cfg) {
  if (hi <= lo) return IntegralResult{};
  if (lo > 0.0) return integrate_log_spaced(f, lo, hi, cfg);
  const double split = std::min(hi, 1e-4 * scale);
  double order = 1.0;
  if (origin_order) {
    order = *origin_order;
  } else {
    const PowerFit fit = fit_power_law(f, 1e-6 * scale, 1e-4 * scale, 16);
    if (fit.valid()) order = fit.exponent;
  }
  IntegralResult near = singular_impl(f, order, split, cfg);
  if (split >= hi) return near;
  return combine(near, integrate_log_spaced(f, split, hi, cfg));
}

IntegralResult semi_infinite_impl(const RealFn& f, double a, const QuadratureConfig& cfg,
                                  double frontier) {
  if (!(a > 0.0)) throw DomainError("integrate_semi_infinite: lower limit must be positive");
  const double end = std::min(frontier, a * 1e12);
  IntegralResult sampled;
  if (end > a) {
    const double span = std::log(end / a);
    const RealFn logf = [&](double s) {
      const double y = a * std::exp(s);
      return f(y) * y;
    };
    std::vector<double> cuts;
    for (double s = std::log(10.0); s < span; s += std::log(10.0)) cuts.push_back(s);
    sampled = integrate_adaptive(logf, 0.0, span, cfg, cuts);
  }
  sampled.truncation_point = std::max(end, a);

  const double fit_hi = std::max(end, a);
  const PowerFit fit = fit_power_law(f, fit_hi / 10.0, fit_hi, 16);
  double tail = 0.0;
  double tail_err = 0.0;
  if (!fit.valid()) {
    double mag = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double y = fit_hi / 10.0 * std::pow(10.0, i / 15.0);
      mag = std::max(mag, std::abs(f(y)) * y);
    }
    tail_err = mag;
  } else {
    const double p = -fit.exponent;
    if (p <= 1.0) {
      throw SlowDecay("integrand decays like x^" + num(fit.exponent) +
                      ", too slowly to integrate to infinity");
    }
    const double from = std::max(end, a);
    tail = fit(from) * from / (p - 1.0);
    const double mid = fit_hi / std::sqrt(10.0);
    const PowerFit low = fit_power_law(f, fit_hi / 10.0, mid, 8);
    const PowerFit high = fit_power_law(f, mid, fit_hi, 8);
    const double dp = (low.valid() && high.valid()) ? std::abs(high.exponent - low.exponent) : 1.0;
    tail_err = std::abs(tail) * (dp / (p - 1.0) + fit.max_residual) + 4.0 * kEps * std::abs(tail);
  }
  IntegralResult out = sampled;
  out.value += tail;
  out.error_estimate += tail_err;
  out.rounding_floor += 4.0 * kEps * std::abs(tail);
  const double target = tolerance_target(cfg, out.value, std::abs(sampled.value) + std::abs(tail));
  out.estimated = std::abs(tail) > 1e-3 * target;
  out.converged = sampled.converged && out.error_estimate <= target;
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("QuadratureConfig: rel_tol and abs_tol must be positive");
  }
  if (max_segments < 16) throw DomainError("QuadratureConfig: max_segments must be >= 16");
  if (acceleration_order < 1) throw DomainError("QuadratureConfig: acceleration_order must be >= 1");
  if (truncation_budget && !(*truncation_budget > 0.0)) {
    throw DomainError("QuadratureConfig: truncation_budget must be positive");
  }
}

IntegralResult combine(const IntegralResult& a, const IntegralResult& b, double sign) {
  IntegralResult out;
  out.value = a.value + sign * b.value;
  out.error_estimate = a.error_estimate + b.error_estimate;
  out.rounding_floor = a.rounding_floor + b.rounding_floor;
  out.segments_used = a.segments_used + b.segments_used;
  out.truncation_point = std::max(a.truncation_point, b.truncation_point);
  out.converged = a.converged && b.converged;
  out.estimated = a.estimated || b.estimated;
  return out;
}

double tolerance_target(const QuadratureConfig& cfg, double value, double l1_norm) {
  return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(value), 50.0 * kEps * l1_norm});
}

bool within_tolerance(const IntegralResult& r, const QuadratureConfig& cfg, double l1_norm) {
  return r.error_estimate <= std::max(tolerance_target(cfg, r.value, l1_norm), 2.0 * r.rounding_floor);
}

double PowerFit::operator()(double x) const {
  return sign * std::exp(log_coefficient + exponent * std::log(x));
}

PowerFit fit_power_law(const RealFn& f, double lo, double hi, int samples) {
  PowerFit fit;
  if (!(lo > 0.0) || !(hi > lo) || samples < 2) return fit;
  std::vector<double> lx(samples);
  std::vector<double> ly(samples);
  int sign = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    const double v = f(x);
    if (!std::isfinite(v) || v == 0.0) return fit;
    const int s = v > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) return fit;
    sign = s;
    lx[i] = std::log(x);
    ly[i] = std::log(std::abs(v));
  }
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < samples; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= samples;
  my /= samples;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int i = 0; i < samples; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.log_coefficient = my - fit.exponent * mx;
  fit.sign = sign;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    worst = std::max(worst, std::abs(ly[i] - (fit.log_coefficient + fit.exponent * lx[i])));
  }
  fit.max_residual = worst;
  return fit;
}

IntegralResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureConfig& cfg,
                                  std::span<const double> breakpoints) {
  if (a == b) {
    IntegralResult empty;
    empty.truncation_point = b;
    return empty;
  }
  if (b < a) {
    IntegralResult r = integrate_adaptive(f, b, a, cfg, breakpoints);
    r.value = -r.value;
    return r;
  }
  std::vector<double> cuts{a};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(bp);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> heap;
  std::vector<Panel> frozen;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gauss_kronrod_21(f, cuts[i], cuts[i + 1]);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push_back(p);
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  const auto budget = static_cast<std::size_t>(cfg.max_segments);
  while (!heap.empty() && error > tolerance_target(cfg, value, l1) &&
         heap.size() + frozen.size() < budget) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = gauss_kronrod_21(f, worst.a, mid);
    const Panel right = gauss_kronrod_21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
  heap.insert(heap.end(), frozen.begin(), frozen.end());
  return to_result(heap, b, cfg);
}

IntegralResult integrate_log_spaced(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
  if (!(a > 0.0) || b <= a) return integrate_adaptive(f, a, b, cfg);
  std::vector<double> cuts;
  for (double c = std::pow(10.0, std::ceil(std::log10(a))); c < b; c *= 10.0) cuts.push_back(c);
  return integrate_adaptive(f, a, b, cfg, cuts);
}

IntegralResult integrate_singular(const RealFn& f, double origin_order, double upper,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  IntegralResult r = singular_impl(f, origin_order, upper, cfg);
  if (!r.converged) {
    throw QuadratureFailure("integrate_singular: error estimate " + num(r.error_estimate) +
                            " above tolerance");
  }
  return r;
}

IntegralResult integrate_semi_infinite(const RealFn& f, double a, const QuadratureConfig& cfg,
                                       double frontier) {
  cfg.validate();
  return semi_infinite_impl(f, a, cfg, frontier);
}

IntegralResult integrate_oscillatory(const RealFn& f, Kernel kernel, double w, double a,
                                     const QuadratureConfig& cfg, double frontier) {
  if (kernel != Kernel::kCos && kernel != Kernel::kSin) {
    throw DomainError("integrate_oscillatory: kernel must be cos or sin");
  }
  if (!(w > 0.0)) throw DomainError("integrate_oscillatory: frequency must be positive");
  const FrontierExtension ext(f, frontier);
  const bool is_cos = kernel == Kernel::kCos;
  const RealFn integrand = [&](double y) {
    const double v = ext(y);
    if (v == 0.0) return 0.0;
    return v * (is_cos ? std::cos(w * y) : std::sin(w * y));
  };
  const double period = std::numbers::pi / w;
  const double shift = is_cos ? 0.5 : 0.0;
  const double first_zero = (std::floor(a / period - shift) + 1.0 + shift) * period;

  QuadratureConfig seg_cfg = cfg;
  seg_cfg.rel_tol = std::max(cfg.rel_tol * 0.1, 10.0 * kEps);
  seg_cfg.abs_tol = std::numeric_limits<double>::min();
  seg_cfg.max_segments = 200;

  IntegralResult out = integrate_adaptive(integrand, a, first_zero, seg_cfg);
  double sum = out.value;
  double l1 = std::abs(out.value);
  double seg_err = out.error_estimate;
  double seg_floor = out.rounding_floor;
  const std::size_t window = static_cast<std::size_t>(2 * cfg.acceleration_order + 1);
  WynnEpsilon wynn(std::max<std::size_t>(window, 5));
  wynn.push(sum);
  double prev_term = kInf;
  int passes = 0;
  bool done = false;
  double result = sum;
  double extrap_err = kInf;
  int j = 0;
  for (; j < cfg.max_segments; ++j) {
    const double lo = first_zero + j * period;
    const double hi = lo + period;
    const IntegralResult term = integrate_adaptive(integrand, lo, hi, seg_cfg);
    sum += term.value;
    l1 += std::abs(term.value);
    seg_err += term.error_estimate;
    seg_floor += term.rounding_floor;
    out.segments_used += term.segments_used;
    out.converged = out.converged && term.converged;
    out.truncation_point = hi;
    const double est = wynn.push(sum);
    const double target = std::max({cfg.abs_tol * 1e-3, cfg.truncation_target() * std::abs(est),
                                    16.0 * kEps * l1});
    if (std::abs(term.value) <= 0.01 * target && std::abs(prev_term) <= 0.01 * target) {
      result = sum;
      extrap_err = std::abs(term.value) + std::abs(prev_term);
      done = true;
      break;
    }
    prev_term = term.value;
    if (j + 1 >= cfg.acceleration_order && wynn.error() <= target) {
      if (++passes >= 2) {
        result = est;
        extrap_err = wynn.error();
        done = true;
        break;
      }
    } else {
      passes = 0;
    }
  }
  if (!done) {
    result = wynn.size() >= 3 ? wynn.estimate() : sum;
    extrap_err = std::isfinite(wynn.error()) ? wynn.error() : std::abs(sum);
    // Raw remainder bound: the tail of |f| past the last sampled point.
    const double last = out.truncation_point;
    const PowerFit fit = fit_power_law(f, last / 10.0, last, 16);
    if (fit.valid() && fit.exponent < -1.0) {
      extrap_err += 2.0 * std::abs(fit(last)) * last / (-fit.exponent - 1.0);
    }
    out.converged = false;
  }
  out.value = result;
  out.segments_used += j + 1;
  const double carried = ext.used() ? 2.0 * std::abs(ext.fit()(frontier)) / w : 0.0;
  out.error_estimate = seg_err + extrap_err + ext.model_error(carried);
  out.rounding_floor = seg_floor + 16.0 * kEps * l1;
  out.estimated = ext.used();
  if (ext.used()) out.truncation_point = frontier;
  return out;
}

IntegralResult integrate_fourier_tail(const RealFn& g, Kernel kernel, double x, double lambda0,
                                      const QuadratureConfig& cfg, const FourierOptions& opts) {
  cfg.validate();
  if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) {
    throw DomainError("integrate_fourier_tail: lambda0 must be finite and nonnegative");
  }
  if (!std::isfinite(x)) throw DomainError("integrate_fourier_tail: x must be finite");
  if (x == 0.0 && (kernel == Kernel::kSin || kernel == Kernel::kOneMinusCos)) return IntegralResult{};
  if (x == 0.0) kernel = Kernel::kNone;

  const FrontierExtension ext(g, opts.frontier);
  const RealFn gx = [&](double lambda) { return ext(lambda); };
  const double w = std::abs(x);

  QuadratureConfig sub = cfg;
  IntegralResult total;
  double l1 = 0.0;
  double carried = 0.0;
  // Sub-integrals are computed relative to their own size; when the pieces
  // cancel, retry with tolerances tightened to the size of the sum.
  for (int pass = 0; pass < 3; ++pass) {
    if (kernel == Kernel::kNone) {
      const double split = lambda0 > 0.0 ? std::max(lambda0, 1.0) : 1.0;
      IntegralResult head = head_region(gx, lambda0, split, 1.0, opts.origin_order, sub);
      IntegralResult tail = semi_infinite_impl(gx, split, sub, kInf);
      l1 = std::abs(head.value) + std::abs(tail.value);
      total = combine(head, tail);
      if (ext.used()) {
        const PowerFit& fit = ext.fit();
        const double p = -fit.exponent;
        carried = p > 1.0 ? std::abs(fit(opts.frontier)) * opts.frontier / (p - 1.0) : 0.0;
      }
    } else {
      const double period = std::numbers::pi / w;
      const double scale = std::min(1.0, 1.0 / w);
      if (kernel == Kernel::kOneMinusCos) {
        const double cut = 2.0 * period * (std::floor(lambda0 / (2.0 * period)) + 1.0);
        const RealFn near = [&](double lambda) {
          const double v = gx(lambda);
          if (v == 0.0) return 0.0;
          const double s = std::sin(0.5 * w * lambda);
          return 2.0 * s * s * v;
        };
        IntegralResult head = head_region(near, lambda0, cut, scale, opts.origin_order, sub);
        IntegralResult mean = semi_infinite_impl(gx, cut, sub, kInf);
        IntegralResult osc = integrate_oscillatory(gx, Kernel::kCos, w, cut, sub);
        l1 = std::abs(head.value) + std::abs(mean.value) + std::abs(osc.value);
        total = combine(combine(head, mean), osc, -1.0);
        if (ext.used()) {
          const PowerFit& fit = ext.fit();
          const double p = -fit.exponent;
          carried = p > 1.0 ? std::abs(fit(opts.frontier)) * opts.frontier / (p - 1.0) : 0.0;
        }
      } else {
        const bool is_cos = kernel == Kernel::kCos;
        const double shift = is_cos ? 0.5 : 0.0;
        const double first_zero = (std::floor(lambda0 / period - shift) + 1.0 + shift) * period;
        const RealFn near = [&](double lambda) {
          const double v = gx(lambda);
          if (v == 0.0) return 0.0;
          return v * (is_cos ? std::cos(w * lambda) : std::sin(w * lambda));
        };
        IntegralResult head = head_region(near, lambda0, first_zero, scale, opts.origin_order, sub);
        IntegralResult osc = integrate_oscillatory(gx, kernel, w, first_zero, sub);
        l1 = std::abs(head.value) + std::abs(osc.value);
        total = combine(head, osc);
        if (kernel == Kernel::kSin && x < 0.0) total.value = -total.value;
        if (ext.used()) carried = 2.0 * std::abs(ext.fit()(opts.frontier)) / w;
      }
    }
    if (within_tolerance(total, cfg, l1) || l1 == 0.0) break;
    const double ratio = std::abs(total.value) / l1;
    const double tighter = std::max(cfg.rel_tol * ratio * 0.25, 4.0 * kEps);
    if (tighter >= sub.rel_tol) break;
    sub.rel_tol = tighter;
    sub.truncation_budget = tighter / 10.0;
  }
  // Only the sampled part is held to the tolerance; the model error beyond the
  // frontier is reported but cannot be reduced by more work.
  const bool sampled_ok = within_tolerance(total, cfg, l1);
  total.error_estimate += ext.model_error(carried);
  if (ext.used()) {
    total.estimated = true;
    total.truncation_point = opts.frontier;
  }
  total.converged = within_tolerance(total, cfg, l1);
  if (!sampled_ok) {
    throw QuadratureFailure("Fourier integral at x = " + num(x) + " missed tolerance: error estimate " +
                            num(total.error_estimate) + " for value " + num(total.value) +
                            " (rounding floor " + num(total.rounding_floor) + ")");
  }
  return total;
}

double WynnEpsilon::push(double partial_sum) {
  ++count_;
  sums_.push_back(partial_sum);
  if (sums_.size() > window_) sums_.erase(sums_.begin());
  const std::size_t n = sums_.size();
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(sums_.begin(), sums_.end());
  double best = cur.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    bool ok = true;
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = cur[i + 1] - cur[i];
      if (d == 0.0 || std::abs(d) <= 4.0 * kEps * std::abs(cur[i + 1])) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / d;
      if (!std::isfinite(next[i])) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  history_.push_back(best);
  estimate_ = best;
  if (history_.size() >= 3) {
    const std::size_t h = history_.size();
    error_ = std::abs(best - history_[h - 2]) + std::abs(best - history_[h - 3]) +
             5.0 * kEps * std::abs(best);
  }
  return best;
}

}  // namespace levy
