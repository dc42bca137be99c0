#include "levy/resolvent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "levy/errors.hpp"
#include "levy/probes.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureConfig effective(const ExponentEvaluator& ev, const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.rel_tol = std::max(cfg.rel_tol, 100.0 * ev.relative_noise());
  return c;
}

void require_A(const ExponentEvaluator& ev, double q, const QuadratureConfig& cfg) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("q must be positive and finite");
  if (ev.spec().a > 0.0) return;
  ProbeReport r = check_A(ev, q, cfg, false);
  if (r.status == ProbeStatus::kFail) throw AssumptionViolation('A', r.detail);
}

struct Pieces {
  // (q + theta) / |q + Psi|^2 and omega / |q + Psi|^2
  RealFn re;
  RealFn im;
};

Pieces integrands(const ExponentEvaluator& ev, double q) {
  return {[&ev, q](double l) {
            const ExponentValue v = ev.evaluate(l);
            const double a = q + v.theta.value;
            const double b = v.omega.value;
            return a / (a * a + b * b);
          },
          [&ev, q](double l) {
            const ExponentValue v = ev.evaluate(l);
            const double a = q + v.theta.value;
            const double b = v.omega.value;
            return b / (a * a + b * b);
          }};
}

ResolventValue finish(IntegralResult r, bool nonnegative) {
  ResolventValue out;
  out.value = r.value / kPi;
  out.error_estimate = r.error_estimate / kPi;
  out.truncation_point = r.truncation_point;
  out.segments = r.segments_used;
  out.estimated = r.estimated;
  if (nonnegative && out.value < 0.0) {
    if (out.value < -2.0 * out.error_estimate) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "negative result %.6g beyond its error estimate %.3g", out.value,
                    out.error_estimate);
      throw QuadratureFailure(buf);
    }
    out.value = 0.0;
    out.clipped = true;
  }
  return out;
}

// (1/pi) int [K(lambda x) re - sin(lambda x) im] for K = cos (r_q) or 1 - cos (h_q, h).
ResolventValue fourier_pair(const ExponentEvaluator& ev, double q, double x, Kernel k, const QuadratureConfig& cfg) {
  const QuadratureConfig c = effective(ev, cfg);
  const Pieces p = integrands(ev, q);
  FourierOptions opts;
  opts.frontier = ev.frontier();
  const IntegralResult even = integrate_fourier_tail(p.re, k, x, 0.0, c, opts);
  IntegralResult total = even;
  if (x != 0.0) {
    const IntegralResult odd = integrate_fourier_tail(p.im, Kernel::kSin, x, 0.0, c, opts);
    total = combine(even, odd, -1.0);
  }
  return finish(total, true);
}

}  // namespace

ResolventValue eval_r_q(const ExponentEvaluator& ev, double q, double x, const QuadratureConfig& cfg) {
  require_A(ev, q, cfg);
  return fourier_pair(ev, q, x, x == 0.0 ? Kernel::kNone : Kernel::kCos, cfg);
}

ResolventValue eval_h_q(const ExponentEvaluator& ev, double q, double x, const QuadratureConfig& cfg) {
  require_A(ev, q, cfg);
  if (x == 0.0) return {};
  return fourier_pair(ev, q, x, Kernel::kOneMinusCos, cfg);
}

ResolventValue eval_h(const ExponentEvaluator& ev, double x, const QuadratureConfig& cfg) {
  const ProbeReport t = check_T(ev, cfg, false);
  if (!t.passed()) {
    throw AssumptionViolation('T', std::string(to_string(t.status)) + ": " + t.detail);
  }
  if (x == 0.0) return {};
  return fourier_pair(ev, 0.0, x, Kernel::kOneMinusCos, cfg);
}

ResolventValue hitting_laplace_ratio(const ExponentEvaluator& ev, double q, double x, const QuadratureConfig& cfg) {
  const ResolventValue r0 = eval_r_q(ev, q, 0.0, cfg);
  if (!(r0.value > r0.error_estimate)) {
    throw DegenerateResolvent("r_q(0) is not resolved from zero");
  }
  if (x == 0.0) {
    ResolventValue one = r0;
    one.value = 1.0;
    one.error_estimate = 0.0;
    return one;
  }
  const ResolventValue rx = eval_r_q(ev, q, -x, cfg);
  ResolventValue out = rx;
  out.value = rx.value / r0.value;
  out.error_estimate = out.value * (r0.error_estimate / r0.value) + rx.error_estimate / r0.value;
  out.segments = rx.segments + r0.segments;
  out.estimated = rx.estimated || r0.estimated;
  out.truncation_point = std::max(rx.truncation_point, r0.truncation_point);
  return out;
}

unsigned resolvent_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LEVY_RESOLVENT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

std::vector<ResolventValue> evaluate_grid(const ExponentEvaluator& ev, ResolventQuantity what,
                                          const std::vector<GridPoint>& points, const QuadratureConfig& cfg,
                                          unsigned threads) {
  std::vector<ResolventValue> out(points.size());
  if (points.empty()) return out;
  if (threads == 0) threads = resolvent_threads();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = points.size();
  std::mutex lock;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const GridPoint& p = points[i];
        if (what == ResolventQuantity::kRq) {
          out[i] = eval_r_q(ev, p.q, p.x, cfg);
        } else {
          out[i] = p.q == 0.0 ? eval_h(ev, p.x, cfg) : eval_h_q(ev, p.q, p.x, cfg);
        }
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        // Report the failure of the lowest index so the outcome is deterministic.
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(std::ostream& out, const std::vector<GridPoint>& points, const std::vector<ResolventValue>& values) {
  out << "q,x,value,error_estimate,truncation_point,segments\n";
  for (std::size_t i = 0; i < points.size() && i < values.size(); ++i) {
    out << format_double(points[i].q) << ',' << format_double(points[i].x) << ',' << format_double(values[i].value)
        << ',' << format_double(values[i].error_estimate) << ',' << format_double(values[i].truncation_point) << ','
        << values[i].segments << '\n';
  }
}

}  // namespace levy
