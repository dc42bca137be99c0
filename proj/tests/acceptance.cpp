// End-to-end acceptance checks. One line per criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "levy/asymptotics.hpp"
#include "levy/errors.hpp"
#include "levy/probes.hpp"
#include "levy/process.hpp"
#include "levy/resolvent.hpp"
#include "levy/special.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kCalphaQuadTol = 1e-10;
constexpr double kCalphaExactTol = 1e-12;
constexpr double kBrownianTol = 1e-6;
constexpr double kStableTol = 1e-5;
constexpr double kTransferTol = 0.01;
constexpr double kExampleBand = 0.05;
constexpr double kRatioBand = 0.05;
constexpr double kGaussianBand = 0.02;
constexpr double kZeroDecay = 0.1;
constexpr double kSmallLambdaTol = 0.01;
constexpr double kIdentityTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (note.size() < 400) note += (note.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome special_constants() {
  Outcome o;
  double worst = 0.0;
  for (double a : {1.1, 1.5, 1.9, 2.5, 2.9}) {
    const double r = rel(c_alpha(a), oracle::c_alpha_brute_force(a));
    worst = std::max(worst, r);
    o.require(r <= kCalphaQuadTol, fmt("C_%.2g off quadrature by %.2e", a, r));
  }
  o.require(std::abs(c_alpha(2.0) - 0.5) <= kCalphaExactTol, "C_2");
  o.require(std::abs(c_alpha(1.5) - std::sqrt(2.0 / kPi)) <= kCalphaExactTol, "C_1.5");
  if (o.pass) o.note = fmt("worst relative gap to quadrature %.2e", worst);
  return o;
}

Outcome brownian_oracle() {
  Outcome o;
  const auto bm = ExponentEvaluator::brownian(0.5, 0.0);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-18;
  double worst = 0.0;
  for (double q : {0.5, 2.0}) {
    for (double m : {0.01, 0.1, 1.0, 10.0}) {
      for (double x : {m, -m}) {
        const double k = std::sqrt(2.0 * q);
        const double r = rel(eval_r_q(bm, q, x, cfg).value, std::exp(-k * std::abs(x)) / k);
        worst = std::max(worst, r);
        o.require(r <= kBrownianTol, fmt("r_q(%g) off by %.2e", x, r));
      }
    }
  }
  for (double m : {0.01, 0.1, 1.0, 10.0}) {
    for (double x : {m, -m}) {
      const double r = rel(eval_h(bm, x, cfg).value, std::abs(x));
      worst = std::max(worst, r);
      o.require(r <= kBrownianTol, fmt("h(%g) off by %.2e", x, r));
    }
  }
  const auto c = gaussian_coeff_c_pm(bm);
  o.require(c.c_plus == 1.0 && c.c_minus == 1.0, "Gaussian pair is not exactly (1, 1)");
  if (o.pass) o.note = fmt("worst relative error %.2e; Gaussian pair (1, 1)", worst);
  return o;
}

Outcome stable_closed_form() {
  Outcome o;
  double worst = 0.0;
  double worst_spread = 0.0;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const double tan_half = std::tan(0.5 * kPi * alpha);
    for (double beta : {-0.5, 0.0, 0.5}) {
      const auto ev = ExponentEvaluator::stable(1.0, -beta * tan_half, alpha);
      for (int side : {1, -1}) {
        const double c = (1.0 - beta * side) /
                         ((1.0 + beta * beta * tan_half * tan_half) * 2.0 * std::tgamma(alpha) *
                          -std::cos(0.5 * kPi * alpha));
        double lo = kInf, hi = -kInf;
        for (double m : {0.01, 1.0, 100.0}) {
          const double h = eval_h(ev, side * m).value;
          const double r = rel(h, c * std::pow(m, alpha - 1.0));
          worst = std::max(worst, r);
          o.require(r <= kStableTol, fmt("alpha %.2g: h off by %.2e", alpha, r));
          const double c_hat = h / std::pow(m, alpha - 1.0);
          lo = std::min(lo, c_hat);
          hi = std::max(hi, c_hat);
        }
        const double spread = (hi - lo) / std::abs(hi);
        worst_spread = std::max(worst_spread, spread);
        o.require(spread <= kStableTol, fmt("alpha %.2g: c_hat spread %.2e", alpha, spread));
      }
    }
  }
  if (o.pass) o.note = fmt("worst relative error %.2e, worst c_hat spread %.2e", worst, worst_spread);
  return o;
}

Outcome transfer_at_infinity() {
  Outcome o;
  const double kp = 1.0, km = 2.0, alpha = 1.5, l = 1e4;
  const auto ev = ExponentEvaluator::numeric({0.0, strictly_stable_drift(kp, km, alpha), StableDensity{kp, km, alpha}});
  const auto v = ev.evaluate(l);
  const double norm = std::pow(l, alpha) * (kp + km);
  const double theta_ratio = v.theta.value / norm / (kPi * c_alpha(2.5));
  const double omega_ratio = v.omega.value / norm / ((kp - km) / (kp + km) * kPi * c_alpha(1.5) / 1.5);
  o.require(std::abs(theta_ratio - 1.0) <= kTransferTol, fmt("theta ratio %.6f", theta_ratio));
  o.require(std::abs(omega_ratio - 1.0) <= kTransferTol, fmt("omega ratio %.6f", omega_ratio));
  if (o.pass) o.note = fmt("theta ratio %.8f, omega ratio %.8f", theta_ratio, omega_ratio);
  return o;
}

Outcome tempered_end_to_end() {
  Outcome o;
  const LevyProcessSpec spec{0.0, 0.0, TemperedPolynomial{2.0, 1.0, 1.5, 1.0}};
  const auto ev = ExponentEvaluator::numeric(spec);
  QuadratureConfig cfg;
  o.require(check_A(ev, 1.0, cfg, false).passed(), "probe (A) did not pass");
  o.require(check_T(ev, cfg, false).passed(), "probe (T) did not pass");
  if (!o.pass) return o;
  const auto rv = origin_rv_of(spec);
  if (!rv) {
    o.require(false, "no origin law for the tempered spec");
    return o;
  }
  std::string summary;
  for (int side : {1, -1}) {
    auto rep = empirical_coefficient_estimate(ev, *rv, side, {1e-3, 1e-4}, cfg, kExampleBand);
    const double dev = rep.rel_deviation_at_finest;
    o.require(rep.points.back().x == side * 1e-4, "finest point is not 1e-4");
    o.require(std::abs(dev) <= kExampleBand, fmt("side %+.0f deviation %.4f", side, dev));
    summary += std::string(side > 0 ? "plus" : "; minus") + fmt(" c_hat %.5f", rep.points.back().c_hat) +
               fmt(" vs %.5f", rep.predicted);
  }
  if (o.pass) o.note = summary;
  return o;
}

Outcome hq_over_h() {
  Outcome o;
  std::string summary;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto ev = ExponentEvaluator::stable(1.0, 0.0, alpha);
    RegularVariationSpec rv;
    rv.index = alpha;
    const auto rep = ratio_hq_h(ev, 1e-2, coeff_c_pm(rv), 1, {1e-1, 1e-2, 1e-3}, {}, kRatioBand);
    const auto& p = rep.points;
    o.require(p[2].c_hat >= 1.0 - kRatioBand && p[2].c_hat <= 1.0 + kRatioBand,
              fmt("alpha %.2g ratio %.5f", alpha, p[2].c_hat));
    const double d0 = std::abs(p[0].c_hat - 1), d1 = std::abs(p[1].c_hat - 1), d2 = std::abs(p[2].c_hat - 1);
    o.require(d0 > d1 && d1 > d2, fmt("alpha %.2g deviation not decreasing", alpha));
    summary += std::string(summary.empty() ? "" : ", ") + fmt("alpha %.2g", alpha) + fmt(" -> %.6f", p[2].c_hat);
  }
  if (o.pass) o.note = "ratio at 1e-3: " + summary;
  return o;
}

Outcome gaussian_asymmetric() {
  Outcome o;
  const auto ev = ExponentEvaluator::brownian(0.5, 1.0);
  const auto c = gaussian_coeff_c_pm(ev);
  o.require(c.c_plus == 0.0 && c.c_minus == 2.0, fmt("predicted (%.3g, %.3g)", c.c_plus, c.c_minus));
  const double minus = eval_h(ev, -1e-3).value / 1e-3;
  const double plus = eval_h(ev, 1e-3).value / 1e-3;
  o.require(std::abs(minus / 2.0 - 1.0) <= kGaussianBand, fmt("h(-1e-3)/1e-3 = %.6f", minus));
  o.require(plus <= kZeroDecay, fmt("h(1e-3)/1e-3 = %.6f", plus));
  if (o.pass) o.note = fmt("h(-x)/x = %.6f, h(x)/x = %.3e at x = 1e-3", minus, plus);
  return o;
}

Outcome small_lambda() {
  Outcome o;
  const LevyProcessSpec spec{0.0, 0.0, ExponentialDensity{1.0}};
  const auto ev = ExponentEvaluator::numeric(spec);
  const double l = 1e-3;
  const auto v = ev.evaluate(l);
  const double omega_ratio = v.omega.value / l;
  const double theta_ratio = v.theta.value / (l * l);
  const double target = -2.0 / std::exp(1.0);
  o.require(rel(omega_ratio, target) <= kSmallLambdaTol, fmt("omega/l = %.6f", omega_ratio));
  o.require(rel(theta_ratio, 1.0) <= kSmallLambdaTol, fmt("theta/l^2 = %.6f", theta_ratio));
  const auto iv = exponent_rv_at_zero(spec, SmallLambdaCase::kFirstMomentTail);
  const auto ii = exponent_rv_at_zero(spec, SmallLambdaCase::kSecondMoment);
  o.require(iv.omega && rel(iv.omega->coefficient, target) <= kSmallLambdaTol, "first-moment law");
  o.require(ii.theta && rel(ii.theta->coefficient, 1.0) <= kSmallLambdaTol, "second-moment law");
  if (o.pass) o.note = fmt("omega/l = %.6f, theta/l^2 = %.6f", omega_ratio, theta_ratio);
  return o;
}

Outcome invariants() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int draws = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng) < 0.3 ? u(rng) : 0.0;
    const double b = 4.0 * u(rng) - 2.0;
    MeasureSpec m;
    switch (i % 4) {
      case 0:
        m = StableDensity{u(rng), u(rng), 1.05 + 0.9 * u(rng)};
        break;
      case 1:
        m = TemperedPolynomial{u(rng), u(rng), 1.05 + 0.9 * u(rng), 0.1 + 1.8 * u(rng)};
        break;
      case 2:
        m = ExponentialDensity{0.1 + 3.0 * u(rng)};
        break;
      default: {
        CustomDensity c;
        c.plus.push_back({u(rng), -1.0 - 1.5 * u(rng), 0.0, 1.0 + 3.0 * u(rng), 0.0});
        c.minus.push_back({u(rng), 0.0, 0.0, kInf, 0.5 + u(rng)});
        m = c;
      }
    }
    const auto ev = ExponentEvaluator::numeric({a, b, m});
    const double l = std::pow(10.0, -3.0 + 6.0 * u(rng));
    const auto p = ev.evaluate(l);
    const auto n = ev.evaluate(-l);
    o.require(p.theta.value == n.theta.value, fmt("theta not even at %.3g", l));
    o.require(p.omega.value == -n.omega.value, fmt("omega not odd at %.3g", l));
    o.require(p.theta.value >= 0.0, fmt("theta negative at %.3g", l));
    ++draws;
  }

  std::vector<ExponentEvaluator> suite;
  for (double alpha : {1.2, 1.5, 1.8}) {
    for (double beta : {-0.5, 0.0, 0.5}) suite.push_back(ExponentEvaluator::stable(1.0, -beta * std::tan(0.5 * kPi * alpha), alpha));
  }
  suite.push_back(ExponentEvaluator::brownian(0.5, 0.0));
  suite.push_back(ExponentEvaluator::brownian(0.5, 1.0));
  suite.push_back(ExponentEvaluator::numeric({0.0, 0.0, TemperedPolynomial{2.0, 1.0, 1.5, 1.0}}));
  for (const auto& ev : suite) {
    o.require(eval_h(ev, 0.0).value == 0.0, "h(0) != 0");
    for (double x : {-1.0, -1e-2, 1e-2, 1.0}) o.require(eval_h(ev, x).value >= 0.0, fmt("h(%g) < 0", x));
  }

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    RegularVariationSpec rv;
    rv.index = 1.01 + 0.98 * u(rng);
    rv.c_theta = 0.05 + 5.0 * u(rng);
    rv.c_omega = 10.0 * u(rng) - 5.0;
    const auto c = coeff_c_pm(rv);
    const double sum = 2.0 * c_alpha(rv.index) * rv.c_theta / (rv.c_theta * rv.c_theta + rv.c_omega * rv.c_omega);
    const double r = rel(c.c_plus + c.c_minus, sum);
    worst = std::max(worst, r);
    o.require(r <= kIdentityTol, fmt("coefficient sum off by %.2e", r));

    const double kp = u(rng) + 0.01, km = u(rng) + 0.01;
    const auto k = [](double v) { return SlowlyVaryingFn::constant(v, Location::kAtZero); };
    const auto ab = density_to_exponent_rv(rv.index, k(kp), k(km));
    const auto ba = density_to_exponent_rv(rv.index, k(km), k(kp));
    o.require(ab.c_omega == -ba.c_omega && ab.c_theta == ba.c_theta, "K-swap symmetry");
  }
  if (o.pass) {
    o.note = fmt("%.0f exponent draws, %.0f suite specs, ", draws, static_cast<double>(suite.size())) +
             fmt("worst coefficient-sum gap %.2e", worst);
  }
  return o;
}

Outcome cli_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path();
  const auto spec = dir / "levy_acceptance_tempered.json";
  std::ofstream(spec) << R"({"a": 0, "b": 0, "measure": {"kind": "tempered", "kPlus": 2, "kMinus": 1, "alpha": 1.5, "betaTail": 1}})";
  std::string outputs[2];
  const char* threads[2] = {"1", "3"};
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("levy_acceptance_run" + std::to_string(run) + ".csv");
    const std::string cmd = std::string("LEVY_RESOLVENT_THREADS=") + threads[run] + " '" + LEVY_CLI_PATH +
                            "' --spec '" + spec.string() + "' --command h-table --grid 0.01:1:1 --symmetric --q 1 --out '" +
                            out.string() + "'";
    const int status = std::system(cmd.c_str());
    o.require(status == 0, "CLI run failed");
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    outputs[run] = buf.str();
  }
  o.require(!outputs[0].empty(), "empty CSV");
  o.require(outputs[0] == outputs[1], "CSV differs between runs");
  if (o.pass) o.note = fmt("%.0f identical bytes across two runs (thread cap 1 and 3)", static_cast<double>(outputs[0].size()));
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"special constants", special_constants},
      {"Brownian oracle", brownian_oracle},
      {"stable closed form", stable_closed_form},
      {"exponent transfer at infinity", transfer_at_infinity},
      {"tempered density end to end", tempered_end_to_end},
      {"h_q / h near the origin", hq_over_h},
      {"asymmetric Gaussian coefficients", gaussian_asymmetric},
      {"small-lambda laws", small_lambda},
      {"invariant suites", invariants},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s\n", index, o.pass ? "PASS" : "FAIL", name, o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
