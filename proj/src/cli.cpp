#include "levy/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "levy/asymptotics.hpp"
#include "levy/errors.hpp"
#include "levy/probes.hpp"
#include "levy/process.hpp"
#include "levy/resolvent.hpp"
#include "levy/spec_io.hpp"

namespace levy::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"exponent", Command::kExponent},       {"resolvent", Command::kResolvent},
    {"h-table", Command::kHTable},          {"asymptotics", Command::kAsymptotics},
    {"probes", Command::kProbes},           {"verify-stable", Command::kVerifyStable},
    {"verify-example-1-4", Command::kVerifyExample},
};

GridSpec default_grid(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::kExponent:
      return {1e-3, 1e3, 2, true};
    case Command::kResolvent:
    case Command::kHTable:
      return {0.01, 10.0, 1, true};
    default:
      return cfg.at_infinity ? GridSpec{10.0, 1e4, 1, true} : GridSpec{1.0, 1e-4, 1, true};
  }
}

std::string q_label(double q) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", q);
  return buf;
}

/// Grid points, mirrored to both signs (ascending) when requested.
std::vector<double> x_points(const RunConfig& cfg) {
  std::vector<double> xs = cfg.grid.value_or(default_grid(cfg)).points();
  if (!cfg.symmetric) return xs;
  std::vector<double> mags;
  for (double x : xs) mags.push_back(std::abs(x));
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  std::vector<double> out;
  for (auto it = mags.rbegin(); it != mags.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), mags.begin(), mags.end());
  return out;
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;
  LevyProcessSpec spec;
  ExponentEvaluator ev;
  QuadratureConfig quad;
};

int cmd_exponent(Context& c) {
  c.out << "lambda,theta,omega,abs_psi,err_theta,err_omega\n";
  for (double l : c.cfg.grid.value_or(default_grid(c.cfg)).points()) {
    try {
      const ExponentValue v = c.ev.evaluate(l);
      c.out << format_double(l) << ',' << format_double(v.theta.value) << ',' << format_double(v.omega.value) << ','
            << format_double(std::abs(v.psi())) << ',' << format_double(v.theta.error_estimate) << ','
            << format_double(v.omega.error_estimate) << '\n';
    } catch (const QuadratureFailure&) {
      c.out << format_double(l) << ",nan,nan,nan,nan,nan\n";
      c.out.flush();
      throw;
    }
  }
  return kOk;
}

int cmd_resolvent(Context& c) {
  const std::vector<double> qs = c.cfg.q.empty() ? std::vector<double>{1.0} : c.cfg.q;
  std::vector<GridPoint> pts;
  for (double q : qs) {
    for (double x : x_points(c.cfg)) pts.push_back({q, x});
  }
  const auto values = evaluate_grid(c.ev, ResolventQuantity::kRq, pts, c.quad);
  write_grid_csv(c.out, pts, values);
  return kOk;
}

ProbeReport require_T(Context& c) {
  ProbeReport t = check_T(c.ev, c.quad, false);
  if (!t.passed()) {
    c.err << to_json(t).dump(2) << '\n';
    throw AssumptionViolation('T', std::string(to_string(t.status)) + ": " + t.detail);
  }
  return t;
}

int cmd_h_table(Context& c) {
  require_T(c);
  const std::vector<double> xs = x_points(c.cfg);
  std::vector<std::vector<ResolventValue>> columns;
  for (double q : [&] {
         std::vector<double> all{0.0};
         all.insert(all.end(), c.cfg.q.begin(), c.cfg.q.end());
         return all;
       }()) {
    std::vector<GridPoint> pts;
    for (double x : xs) pts.push_back({q, x});
    columns.push_back(evaluate_grid(c.ev, ResolventQuantity::kHq, pts, c.quad));
  }
  c.out << "x,h,err";
  for (double q : c.cfg.q) c.out << ",h_q_" << q_label(q) << ",err_q_" << q_label(q);
  c.out << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    c.out << format_double(xs[i]);
    for (const auto& col : columns) c.out << ',' << format_double(col[i].value) << ',' << format_double(col[i].error_estimate);
    c.out << '\n';
  }
  return kOk;
}

int cmd_probes(Context& c) {
  const double q = c.cfg.q.empty() ? 1.0 : c.cfg.q.front();
  json doc = {{"evaluator", c.ev.describe()},
              {"A", to_json(check_A(c.ev, q, c.quad))},
              {"T", to_json(check_T(c.ev, c.quad))}};
  if (c.spec.a > 0.0) doc["Z"] = to_json(check_Z(c.ev, c.quad));
  c.out << doc.dump(2) << '\n';
  return kOk;
}

struct Prediction {
  std::string kind;
  CoefficientPair pair;
  std::optional<RegularVariationSpec> rv;
};

Prediction predict(Context& c) {
  if (c.cfg.at_infinity) {
    const ZeroLaws laws = exponent_rv_at_zero(c.spec, SmallLambdaCase::kRegularlyVaryingTail, std::nullopt, c.quad);
    auto rv = laws.joint();
    if (!rv) throw CaseMismatch("small-lambda laws of theta and omega do not share an index" +
                                (laws.note.empty() ? std::string() : " (" + laws.note + ")"));
    return {"tail", coeff_c_pm_zero(*rv), rv};
  }
  if (c.spec.a > 0.0) return {"gaussian", gaussian_coeff_c_pm(c.ev, c.quad), std::nullopt};
  auto rv = origin_rv_of(c.spec);
  if (!rv) throw SpecError("measure: no origin behaviour declared (use a stable or tempered family, or an originHint)");
  return {"origin", coeff_c_pm(*rv), rv};
}

std::vector<AsymptoticReport> estimate(Context& c, const Prediction& p) {
  std::vector<double> grid;
  for (double x : c.cfg.grid.value_or(default_grid(c.cfg)).points()) grid.push_back(std::abs(x));
  std::vector<AsymptoticReport> reps;
  for (int side : {1, -1}) {
    if (side_is_empty(c.spec.measure, side) && p.kind == "tail") continue;
    reps.push_back(p.rv ? empirical_coefficient_estimate(c.ev, *p.rv, side, grid, c.quad)
                        : empirical_gaussian_estimate(c.ev, side, grid, c.quad));
    if (c.cfg.verbose) {
      c.err << (side > 0 ? "plus" : "minus") << ": c_hat at finest point "
            << format_double(reps.back().points.back().c_hat) << " vs " << format_double(reps.back().predicted)
            << '\n';
    }
  }
  return reps;
}

json prediction_json(const Prediction& p) {
  json j = {{"kind", p.kind}, {"cPlus", p.pair.c_plus}, {"cMinus", p.pair.c_minus}};
  if (p.rv) {
    j["index"] = p.rv->index;
    j["cTheta"] = p.rv->c_theta;
    j["cOmega"] = p.rv->c_omega;
  }
  return j;
}

int cmd_asymptotics(Context& c) {
  require_T(c);
  const Prediction p = predict(c);
  json reports = json::array();
  for (const auto& r : estimate(c, p)) reports.push_back(to_json(r));
  c.out << json{{"evaluator", c.ev.describe()}, {"predicted", prediction_json(p)}, {"reports", reports}}.dump(2)
        << '\n';
  return kOk;
}

int cmd_verify(Context& c) {
  const bool stable = c.cfg.command == Command::kVerifyStable;
  const auto& m = c.spec.measure;
  if (stable && !std::holds_alternative<StableDensity>(m) &&
      !(std::holds_alternative<ZeroMeasure>(m) && c.spec.a > 0.0)) {
    throw SpecError("measure.kind: verify-stable needs a stable density or a Gaussian spec without jumps");
  }
  if (!stable && !std::holds_alternative<TemperedPolynomial>(m)) {
    throw SpecError("measure.kind: verify-example-1-4 needs a tempered density");
  }
  json probes = json::array();
  const double q = c.cfg.q.empty() ? 1.0 : c.cfg.q.front();
  const ProbeReport a = check_A(c.ev, q, c.quad, false);
  probes.push_back(to_json(a));
  const ProbeReport t = check_T(c.ev, c.quad, false);
  probes.push_back(to_json(t));
  if (!a.passed() || !t.passed()) {
    c.out << json{{"evaluator", c.ev.describe()}, {"probes", probes}, {"passed", false}}.dump(2) << '\n';
    throw AssumptionViolation(a.passed() ? 'T' : 'A', a.passed() ? t.detail : a.detail);
  }
  const Prediction p = predict(c);
  json reports = json::array();
  bool ok = true;
  for (const auto& r : estimate(c, p)) {
    ok = ok && r.converged;
    reports.push_back(to_json(r));
  }
  c.out << json{{"evaluator", c.ev.describe()},
                {"probes", probes},
                {"predicted", prediction_json(p)},
                {"reports", reports},
                {"passed", ok}}
                   .dump(2)
        << '\n';
  return ok ? kOk : kVerificationFailure;
}

int dispatch(Context& c) {
  switch (c.cfg.command) {
    case Command::kExponent:
      return cmd_exponent(c);
    case Command::kResolvent:
      return cmd_resolvent(c);
    case Command::kHTable:
      return cmd_h_table(c);
    case Command::kAsymptotics:
      return cmd_asymptotics(c);
    case Command::kProbes:
      return cmd_probes(c);
    case Command::kVerifyStable:
    case Command::kVerifyExample:
      return cmd_verify(c);
  }
  return kUsage;
}

int run_with(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  LevyProcessSpec spec = load_spec(cfg.spec_path);
  require_valid(spec);
  QuadratureConfig quad;
  if (cfg.rel_tol) quad.rel_tol = *cfg.rel_tol;
  if (cfg.abs_tol) quad.abs_tol = *cfg.abs_tol;
  quad.validate();
  ExponentEvaluator ev = cfg.numeric ? ExponentEvaluator::numeric(spec) : ExponentEvaluator::automatic(spec);
  if (cfg.verbose) {
    err << "evaluator: " << ev.describe() << "\nthreads: " << resolvent_threads() << '\n';
  }
  Context c{cfg, out, err, spec, ev, quad};
  return dispatch(c);
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.points_per_decade, &tail) != 3) {
    throw DomainError("grid must be START:STOP:PPD, got '" + text + "'");
  }
  if (g.start == g.stop) throw DomainError("grid start and stop must differ");
  if (g.points_per_decade < 1) throw DomainError("grid needs at least one point per decade");
  return g;
}

std::vector<double> GridSpec::points() const {
  if (!geometric) {
    std::vector<double> out;
    for (int i = 0; i <= points_per_decade; ++i) {
      out.push_back(start + (stop - start) * static_cast<double>(i) / points_per_decade);
    }
    return out;
  }
  if (start == 0.0 || stop == 0.0 || (start < 0.0) != (stop < 0.0)) {
    throw DomainError("a geometric grid needs nonzero start and stop of the same sign");
  }
  const double sign = start < 0.0 ? -1.0 : 1.0;
  std::vector<double> out = geometric_grid(std::abs(start), std::abs(stop), points_per_decade);
  for (double& x : out) x *= sign;
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.out_path.empty()) return run_with(cfg, out, err);
    std::ofstream file(cfg.out_path);
    if (!file) {
      err << "error: cannot open " << cfg.out_path << " for writing\n";
      return kUsage;
    }
    return run_with(cfg, file, err);
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << '\n';
    return kSpecFailure;
  } catch (const NonIntegrableMeasure& e) {
    err << "spec error: " << e.what() << '\n';
    return kSpecFailure;
  } catch (const CaseMismatch& e) {
    err << "spec error: " << e.what() << '\n';
    return kSpecFailure;
  } catch (const UnstableLimit& e) {
    err << "spec error: " << e.what() << '\n';
    return kSpecFailure;
  } catch (const AssumptionViolation& e) {
    err << "error: " << e.what() << '\n';
    return kAssumptionFailure;
  } catch (const NotApplicable& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LevyError& e) {
    err << "quadrature error: " << e.what() << '\n';
    return kQuadratureFailure;
  }
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Resolvent densities and their asymptotics for real Levy processes"};
  RunConfig cfg;
  std::string grid;
  app.add_option("--spec", cfg.spec_path, "Process spec (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--command", cfg.command, "What to compute")
      ->required()
      ->transform(CLI::CheckedTransformer(kCommands, CLI::ignore_case));
  app.add_option("--grid", grid, "START:STOP:PPD (geometric)");
  app.add_flag("--linear", "Read PPD as the number of linear intervals");
  app.add_option("--q", cfg.q, "Killing rate; repeatable")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out_path, "Output file (default stdout)");
  app.add_option("--rel-tol", cfg.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--abs-tol", cfg.abs_tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--numeric", cfg.numeric, "Integrate the exponent from the measure even if a closed form exists");
  app.add_flag("--symmetric", cfg.symmetric, "Evaluate at both x and -x");
  app.add_flag("--at-infinity", cfg.at_infinity, "Asymptotics as |x| -> infinity from the tail of the measure");
  app.add_flag("-v,--verbose", cfg.verbose, "Diagnostics on stderr");
  try {
    app.parse(argc, argv);
    if (!grid.empty()) {
      cfg.grid = GridSpec::parse(grid);
      cfg.grid->geometric = app.count("--linear") == 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace levy::cli
