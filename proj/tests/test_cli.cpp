#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "levy/cli.hpp"
#include "levy/special.hpp"

using namespace levy::cli;

namespace {

std::string write_spec(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("levy_cli_" + name + ".json");
  std::ofstream(path) << body;
  return path.string();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cmd(RunConfig cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(const std::string& spec, Command cmd, const std::string& grid = "") {
  RunConfig c;
  c.spec_path = spec;
  c.command = cmd;
  if (!grid.empty()) c.grid = GridSpec::parse(grid);
  return c;
}

/// Rows of a CSV body without its header.
std::vector<std::vector<double>> rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> out;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) r.push_back(std::stod(cell));
    out.push_back(r);
  }
  return out;
}

const std::string kBrownian = R"({"a": 0.5, "b": 0, "measure": {"kind": "zero"}})";
const std::string kStable = R"({"a": 0, "b": 0, "measure": {"kind": "stable", "kPlus": 1, "kMinus": 1, "alpha": 1.5}})";

}  // namespace

TEST_CASE("grid specs") {
  const auto g = GridSpec::parse("0.1:10:2");
  CHECK(g.points().size() == 5);
  CHECK(GridSpec::parse("-1:-1e-2:1").points().back() == -1e-2);
  CHECK_THROWS(GridSpec::parse("1:1:3"));
  CHECK_THROWS(GridSpec::parse("1:2"));
  CHECK_THROWS(GridSpec::parse("1:10:0"));
  CHECK_THROWS(GridSpec::parse("-1:10:2").points());
}

TEST_CASE("exponent tables") {
  const auto bm = run_cmd(config(write_spec("bm", kBrownian), Command::kExponent, "0.1:10:3"));
  REQUIRE(bm.code == kOk);
  CHECK(bm.out.rfind("lambda,theta,omega,abs_psi,err_theta,err_omega\n", 0) == 0);
  for (const auto& r : rows(bm.out)) CHECK(std::abs(r[1] - 0.5 * r[0] * r[0]) <= 1e-12 * r[1]);

  const std::string st = write_spec("stable", kStable);
  auto numeric = config(st, Command::kExponent, "0.01:1000:1");
  numeric.numeric = true;
  const auto a = rows(run_cmd(numeric).out);
  const auto b = rows(run_cmd(config(st, Command::kExponent, "0.01:1000:1")).out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i][1] / b[i][1] - 1.0) < 1e-6);
}

TEST_CASE("spec failures exit 2 and name the field") {
  const auto bad = run_cmd(config(write_spec("bad", R"({"a": 0.5, "b": 0, "measure": {"kind": "stable", "kPlus": 1, "kMinus": 1}})"),
                                  Command::kExponent));
  CHECK(bad.code == kSpecFailure);
  CHECK(bad.err.find("alpha") != std::string::npos);
  CHECK(run_cmd(config(write_spec("broken", "{\"a\": "), Command::kExponent)).code == kSpecFailure);
  CHECK(run_cmd(config("/nonexistent/spec.json", Command::kExponent)).code == kSpecFailure);
}

TEST_CASE("h tables") {
  auto cfg = config(write_spec("bm", kBrownian), Command::kHTable, "0.01:10:1");
  cfg.symmetric = true;
  cfg.q = {0.5};
  const auto bm = run_cmd(cfg);
  REQUIRE(bm.code == kOk);
  CHECK(bm.out.rfind("x,h,err,h_q_0.5,err_q_0.5\n", 0) == 0);
  const auto r = rows(bm.out);
  CHECK(r.size() == 8);
  for (const auto& row : r) CHECK(std::abs(row[1] - std::abs(row[0])) <= 1e-6 * std::abs(row[0]));

  const auto st = rows(run_cmd(config(write_spec("stable", kStable), Command::kHTable, "0.01:100:1")).out);
  const double c_theta = 2.0 * std::numbers::pi * levy::c_alpha(2.5);
  for (const auto& row : st) {
    CHECK(row[1] / std::sqrt(row[0]) == doctest::Approx(levy::c_alpha(1.5) / c_theta).epsilon(1e-6));
  }

  const auto drift = run_cmd(config(write_spec("drift", R"({"a": 0, "b": 1, "measure": {"kind": "zero"}})"),
                                    Command::kHTable));
  CHECK(drift.code == kAssumptionFailure);
  CHECK(drift.err.find("\"assumption\": \"T\"") != std::string::npos);
}

TEST_CASE("verification reports") {
  const auto st = run_cmd(config(write_spec("stable", kStable), Command::kVerifyStable));
  REQUIRE(st.code == kOk);
  const auto doc = nlohmann::json::parse(st.out);
  CHECK(doc.at("passed") == true);
  CHECK(doc.at("reports").size() == 2);

  const auto g = run_cmd(config(write_spec("drifted", R"({"a": 0.5, "b": 1, "measure": {"kind": "zero"}})"),
                                Command::kVerifyStable, "0.1:0.001:1"));
  REQUIRE(g.code == kOk);
  const auto gd = nlohmann::json::parse(g.out);
  CHECK(gd.at("predicted").at("cPlus") == 0.0);
  CHECK(gd.at("predicted").at("cMinus") == 2.0);

  CHECK(run_cmd(config(write_spec("bm", kBrownian), Command::kVerifyExample)).code == kSpecFailure);
}

TEST_CASE("output is deterministic") {
  auto cfg = config(write_spec("stable", kStable), Command::kResolvent, "0.1:10:2");
  cfg.symmetric = true;
  cfg.q = {0.5, 2.0};
  const auto a = run_cmd(cfg);
  const auto b = run_cmd(cfg);
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
  CHECK(rows(a.out).size() == 20);
}
