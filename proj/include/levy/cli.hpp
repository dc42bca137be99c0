#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace levy::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSpecFailure = 2,
  kQuadratureFailure = 3,
  kAssumptionFailure = 4,
  kVerificationFailure = 5,
};

enum class Command { kExponent, kResolvent, kHTable, kAsymptotics, kProbes, kVerifyStable, kVerifyExample };

/// start:stop:points-per-decade; start and stop share a sign.
struct GridSpec {
  double start = 1.0;
  double stop = 1e-4;
  int points_per_decade = 1;
  bool geometric = true;

  static GridSpec parse(const std::string& text);
  /// Points in the order start -> stop. A linear grid takes points_per_decade
  /// as the number of intervals.
  std::vector<double> points() const;
};

struct RunConfig {
  std::string spec_path;
  Command command = Command::kExponent;
  std::optional<GridSpec> grid;
  std::vector<double> q;
  /// Empty means stdout.
  std::string out_path;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  bool numeric = false;
  bool symmetric = false;
  bool at_infinity = false;
  bool verbose = false;
};

/// Runs one command; diagnostics go to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and runs.
int main_entry(int argc, const char* const* argv);

}  // namespace levy::cli
