#pragma once

#include "noshlab/mc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace noshlab::reference {

/// One row of the reference simulation table. Coverage and power are percentages.
struct ReferenceRow {
  int scenario = 0;
  std::size_t n = 0;
  int spec = 0;
  double bias = 0.0;
  double coverage_pct = 0.0;
  double power_pct = 0.0;
};

/// The 100 reference rows, parsed from the compiled-in fixture CSV.
const std::vector<ReferenceRow>& rows();
std::optional<ReferenceRow> lookup(int scenario, std::size_t n, int spec);

/// Replication count behind the reference table.
inline constexpr double kReferenceReps = 20000.0;

/// Absolute tolerance for a bias comparison: 0.05, tightened to 0.01 for the
/// NOSH-holds scenarios (1, 4, 5) at n = 10000 where the reference bias is zero.
double bias_tolerance(int scenario, std::size_t n);

/// Percentage-point tolerance for coverage/power:
/// max(2, 3 * 100 * sqrt(p (1 - p) (1/reps + 1/20000))) with p the reference rate.
double rate_tolerance_pp(double ref_pct, std::size_t reps);

struct Comparison {
  std::string scenario;
  std::size_t n = 0;
  std::string spec;
  std::string metric;  ///< "bias", "coverage" or "power"
  double artifact = 0.0;
  double reference = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Side-by-side rows for every summary that has a reference counterpart
/// (built-in scenario labels "1".."5", TSLS specs 1-4). Coverage and power
/// are reported in percent.
std::vector<Comparison> compare(const std::vector<mc::McSummary>& summaries, std::size_t reps);

}  // namespace noshlab::reference
