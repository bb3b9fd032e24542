#pragma once

#include "noshlab/dgp.hpp"
#include "noshlab/ivest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace noshlab::mc {

/// A scenario in a sweep. `id` enters the replication seeds; `label` is what
/// the summary reports.
struct ScenarioEntry {
  std::uint64_t id = 0;
  std::string label;
  dgp::ScenarioConfig config;

  static ScenarioEntry builtin(int id);
};

struct McConfig {
  std::vector<ScenarioEntry> scenarios;
  std::vector<std::size_t> sample_sizes;
  std::vector<ivest::EstimatorKind> specs;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;  ///< parallelism hint; never changes results

  /// reps >= 1, sample sizes >= 30, non-empty lists, ACE computable for every scenario.
  void validate() const;
};

/// Sample sizes of the reference grid.
inline const std::vector<std::size_t> kGridSampleSizes{250, 1000, 2500, 5000, 10000};
inline constexpr std::size_t kMinSampleSize = 30;
/// Cells with more failed replications than this fraction are flagged unreliable.
inline constexpr double kMaxFailedFraction = 0.01;

struct McSummary {
  std::string scenario;
  std::size_t n = 0;
  ivest::EstimatorKind spec = ivest::EstimatorKind::Tsls1;
  double ace = 0.0;
  double median_bias = 0.0;
  double median_se = 0.0;
  double coverage = 0.0;        ///< fraction of CIs containing the ACE
  double rejection_rate = 0.0;  ///< fraction of CIs excluding zero
  std::size_t reps_used = 0;
  std::size_t reps_failed = 0;
  bool unreliable = false;

  friend bool operator==(const McSummary&, const McSummary&) = default;
};

struct RepRecord {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double point = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::string failure;

  friend bool operator==(const RepRecord&, const RepRecord&) = default;
};

struct CellResult {
  McSummary summary;
  std::vector<RepRecord> reps;
};

/// Stateless seed for one replication of one grid cell.
std::uint64_t derive_rep_seed(std::uint64_t master_seed, std::uint64_t scenario_id, std::size_t n,
                              ivest::EstimatorKind spec, std::size_t rep_index);

/// Generates one dataset and fits one estimator. Numerical failures are
/// recorded in the returned record, not thrown.
RepRecord run_replication(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                          std::uint64_t master_seed, std::size_t rep_index);

/// Reduces replication records (in rep order) to the four metrics.
McSummary summarize(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                    const std::vector<RepRecord>& reps);

/// OpenMP over replications; `workers` threads.
CellResult run_cell(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec, std::size_t reps,
                    std::uint64_t master_seed, int workers);

/// Single-threaded reference for run_cell; identical output by construction.
CellResult run_cell_serial(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                           std::size_t reps, std::uint64_t master_seed);

/// One cell per (scenario, n, spec), ordered scenario, then n, then spec.
std::vector<CellResult> run_grid_detailed(const McConfig& config);
std::vector<McSummary> run_grid(const McConfig& config);

}  // namespace noshlab::mc
