#include "noshlab/mc.hpp"

#include "noshlab/errors.hpp"
#include "noshlab/seeding.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <limits>

namespace noshlab::mc {

ScenarioEntry ScenarioEntry::builtin(int id) {
  return {static_cast<std::uint64_t>(id), std::to_string(id), dgp::builtin_scenario(id)};
}

void McConfig::validate() const {
  if (reps < 1) throw InputError("replication count must be at least 1");
  if (scenarios.empty() || sample_sizes.empty() || specs.empty()) {
    throw InputError("grid needs at least one scenario, sample size and specification");
  }
  for (std::size_t n : sample_sizes) {
    if (n < kMinSampleSize) {
      throw InputError("sample size " + std::to_string(n) + " is below the minimum of " +
                       std::to_string(kMinSampleSize));
    }
  }
  for (const auto& s : scenarios) {
    s.config.validate();
    (void)dgp::analytic_ace(s.config);
  }
  if (workers < 1) throw InputError("workers must be at least 1");
}

std::uint64_t derive_rep_seed(std::uint64_t master_seed, std::uint64_t scenario_id, std::size_t n,
                              ivest::EstimatorKind spec, std::size_t rep_index) {
  return mix_words({master_seed, scenario_id, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(spec),
                    static_cast<std::uint64_t>(rep_index)});
}

RepRecord run_replication(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                          std::uint64_t master_seed, std::size_t rep_index) {
  RepRecord record;
  record.rep = rep_index;
  record.seed = derive_rep_seed(master_seed, scenario.id, n, spec, rep_index);

  dgp::ScenarioConfig cfg = scenario.config;
  cfg.n = n;
  try {
    const dgp::GeneratedData gen = dgp::generate(cfg, record.seed);
    const ivest::IvEstimate est = ivest::tsls_fit(gen.data, ivest::IvSpec::standard(spec));
    if (!std::isfinite(est.point) || !std::isfinite(est.se)) {
      throw NumericalError("non-finite estimate");
    }
    record.ok = true;
    record.point = est.point;
    record.se = est.se;
    record.ci_low = est.ci_low;
    record.ci_high = est.ci_high;
  } catch (const NumericalError& e) {
    record.ok = false;
    record.failure = e.what();
  }
  return record;
}

McSummary summarize(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                    const std::vector<RepRecord>& reps) {
  McSummary s;
  s.scenario = scenario.label;
  s.n = n;
  s.spec = spec;
  s.ace = dgp::analytic_ace(scenario.config);

  std::vector<double> points;
  std::vector<double> ses;
  std::size_t covered = 0;
  std::size_t rejected = 0;
  for (const auto& r : reps) {
    if (!r.ok) {
      ++s.reps_failed;
      continue;
    }
    points.push_back(r.point);
    ses.push_back(r.se);
    if (r.ci_low <= s.ace && s.ace <= r.ci_high) ++covered;
    if (r.ci_low > 0.0 || r.ci_high < 0.0) ++rejected;
  }
  s.reps_used = points.size();
  if (s.reps_used == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.median_bias = s.median_se = s.coverage = s.rejection_rate = nan;
    s.unreliable = true;
    return s;
  }
  const double used = static_cast<double>(s.reps_used);
  s.median_bias = numkit::sample_median(points) - s.ace;
  s.median_se = numkit::sample_median(ses);
  s.coverage = static_cast<double>(covered) / used;
  s.rejection_rate = static_cast<double>(rejected) / used;
  s.unreliable = static_cast<double>(s.reps_failed) > kMaxFailedFraction * static_cast<double>(reps.size());
  return s;
}

CellResult run_cell_serial(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec,
                           std::size_t reps, std::uint64_t master_seed) {
  CellResult cell;
  cell.reps.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    cell.reps.push_back(run_replication(scenario, n, spec, master_seed, r));
  }
  cell.summary = summarize(scenario, n, spec, cell.reps);
  return cell;
}

CellResult run_cell(const ScenarioEntry& scenario, std::size_t n, ivest::EstimatorKind spec, std::size_t reps,
                    std::uint64_t master_seed, int workers) {
  CellResult cell;
  cell.reps.resize(reps);
  std::exception_ptr failure;

  // Each replication writes only its own slot; the reduction below runs in rep order.
  const auto count = static_cast<std::int64_t>(reps);
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
  for (std::int64_t r = 0; r < count; ++r) {
    try {
      cell.reps[static_cast<std::size_t>(r)] =
          run_replication(scenario, n, spec, master_seed, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(noshlab_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  cell.summary = summarize(scenario, n, spec, cell.reps);
  return cell;
}

std::vector<CellResult> run_grid_detailed(const McConfig& config) {
  config.validate();
  std::vector<CellResult> cells;
  cells.reserve(config.scenarios.size() * config.sample_sizes.size() * config.specs.size());
  for (const auto& scenario : config.scenarios) {
    for (std::size_t n : config.sample_sizes) {
      for (auto spec : config.specs) {
        cells.push_back(run_cell(scenario, n, spec, config.reps, config.master_seed, config.workers));
      }
    }
  }
  return cells;
}

std::vector<McSummary> run_grid(const McConfig& config) {
  std::vector<McSummary> out;
  for (auto& cell : run_grid_detailed(config)) out.push_back(std::move(cell.summary));
  return out;
}

}  // namespace noshlab::mc
