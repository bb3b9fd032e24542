#pragma once

#include "noshlab/mc.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace noshlab::cli {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Default master seed for simulate and reproduce-table.
inline constexpr std::uint64_t kDefaultSeed = 2022;

/// Runs the command line (args excludes the program name). Output goes to
/// `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Summary CSV: scenario,n,spec,ace,median_bias,median_se,coverage,rejection_rate,reps_used,reps_failed
/// followed by "# master_seed=<s> reps=<r> version=<v>".
void write_summary_csv(std::ostream& out, const std::vector<mc::McSummary>& rows, std::uint64_t master_seed,
                       std::size_t reps, int digits = 6);

/// One line per replication with full-precision point, se and CI.
void write_reps_csv(std::ostream& out, const std::vector<mc::CellResult>& cells);

}  // namespace noshlab::cli
