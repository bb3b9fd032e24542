#include "noshlab/reference_table.hpp"

#include "reference_table_data.hpp"

#include "noshlab/csv.hpp"
#include "noshlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace noshlab::reference {

const std::vector<ReferenceRow>& rows() {
  static const std::vector<ReferenceRow> table = [] {
    std::istringstream in(detail::kReferenceTableCsv);
    const numkit::Dataset data = csv::read_dataset(in, "reference_table.csv");
    std::vector<ReferenceRow> out;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      out.push_back({static_cast<int>(data.column("scenario")[i]), static_cast<std::size_t>(data.column("n")[i]),
                     static_cast<int>(data.column("spec")[i]), data.column("bias")[i], data.column("coverage")[i],
                     data.column("power")[i]});
    }
    return out;
  }();
  return table;
}

std::optional<ReferenceRow> lookup(int scenario, std::size_t n, int spec) {
  const auto& all = rows();
  auto it = std::find_if(all.begin(), all.end(), [&](const ReferenceRow& r) {
    return r.scenario == scenario && r.n == n && r.spec == spec;
  });
  if (it == all.end()) return std::nullopt;
  return *it;
}

double bias_tolerance(int scenario, std::size_t n) {
  const bool nosh_holds = scenario == 1 || scenario == 4 || scenario == 5;
  return nosh_holds && n == 10000 ? 0.01 : 0.05;
}

double rate_tolerance_pp(double ref_pct, std::size_t reps) {
  const double p = std::clamp(ref_pct / 100.0, 0.0, 1.0);
  const double se = std::sqrt(p * (1.0 - p) * (1.0 / static_cast<double>(reps) + 1.0 / kReferenceReps));
  return std::max(2.0, 300.0 * se);
}

std::vector<Comparison> compare(const std::vector<mc::McSummary>& summaries, std::size_t reps) {
  std::vector<Comparison> out;
  for (const auto& s : summaries) {
    if (s.spec == ivest::EstimatorKind::WaldRatio) continue;
    if (s.scenario.size() != 1 || s.scenario[0] < '1' || s.scenario[0] > '5') continue;
    const int scenario = s.scenario[0] - '0';
    const int spec = static_cast<int>(s.spec);
    const auto row = lookup(scenario, s.n, spec);
    if (!row) continue;

    const std::string spec_name(ivest::to_string(s.spec));
    auto add = [&](const char* metric, double artifact, double expected, double tol) {
      const double diff = std::abs(artifact - expected);
      out.push_back({s.scenario, s.n, spec_name, metric, artifact, expected, diff, tol,
                     std::isfinite(diff) && diff <= tol});
    };
    add("bias", s.median_bias, row->bias, bias_tolerance(scenario, s.n));
    add("coverage", 100.0 * s.coverage, row->coverage_pct, rate_tolerance_pp(row->coverage_pct, reps));
    add("power", 100.0 * s.rejection_rate, row->power_pct, rate_tolerance_pp(row->power_pct, reps));
  }
  return out;
}

}  // namespace noshlab::reference
