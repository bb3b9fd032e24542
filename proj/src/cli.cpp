#include "noshlab/cli.hpp"

#include "noshlab/csv.hpp"
#include "noshlab/dgp.hpp"
#include "noshlab/errors.hpp"
#include "noshlab/ivest.hpp"
#include "noshlab/output_table.hpp"
#include "noshlab/reference_table.hpp"
#include "noshlab/scenario_json.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

namespace noshlab::cli {

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

int default_workers() {
  if (const char* env = std::getenv("NOSH_LAB_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("NOSH_LAB_WORKERS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::string scenario_label(const std::string& id_or_path) {
  if (id_or_path.size() == 1 && std::isdigit(static_cast<unsigned char>(id_or_path[0]))) return id_or_path;
  return std::filesystem::path(id_or_path).stem().string();
}

std::vector<mc::ScenarioEntry> resolve_entries(const std::vector<std::string>& ids) {
  std::vector<mc::ScenarioEntry> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const dgp::ScenarioConfig cfg = dgp::resolve_scenario(ids[i]);
    const bool builtin = ids[i].size() == 1 && std::isdigit(static_cast<unsigned char>(ids[i][0]));
    const std::uint64_t id = builtin ? static_cast<std::uint64_t>(ids[i][0] - '0') : 1000 + i;
    out.push_back({id, scenario_label(ids[i]), cfg});
  }
  return out;
}

std::vector<ivest::EstimatorKind> parse_specs(const std::vector<std::string>& specs) {
  std::vector<ivest::EstimatorKind> out;
  for (const auto& s : specs) out.push_back(ivest::parse_estimator_kind(s));
  return out;
}

// --- scenario ---------------------------------------------------------------

int cmd_scenario_list(std::ostream& out, TableFormat format, int digits) {
  OutputTable table({"scenario", "ace", "error_dist", "nosh"});
  table.set_significant_digits(digits);
  for (int id = 1; id <= dgp::kBuiltinScenarios; ++id) {
    const auto cfg = dgp::builtin_scenario(id);
    table.add_row({std::int64_t{id}, dgp::analytic_ace(cfg), std::string(dgp::to_string(cfg.error_dist)),
                   yes_no(dgp::classify(cfg).nosh)});
  }
  table.render(out, format);
  return kExitOk;
}

int cmd_scenario_show(std::ostream& out, const std::string& id) {
  out << dgp::scenario_to_json(dgp::resolve_scenario(id));
  return kExitOk;
}

int cmd_scenario_classify(std::ostream& out, const std::string& id, TableFormat format) {
  const auto r = dgp::classify(dgp::resolve_scenario(id));
  OutputTable table({"property", "value"});
  table.add_row({std::string("assumption1"), yes_no(r.assumption1)});
  table.add_row({std::string("assumption2"), yes_no(r.assumption2)});
  table.add_row({std::string("nosh"), yes_no(r.nosh)});
  table.add_row({std::string("nem1"), yes_no(r.nem1)});
  table.add_row({std::string("nem2"), yes_no(r.nem2)});
  table.add_row({std::string("effect_homogeneous"), yes_no(r.effect_homogeneous)});
  table.add_row({std::string("instrument_homogeneous"), yes_no(r.instrument_homogeneous)});
  table.render(out, format);
  return kExitOk;
}

// --- generate / estimate ------------------------------------------------------

struct GenerateArgs {
  std::string scenario = "1";
  std::size_t n = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
  bool oracle = false;
};

int cmd_generate(const GenerateArgs& a) {
  dgp::ScenarioConfig cfg = dgp::resolve_scenario(a.scenario);
  cfg.n = a.n;
  dgp::GeneratedData gen = dgp::generate(cfg, a.seed);
  if (a.oracle) {
    gen.data.add_column("beta_x", gen.beta_x);
    gen.data.add_column("beta_y", gen.beta_y);
  }
  auto out = open_output(a.out_path);
  csv::write_dataset(out, gen.data);
  return kExitOk;
}

struct EstimateArgs {
  std::string data_path;
  std::string z = "Z", x = "X", y = "Y";
  std::string spec = "1";
  std::string u6, v6;
  std::string format = "pretty";
  int digits = 6;
};

int cmd_estimate(std::ostream& out, const EstimateArgs& a) {
  const numkit::Dataset data = csv::read_dataset(std::filesystem::path(a.data_path));
  ivest::IvSpec spec;
  spec.kind = ivest::parse_estimator_kind(a.spec);
  spec.instrument = a.z;
  spec.treatment = a.x;
  spec.outcome = a.y;
  if (!a.u6.empty() || !a.v6.empty()) {
    if (a.u6.empty() || a.v6.empty()) throw SpecError("--u6 and --v6 must be given together");
    spec.modifiers = std::make_pair(a.u6, a.v6);
  }
  const ivest::IvEstimate est = ivest::tsls_fit(data, spec);

  OutputTable table({"spec", "point", "se", "ci_low", "ci_high"});
  table.set_significant_digits(a.digits);
  table.add_row({std::string(ivest::to_string(spec.kind)), est.point, est.se, est.ci_low, est.ci_high});
  table.render(out, parse_table_format(a.format));
  return kExitOk;
}

struct WaldSummaryArgs {
  double itt = 0.0;
  std::vector<double> itt_ci;
  double first_stage = 0.0;
  int decimals = 2;
  std::string format = "pretty";
};

int cmd_wald_summary(std::ostream& out, const WaldSummaryArgs& a) {
  if (a.itt_ci.size() != 2) throw InputError("--itt-ci takes two values: low high");
  const auto w = ivest::wald_from_summary(a.itt, {a.itt_ci[0], a.itt_ci[1]}, a.first_stage);
  OutputTable table({"point", "ci_low", "ci_high"});
  if (a.decimals >= 0) {
    table.set_fixed_decimals(a.decimals);
  } else {
    table.set_significant_digits(17);
  }
  table.add_row({w.point, w.ci_low, w.ci_high});
  table.render(out, parse_table_format(a.format));
  return kExitOk;
}

// --- simulate / reproduce-table -----------------------------------------------

struct SimulateArgs {
  std::vector<std::string> scenarios{"1"};
  std::vector<std::size_t> sizes{1000};
  std::vector<std::string> specs{"1"};
  std::size_t reps = 1000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  std::string out_path;
  std::string keep_reps;
  int digits = 6;
};

void warn_unreliable(std::ostream& err, const std::vector<mc::McSummary>& rows) {
  for (const auto& s : rows) {
    if (s.unreliable) {
      err << "warning: scenario " << s.scenario << " n=" << s.n << " spec=" << ivest::to_string(s.spec) << ": "
          << s.reps_failed << " of " << (s.reps_used + s.reps_failed)
          << " replications failed; cell is unreliable\n";
    }
  }
}

int cmd_simulate(std::ostream& err, const SimulateArgs& a) {
  mc::McConfig cfg;
  cfg.scenarios = resolve_entries(a.scenarios);
  cfg.sample_sizes = a.sizes;
  cfg.specs = parse_specs(a.specs);
  cfg.reps = a.reps;
  cfg.master_seed = a.seed;
  cfg.workers = a.workers > 0 ? a.workers : default_workers();
  cfg.validate();

  const auto cells = mc::run_grid_detailed(cfg);
  std::vector<mc::McSummary> rows;
  for (const auto& c : cells) rows.push_back(c.summary);

  auto out = open_output(a.out_path);
  write_summary_csv(out, rows, cfg.master_seed, cfg.reps, a.digits);
  if (!a.keep_reps.empty()) {
    auto reps_out = open_output(a.keep_reps);
    write_reps_csv(reps_out, cells);
  }
  warn_unreliable(err, rows);
  return kExitOk;
}

struct ReproduceArgs {
  std::size_t reps = 2000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  std::string out_path;
  std::string summary_path;
};

int cmd_reproduce_table(std::ostream& out, std::ostream& err, const ReproduceArgs& a) {
  if (a.reps < 500) err << "warning: fewer than 500 replications; Monte Carlo error will dominate comparisons\n";

  mc::McConfig cfg;
  for (int id = 1; id <= dgp::kBuiltinScenarios; ++id) cfg.scenarios.push_back(mc::ScenarioEntry::builtin(id));
  cfg.sample_sizes = mc::kGridSampleSizes;
  cfg.specs = {ivest::EstimatorKind::Tsls1, ivest::EstimatorKind::Tsls2, ivest::EstimatorKind::Tsls3,
               ivest::EstimatorKind::Tsls4};
  cfg.reps = a.reps;
  cfg.master_seed = a.seed;
  cfg.workers = a.workers > 0 ? a.workers : default_workers();

  const auto rows = mc::run_grid(cfg);
  const auto comparisons = reference::compare(rows, cfg.reps);

  OutputTable table({"scenario", "n", "spec", "metric", "artifact", "reference", "abs_diff", "tolerance", "pass"});
  std::size_t failed = 0;
  for (const auto& c : comparisons) {
    table.add_row({c.scenario, static_cast<std::int64_t>(c.n), c.spec, c.metric, c.artifact, c.reference, c.abs_diff,
                   c.tolerance, std::string(c.pass ? "pass" : "fail")});
    if (!c.pass) ++failed;
  }
  {
    auto file = open_output(a.out_path);
    table.render(file, TableFormat::Csv);
    file << "# master_seed=" << cfg.master_seed << " reps=" << cfg.reps << " version=" << NOSHLAB_VERSION << '\n';
  }
  if (!a.summary_path.empty()) {
    auto file = open_output(a.summary_path);
    write_summary_csv(file, rows, cfg.master_seed, cfg.reps);
  }
  warn_unreliable(err, rows);
  out << comparisons.size() - failed << " of " << comparisons.size() << " comparisons within tolerance\n";
  for (const auto& c : comparisons) {
    if (!c.pass) {
      err << "outside tolerance: scenario " << c.scenario << " n=" << c.n << " spec=" << c.spec << " " << c.metric
          << " artifact=" << c.artifact << " reference=" << c.reference << " tolerance=" << c.tolerance << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<mc::McSummary>& rows, std::uint64_t master_seed,
                       std::size_t reps, int digits) {
  OutputTable table({"scenario", "n", "spec", "ace", "median_bias", "median_se", "coverage", "rejection_rate",
                     "reps_used", "reps_failed"});
  table.set_significant_digits(digits);
  for (const auto& s : rows) {
    table.add_row({s.scenario, static_cast<std::int64_t>(s.n), std::string(ivest::to_string(s.spec)), s.ace,
                   s.median_bias, s.median_se, s.coverage, s.rejection_rate, static_cast<std::int64_t>(s.reps_used),
                   static_cast<std::int64_t>(s.reps_failed)});
  }
  table.render(out, TableFormat::Csv);
  out << "# master_seed=" << master_seed << " reps=" << reps << " version=" << NOSHLAB_VERSION << '\n';
}

void write_reps_csv(std::ostream& out, const std::vector<mc::CellResult>& cells) {
  out << "scenario,n,spec,rep,seed,ok,point,se,ci_low,ci_high\n";
  for (const auto& cell : cells) {
    for (const auto& r : cell.reps) {
      out << cell.summary.scenario << ',' << cell.summary.n << ',' << ivest::to_string(cell.summary.spec) << ','
          << r.rep << ',' << r.seed << ',' << (r.ok ? 1 : 0);
      if (r.ok) {
        out << ',' << csv::format_exact(r.point) << ',' << csv::format_exact(r.se) << ','
            << csv::format_exact(r.ci_low) << ',' << csv::format_exact(r.ci_high) << '\n';
      } else {
        out << ",NA,NA,NA,NA\n";
      }
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instrumental-variable estimators, simulation scenarios and Monte Carlo harness", "noshlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NOSHLAB_VERSION);

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Inspect the built-in simulation scenarios");
  scenario->require_subcommand(1);
  std::string format = "pretty";
  int digits = 6;
  std::string scenario_id;
  auto* list = scenario->add_subcommand("list", "List built-in scenarios with their ACE");
  list->add_option("--format", format, "csv, tsv or pretty")->capture_default_str();
  list->add_option("--digits", digits, "Significant digits")->capture_default_str();
  auto* show = scenario->add_subcommand("show", "Print a scenario's parameters as JSON");
  show->add_option("id", scenario_id, "Scenario id (1-5) or JSON file")->required();
  auto* classify = scenario->add_subcommand("classify", "Report which identifying assumptions hold");
  classify->add_option("id", scenario_id, "Scenario id (1-5) or JSON file")->required();
  classify->add_option("--format", format, "csv, tsv or pretty")->capture_default_str();

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write one simulated dataset as CSV");
  generate->add_option("--scenario", gen.scenario, "Scenario id (1-5) or JSON file")->capture_default_str();
  generate->add_option("--n", gen.n, "Sample size")->capture_default_str()->check(CLI::Range(2, 100000000));
  generate->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate->add_option("--out", gen.out_path, "Output CSV")->required();
  generate->add_flag("--oracle", gen.oracle, "Append per-individual beta_x and beta_y columns");

  // estimate
  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the effect of X on Y from a CSV file");
  estimate->add_option("--data", est.data_path, "Input CSV with a header row")->required();
  estimate->add_option("--z", est.z, "Instrument column")->capture_default_str();
  estimate->add_option("--x", est.x, "Treatment column")->capture_default_str();
  estimate->add_option("--y", est.y, "Outcome column")->capture_default_str();
  estimate->add_option("--spec", est.spec, "wald, 1, 2, 3 or 4")->capture_default_str();
  estimate->add_option("--u6", est.u6, "First modifier column (specs 2-4)");
  estimate->add_option("--v6", est.v6, "Second modifier column (specs 2-4)");
  estimate->add_option("--format", est.format, "csv, tsv or pretty")->capture_default_str();
  estimate->add_option("--digits", est.digits, "Significant digits")->capture_default_str();

  // wald-summary
  WaldSummaryArgs ws;
  auto* wald = app.add_subcommand("wald-summary", "Wald estimate from reported summary statistics");
  wald->add_option("--itt", ws.itt, "Intention-to-treat effect")->required();
  wald->add_option("--itt-ci", ws.itt_ci, "ITT 95% CI: low high")->required()->expected(2);
  wald->add_option("--first-stage", ws.first_stage, "Effect of the instrument on the treatment")->required();
  wald->add_option("--decimals", ws.decimals, "Decimal places (negative for full precision)")->capture_default_str();
  wald->add_option("--format", ws.format, "csv, tsv or pretty")->capture_default_str();

  // simulate
  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over scenarios, sample sizes and specs");
  simulate->add_option("--scenario", sim.scenarios, "Scenario ids (1-5) or JSON files")->capture_default_str();
  simulate->add_option("--n", sim.sizes, "Sample sizes")->capture_default_str();
  simulate->add_option("--spec", sim.specs, "Estimators: wald, 1, 2, 3, 4")->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications per cell")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "Worker threads (default: $NOSH_LAB_WORKERS or all cores)");
  simulate->add_option("--out", sim.out_path, "Summary CSV")->required();
  simulate->add_option("--keep-reps", sim.keep_reps, "Also write per-replication CSV here");
  simulate->add_option("--digits", sim.digits, "Significant digits in the summary")->capture_default_str();

  // reproduce-table
  ReproduceArgs rep;
  auto* reproduce = app.add_subcommand("reproduce-table", "Run the reference grid and compare with the bundled reference table");
  reproduce->add_option("--reps", rep.reps, "Replications per cell")->capture_default_str();
  reproduce->add_option("--seed", rep.seed, "Master seed")->capture_default_str();
  reproduce->add_option("--workers", rep.workers, "Worker threads (default: $NOSH_LAB_WORKERS or all cores)");
  reproduce->add_option("--out", rep.out_path, "Side-by-side comparison CSV")->required();
  reproduce->add_option("--summary", rep.summary_path, "Also write the summary CSV here");

  std::vector<std::string> argv_storage{"noshlab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (scenario->parsed()) {
      if (list->parsed()) return cmd_scenario_list(out, parse_table_format(format), digits);
      if (show->parsed()) return cmd_scenario_show(out, scenario_id);
      return cmd_scenario_classify(out, scenario_id, parse_table_format(format));
    }
    if (generate->parsed()) return cmd_generate(gen);
    if (estimate->parsed()) return cmd_estimate(out, est);
    if (wald->parsed()) return cmd_wald_summary(out, ws);
    if (simulate->parsed()) return cmd_simulate(err, sim);
    if (reproduce->parsed()) return cmd_reproduce_table(out, err, rep);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace noshlab::cli
