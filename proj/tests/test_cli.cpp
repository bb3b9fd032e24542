#include <doctest.h>

#include "noshlab/cli.hpp"
#include "noshlab/csv.hpp"
#include "noshlab/dgp.hpp"
#include "noshlab/ivest.hpp"
#include "noshlab/scenario_json.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace noshlab;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("noshlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string& args) {
  const fs::path err_file = scratch() / "stderr.txt";
  const std::string cmd = std::string(NOSHLAB_CLI_PATH) + " " + args + " 2>" + err_file.string();
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_file);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == cli::kExitUsage);
  CHECK(run("frobnicate").code == cli::kExitUsage);
  CHECK(run("estimate").code == cli::kExitUsage);
  CHECK(run("scenario show 9").code == cli::kExitUsage);
  CHECK(run("--version").code == cli::kExitOk);
  CHECK(run("--help").code == cli::kExitOk);
}

TEST_CASE("scenario list and show") {
  const auto list = run("scenario list --format csv");
  REQUIRE(list.code == 0);
  CHECK(list.out ==
        "scenario,ace,error_dist,nosh\n"
        "1,0.25,standard_normal,true\n"
        "2,1.125,standard_normal,false\n"
        "3,0.75,standard_normal,false\n"
        "4,0.25,beta_half_half,true\n"
        "5,0.25,chisq_mixture,true\n");

  for (int id = 1; id <= dgp::kBuiltinScenarios; ++id) {
    const auto show = run("scenario show " + std::to_string(id));
    REQUIRE(show.code == 0);
    CHECK(dgp::scenario_from_json(show.out) == dgp::builtin_scenario(id));
  }

  const auto cls = run("scenario classify 2 --format csv");
  REQUIRE(cls.code == 0);
  CHECK(cls.out.find("assumption1,false") != std::string::npos);
  CHECK(cls.out.find("assumption2,true") != std::string::npos);
}

TEST_CASE("generate then estimate matches the library") {
  const fs::path data = scratch() / "gen.csv";
  REQUIRE(run("generate --scenario 1 --n 500 --seed 11 --out " + data.string()).code == 0);
  auto cfg = dgp::builtin_scenario(1);
  cfg.n = 500;
  CHECK(csv::read_dataset(data) == dgp::generate(cfg, 11).data);

  const auto est = run("estimate --data " + data.string() + " --spec 3 --u6 U6 --v6 V6 --format csv --digits 17");
  REQUIRE(est.code == 0);
  std::istringstream in(est.out);
  const auto table = csv::read_dataset(in);
  const auto lib = ivest::tsls_fit(dgp::generate(cfg, 11).data, ivest::IvSpec::standard(ivest::EstimatorKind::Tsls3));
  CHECK(table.column("point")[0] == lib.point);
  CHECK(table.column("se")[0] == lib.se);

  const fs::path oracle = scratch() / "oracle.csv";
  REQUIRE(run("generate --scenario 2 --n 50 --oracle --out " + oracle.string()).code == 0);
  CHECK(csv::read_dataset(oracle).has("beta_y"));
}

TEST_CASE("estimate input and numerical failures") {
  const fs::path data = scratch() / "small.csv";
  REQUIRE(run("generate --n 100 --out " + data.string()).code == 0);
  CHECK(run("estimate --data " + data.string() + " --spec 2").code == cli::kExitUsage);
  CHECK(run("estimate --data " + data.string() + " --spec wald --u6 U6 --v6 V6").code == cli::kExitUsage);
  CHECK(run("estimate --data " + data.string() + " --z W").code == cli::kExitUsage);
  CHECK(run("estimate --data " + (scratch() / "missing.csv").string()).code == cli::kExitUsage);

  const fs::path blank = scratch() / "blank.csv";
  write_file(blank, "Z,X,Y\n1,2,3\n2,,4\n3,4,5\n");
  const auto r = run("estimate --data " + blank.string());
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find(":3:") != std::string::npos);

  const fs::path flat = scratch() / "flat.csv";
  write_file(flat, "Z,X,Y\n0,1,1\n1,1,2\n0,2,3\n1,2,4\n");
  const auto n = run("estimate --data " + flat.string());
  CHECK(n.code == cli::kExitNumerical);
  CHECK(n.err.find("irrelevant instrument") != std::string::npos);

  const fs::path collinear = scratch() / "collinear.csv";
  write_file(collinear, "Z,X,Y,U,V\n0,0,1,1,0\n1,1,2,1,1\n2,3,3,1,0\n3,3,5,1,1\n4,5,4,1,0\n");
  CHECK(run("estimate --data " + collinear.string() + " --spec 2 --u6 U --v6 V").code == cli::kExitNumerical);
}

TEST_CASE("wald-summary accepts negative values") {
  const auto r = run("wald-summary --itt -192 --itt-ci -304.9 -79.2 --first-stage 0.5 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out == "point,ci_low,ci_high\n-384.00,-609.80,-158.40\n");

  const auto flipped = run("wald-summary --itt 1 --itt-ci -1 2 --first-stage -0.5 --format csv");
  REQUIRE(flipped.code == 0);
  CHECK(flipped.out == "point,ci_low,ci_high\n-2.00,-4.00,2.00\n");

  CHECK(run("wald-summary --itt 1 --itt-ci 2 1 --first-stage 1").code == cli::kExitUsage);
  CHECK(run("wald-summary --itt 1 --itt-ci 0 2 --first-stage 0").code == cli::kExitUsage);
}

TEST_CASE("simulate output does not depend on the worker count") {
  const fs::path a = scratch() / "sim_a.csv";
  const fs::path b = scratch() / "sim_b.csv";
  const fs::path reps = scratch() / "sim_reps.csv";
  const std::string common = "simulate --scenario 1 2 --n 100 250 --spec 1 4 --reps 40 --seed 5 ";
  REQUIRE(run(common + "--workers 1 --out " + a.string() + " --keep-reps " + reps.string()).code == 0);
  REQUIRE(run(common + "--workers 4 --out " + b.string()).code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind("scenario,n,spec,ace,median_bias,median_se,coverage,rejection_rate,reps_used,reps_failed\n", 0) ==
        0);
  CHECK(text.find("# master_seed=5 reps=40") != std::string::npos);

  std::size_t lines = 0;
  for (char c : slurp(reps)) lines += c == '\n';
  CHECK(lines == 1 + 2 * 2 * 2 * 40);

  CHECK(run("simulate --n 10 --reps 5 --out " + a.string()).code == cli::kExitUsage);
  CHECK(run("simulate --reps 0 --out " + a.string()).code == cli::kExitUsage);
  CHECK(run("simulate --spec 7 --reps 5 --out " + a.string()).code == cli::kExitUsage);
}

TEST_CASE("simulate accepts scenario files") {
  const fs::path a = scratch() / "file_sim.csv";
  const std::string file = std::string(NOSHLAB_DATA_DIR) + "/scenarios/scenario3.json";
  REQUIRE(run("simulate --scenario " + file + " --n 100 --reps 10 --workers 2 --out " + a.string()).code == 0);
  CHECK(slurp(a).find("\nscenario3,100,1,0.75,") != std::string::npos);
}
