#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <doctest.h>

#include "nmd/cli.hpp"
#include "nmd/errors.hpp"
#include "nmd/io.hpp"

using namespace nmd;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / "nmd_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int exit_status(const std::string& command) {
  const int rc = std::system(command.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

const std::string kCli = NMD_CLI_PATH;

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("parse maps decompose flags onto the config") {
  const RunConfig c = parse_args({"decompose", "--input", "data.csv", "--out-dir",
                                  "out", "--lambda", "0.1", "--energy-threshold",
                                  "0.95"});
  CHECK(c.command == RunConfig::Command::kDecompose);
  CHECK(c.input_path == "data.csv");
  CHECK(c.out_dir == "out");
  CHECK(c.train.lambda == 0.1);
  CHECK(c.cluster.energy_threshold == 0.95);
  // untouched defaults
  CHECK(c.cluster.radius == 2.5);
  CHECK(c.train.momentum == 0.9);
}

TEST_CASE("parse rejects out-of-range and unknown flags") {
  CHECK_THROWS_AS(parse_args({"decompose", "--input", "x.csv", "--out-dir", "o",
                              "--energy-threshold", "1.5"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"decompose", "--input", "x.csv", "--out-dir", "o",
                              "--frobnicate", "1"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK_THROWS_AS(parse_args({"synth"}), UsageError);  // --out is required
}

TEST_CASE("parse builds a synth config") {
  const RunConfig c = parse_args({"synth", "--signal", "xp", "--n", "1024",
                                  "--noise", "0.1", "--seed", "7", "--out",
                                  "xp.csv"});
  CHECK(c.command == RunConfig::Command::kSynth);
  CHECK(c.signal_kind == SyntheticSignal::kXP);
  CHECK(c.n == 1024);
  CHECK(c.noise == 0.1);
  CHECK(c.seed == 7);
  CHECK(c.out_path == "xp.csv");
}

TEST_CASE("synth writes a deterministic csv") {
  const fs::path out = test_dir() / "synth.csv";
  const std::vector<std::string> args{"synth", "--signal", "xlambda", "--n", "64",
                                      "--noise", "0.05", "--seed", "3",
                                      "--out", out.string()};
  REQUIRE(run(parse_args(args)) == 0);
  const std::string first = slurp(out);
  REQUIRE(run(parse_args(args)) == 0);
  CHECK(slurp(out) == first);
  CHECK(first.rfind("t,value\n", 0) == 0);
}

TEST_CASE("decompose emits coherent artifacts and eval reproduces them") {
  const fs::path input = test_dir() / "xp_small.csv";
  REQUIRE(run(parse_args({"synth", "--signal", "xp", "--n", "64", "--noise", "0.02",
                          "--seed", "5", "--out", input.string()})) == 0);

  const fs::path dir = test_dir() / "dec";
  const std::vector<std::string> args{
      "decompose",     "--input",     input.string(), "--out-dir", dir.string(),
      "--epochs",      "40",          "--unit-cap",   "16",        "--hidden-amp",
      "8",             "--hidden-res", "4",           "--seed",    "9",
      "--lambda",      "0.001"};
  REQUIRE(run(parse_args(args)) == 0);

  for (const char* name : {"decomposition.csv", "metrics.json", "checkpoint.json",
                           "loss_history.csv", "decomposition_meta.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
  }

  // completeness holds in the written table
  std::ifstream table_in(dir / "decomposition.csv");
  const DecompositionTable table = read_decomposition_csv(table_in);
  Vec total = table.residual;
  for (const auto& imf : table.imfs) total += imf;
  CHECK((total - table.reconstruction).cwiseAbs().maxCoeff() <= 1e-9);

  // eval recomputes the same metrics from the csv
  const fs::path eval_out = test_dir() / "metrics_eval.json";
  REQUIRE(run(parse_args({"eval", "--input", (dir / "decomposition.csv").string(),
                          "--out", eval_out.string()})) == 0);
  std::ifstream a_in(dir / "metrics.json");
  std::ifstream b_in(eval_out);
  const MetricsDocument a = read_metrics_json(a_in);
  const MetricsDocument b = read_metrics_json(b_in);
  CHECK(std::abs(a.report.io - b.report.io) <= 1e-9);
  CHECK(std::abs(a.report.mae - b.report.mae) <= 1e-9);
  REQUIRE(a.report.pe.size() == b.report.pe.size());
  for (std::size_t i = 0; i < a.report.pe.size(); ++i) {
    CHECK(std::abs(a.report.pe[i] - b.report.pe[i]) <= 1e-9);
  }
  CHECK(a.dominant_frequency == b.dominant_frequency);

  // byte-identical rerun
  const std::string decomposition_bytes = slurp(dir / "decomposition.csv");
  const std::string checkpoint_bytes = slurp(dir / "checkpoint.json");
  REQUIRE(run(parse_args(args)) == 0);
  CHECK(slurp(dir / "decomposition.csv") == decomposition_bytes);
  CHECK(slurp(dir / "checkpoint.json") == checkpoint_bytes);
}

TEST_CASE("decompose with zero epochs still satisfies the partition identity") {
  const fs::path input = test_dir() / "x2_small.csv";
  REQUIRE(run(parse_args({"synth", "--signal", "x2", "--n", "64", "--seed", "1",
                          "--out", input.string()})) == 0);
  const fs::path dir = test_dir() / "dec0";
  REQUIRE(run(parse_args({"decompose", "--input", input.string(), "--out-dir",
                          dir.string(), "--epochs", "0", "--unit-cap", "16",
                          "--hidden-amp", "4", "--hidden-res", "3"})) == 0);
  std::ifstream table_in(dir / "decomposition.csv");
  const DecompositionTable table = read_decomposition_csv(table_in);
  Vec total = table.residual;
  for (const auto& imf : table.imfs) total += imf;
  CHECK((total - table.reconstruction).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("extrapolate covers the requested extra span") {
  const fs::path dir = test_dir() / "dec";  // produced above
  REQUIRE(fs::exists(dir / "checkpoint.json"));
  const fs::path out = test_dir() / "extrap.csv";
  REQUIRE(run(parse_args({"extrapolate", "--checkpoint",
                          (dir / "checkpoint.json").string(), "--horizon", "0.25",
                          "--out", out.string()})) == 0);
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  const Signal s = ingest_csv(buf, CsvLayout::kTimeAndValue);
  // training window was [0, 1); the extension runs from 1 to 1.25
  CHECK(s.times[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.times[s.size() - 1] == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("spectrum handles both signal and decomposition inputs") {
  const fs::path input = test_dir() / "xp_small.csv";  // produced above
  REQUIRE(fs::exists(input));
  const fs::path out = test_dir() / "sig_spectrum.csv";
  REQUIRE(run(parse_args({"spectrum", "--input", input.string(), "--zero-mean",
                          "--out", out.string()})) == 0);
  CHECK(slurp(out).rfind("frequency,magnitude\n", 0) == 0);

  const fs::path dir = test_dir() / "spectra_dir";
  REQUIRE(run(parse_args({"spectrum", "--input",
                          (test_dir() / "dec" / "decomposition.csv").string(),
                          "--out-dir", dir.string()})) == 0);
  CHECK(fs::exists(dir / "spectrum_imf1.csv"));
}

TEST_CASE("binary maps errors to documented exit statuses") {
  const std::string quiet = " > /dev/null 2>&1";
  CHECK(exit_status(kCli + " definitely-not-a-command" + quiet) == 2);
  CHECK(exit_status(kCli + " decompose --input missing.csv --out-dir " +
                    (test_dir() / "nope").string() + quiet) == 3);
  CHECK(exit_status(kCli + " synth --n 8 --out " + (test_dir() / "tiny.csv").string() +
                    quiet) == 2);  // n below the contract is a usage error
  CHECK(exit_status(kCli + " --help > /dev/null 2>&1") == 0);

  const fs::path input = test_dir() / "xp_small.csv";
  CHECK(exit_status(kCli + " decompose --input " + input.string() + " --out-dir " +
                    (test_dir() / "div").string() +
                    " --lr 1000 --epochs 300 --unit-cap 16" + quiet) == 4);
  // partial outputs are removed on failure
  CHECK(!fs::exists(test_dir() / "div" / "decomposition.csv"));

  CHECK(exit_status(kCli + " synth --signal xp --n 32 --seed 2 --out " +
                    (test_dir() / "ok.csv").string() + quiet) == 0);
}

TEST_SUITE_END();
