#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "grhs/json_io.hpp"

using namespace grhs;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("grhs_io_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json read(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("command line: exit codes and reports") {
  const fs::path dir = scratch_dir("cli");
  const std::string out = "--out=" + dir.string();

  CHECK(run_cli({"verify", "--gallery", "1.5", "--tol", "1e-9", out}) == cli::kPass);
  Json rep = read(dir / "verify_report.json");
  CHECK(rep["passed"] == true);
  for (const auto& v : rep["sup_residuals"]) CHECK(v.get<double>() <= 1e-10);

  std::string text;
  CHECK(run_cli({"verify", "--gallery", "1.8", out}, &text) == cli::kCheckFailed);
  rep = read(dir / "verify_report.json");
  CHECK(rep["failing"].size() == 2);
  CHECK(run_cli({"verify", "--gallery", "1.8", "--variant", "theta-free", out}) == cli::kPass);

  CHECK(run_cli({"oracle", "--gallery", "1.5", "--step", "1e-3", "--step", "5e-4", out}) == cli::kPass);
  rep = read(dir / "oracle_report.json");
  const double ratio = rep["order_ratios"][0].get<double>();
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);

  CHECK(run_cli({"construct", "--case", "2", out}) == cli::kPass);
  CHECK(fs::exists(dir / "candidate.json"));
  CHECK(run_cli({"verify", "--config", (dir / "candidate.json").string(), out}) == cli::kPass);
  CHECK(run_cli({"verify", "--config", (dir / "caseparams.json").string(), out}) == cli::kPass);

  CHECK(run_cli({"gallery", out}) == cli::kPass);
  CHECK(read(dir / "gallery_report.json")["entries"].size() == 4);

  CHECK(run_cli({"geodesic", "--gallery", "1.5", "--count", "3", "--s-max", "10", out}) == cli::kCheckFailed);
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(read(dir / "geodesic_report.json")["schema"] == "probe-summary-v1");
}

TEST_CASE("command line: configuration errors still write a report") {
  const fs::path dir = scratch_dir("cli_err");
  const std::string out = "--out=" + dir.string();
  CHECK(run_cli({"verify", "--gallery", "9.9", out}) == cli::kConfigError);
  Json rep = read(dir / "verify_report.json");
  CHECK(rep["schema"] == "error-report-v1");
  CHECK(rep["exit_code"] == 2);
  CHECK(run_cli({"verify", out}) == cli::kConfigError);
  CHECK(run_cli({"verify", "--gallery", "1.5", "--tol", "-1", out}) == cli::kConfigError);
  CHECK(run_cli({"frobnicate"}) == cli::kConfigError);
  CHECK(run_cli({"verify", "--gallery", "1.5", "--param", "nope=1", out}) == cli::kConfigError);
  CHECK(run_cli({"verify", "--gallery", "1.5", "--grid=20:30:11", out}) == cli::kConfigError);
}

TEST_CASE("command line: numerical failure exits 3") {
  const fs::path dir = scratch_dir("cli_num");
  const fs::path cfg = dir / "bad.json";
  {
    std::ofstream f(cfg);
    f << R"({"schema": "caseparams-v1", "case": 3, "z_mode": "variable", "c": {"c6": 5}, "xi_span": 50})";
  }
  const int code = run_cli({"construct", "--config", cfg.string(), "--out=" + dir.string()});
  CHECK(code == cli::kNumericalError);
  CHECK(read(dir / "construct_report.json")["exit_code"] == 3);
}

TEST_CASE("command line output is deterministic") {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  for (const auto& d : {a, b}) {
    run_cli({"oracle", "--gallery", "1.5", "--seed", "9", "--out=" + d.string()});
    run_cli({"geodesic", "--gallery", "1.10", "--count", "3", "--s-max", "5", "--seed", "9", "--out=" + d.string()});
  }
  for (const char* f : {"oracle_report.json", "geodesic_report.json", "trajectory.csv"}) {
    std::ifstream fa(a / f), fb(b / f);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
  }
}
