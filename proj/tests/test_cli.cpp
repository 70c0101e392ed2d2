#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

namespace {

namespace fs = std::filesystem;

const std::string exe = FGL_CLI_PATH;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = '"' + exe + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d =
      fs::temp_directory_path() / ("fgl_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("version, help, and usage errors", "[cli]") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("--version", dir / "v.txt") == 0);
  CHECK(contains(slurp(dir / "v.txt"), "fgl 0.1.0"));
  CHECK(run_cli("--help", dir / "h.txt") == 0);
  CHECK(contains(slurp(dir / "h.txt"), "certify-family"));
  CHECK(contains(slurp(dir / "h.txt"), "limit-experiment"));
  CHECK(run_cli("", dir / "none.txt") == 2);
  CHECK(run_cli("frobnicate", dir / "bad.txt") == 2);
  CHECK(run_cli("solve --no-such-flag 3", dir / "flag.txt") == 2);
  fs::remove_all(dir);
}

TEST_CASE("certify-family writes a report and rejects bad specs", "[cli]") {
  const fs::path dir = fresh_dir("certify");
  CHECK(run_cli("certify-family power:p=8 --samples 2000 --outdir \"" + (dir / "out").string() +
                    "\"",
                dir / "log.txt") == 0);
  CHECK(contains(slurp(dir / "log.txt"), "all inequalities hold"));
  const std::string rep = slurp(dir / "out" / "certify_report.json");
  CHECK(contains(rep, "\"artifact_version\": \"0.1.0\""));
  CHECK(contains(rep, "\"family\": \"power:p=8\""));
  CHECK(contains(rep, "\"all_pass\": true"));

  CHECK(run_cli("certify-family power:p=banana", dir / "bad1.txt") == 2);
  CHECK(run_cli("certify-family power:p=1", dir / "bad2.txt") == 2);
  CHECK(run_cli("certify-family gauss:p=2", dir / "bad3.txt") == 2);
  fs::remove_all(dir);
}

TEST_CASE("solve writes versioned artifacts", "[cli]") {
  const fs::path dir = fresh_dir("solve");
  const std::string base = "solve --domain interval:-1,1 --n 41 --s 0.5 --R 4 "
                           "--family power:p=4 --f const:1 ";
  CHECK(run_cli(base + "--outdir \"" + (dir / "out").string() + '"', dir / "log.txt") == 0);
  CHECK(contains(slurp(dir / "log.txt"), "converged=yes"));

  const std::string j = slurp(dir / "out" / "solve.json");
  CHECK(contains(j, "\"artifact_version\": \"0.1.0\""));
  CHECK(contains(j, "\"family\": \"power:p=4\""));
  CHECK(contains(j, "\"n\": 41"));
  CHECK(contains(j, "\"converged\": true"));

  const std::string csv = slurp(dir / "out" / "solution.csv");
  CHECK(contains(csv, "# artifact_version=0.1.0"));
  CHECK(contains(csv, "x,u"));
  int rows = 0;
  std::istringstream ss(csv);
  for (std::string line; std::getline(ss, line);)
    if (!line.empty() && line[0] != '#' && line != "x,u") ++rows;
  CHECK(rows == 41);
  fs::remove_all(dir);
}

TEST_CASE("invalid configurations exit with code 2", "[cli]") {
  const fs::path dir = fresh_dir("config");
  const std::string head = "solve --domain interval:-1,1 --family power:p=4 --f const:1 ";
  CHECK(run_cli(head + "--n 4 --s 0.5 --R 4", dir / "a.txt") == 2);
  CHECK(run_cli(head + "--n 41 --s 1.5 --R 4", dir / "b.txt") == 2);
  CHECK(run_cli(head + "--n 41 --s 0.5 --R 1", dir / "c.txt") == 2);
  CHECK(run_cli("solve --domain interval:1,-1 --n 41 --s 0.5 --R 4", dir / "d.txt") == 2);
  CHECK(run_cli("solve --domain interval:-1,1 --n 41 --s 0.5 --R 4 --f csv:" +
                    (dir / "missing.csv").string(),
                dir / "e.txt") == 2);
  fs::remove_all(dir);
}

TEST_CASE("load values can come from a csv file", "[cli]") {
  const fs::path dir = fresh_dir("csvload");
  {
    std::ofstream out(dir / "f.csv");
    out << "# hand-written load\n";
    for (int i = 0; i < 41; ++i) out << "0.5\n";
  }
  CHECK(run_cli("solve --domain interval:-1,1 --n 41 --s 0.5 --R 4 --family power:p=4 "
                "--f csv:" +
                    (dir / "f.csv").string() + " --outdir \"" + (dir / "out").string() + '"',
                dir / "log.txt") == 0);
  // wrong length must be rejected
  {
    std::ofstream out(dir / "short.csv");
    for (int i = 0; i < 7; ++i) out << "0.5\n";
  }
  CHECK(run_cli("solve --domain interval:-1,1 --n 41 --s 0.5 --R 4 --f csv:" +
                    (dir / "short.csv").string(),
                dir / "bad.txt") == 2);
  fs::remove_all(dir);
}

TEST_CASE("limit-experiment artifacts are deterministic", "[cli]") {
  const fs::path dir = fresh_dir("limit");
  const std::string base =
      "limit-experiment --domain interval:-1,1 --n 61 --s 0.5 --R 4 --family-kind power "
      "--exponents 4,8 --f const:1 --trials 5 --outdir ";
  CHECK(run_cli(base + '"' + (dir / "a").string() + '"', dir / "log_a.txt") == 0);
  CHECK(run_cli(base + '"' + (dir / "b").string() + '"', dir / "log_b.txt") == 0);
  for (const char* name : {"report.json", "report.csv", "sup_error.svg", "solution_p4.csv",
                           "solution_p8.csv"}) {
    INFO(name);
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  const std::string rep = slurp(dir / "a" / "report.json");
  CHECK(contains(rep, "\"artifact_version\": \"0.1.0\""));
  CHECK(contains(rep, "\"exponents\": \"4,8\""));
  const std::string csv = slurp(dir / "a" / "report.csv");
  CHECK(contains(csv, "p_minus,p_plus,sup_error_vs_oracle"));
  CHECK(contains(slurp(dir / "a" / "sup_error.svg"), "<svg"));
  fs::remove_all(dir);
}

TEST_CASE("gamma-check and region-check succeed on small runs", "[cli]") {
  const fs::path dir = fresh_dir("checks");
  CHECK(run_cli("gamma-check --domain interval:-1,1 --n 61 --s 0.5 --R 4 --family-kind power "
                "--exponents 8,16 --outdir \"" +
                    (dir / "g").string() + '"',
                dir / "glog.txt") == 0);
  CHECK(contains(slurp(dir / "g" / "gamma.json"), "\"rows\""));

  CHECK(run_cli("region-check --domain interval:-1,1 --n 41 --s 0.5 --R 4 --family-kind power "
                "--exponents 4,8,16,32,64 --f const:1 --outdir \"" +
                    (dir / "r").string() + '"',
                dir / "rlog.txt") == 0);
  const std::string rep = slurp(dir / "r" / "region.json");
  CHECK(contains(rep, "\"all_pass\": true"));
  CHECK(contains(rep, "\"f positive\""));
  fs::remove_all(dir);
}

TEST_CASE("disk domains solve through the cli", "[cli][2d]") {
  const fs::path dir = fresh_dir("disk");
  CHECK(run_cli("solve --domain disk:r=1 --n 12 --s 0.5 --R 4 --family power:p=4 "
                "--f const:1 --outdir \"" +
                    (dir / "out").string() + '"',
                dir / "log.txt") == 0);
  CHECK(contains(slurp(dir / "log.txt"), "converged=yes"));
  const std::string csv = slurp(dir / "out" / "solution.csv");
  CHECK(contains(csv, "x,y,u"));
  CHECK(contains(csv, "\"domain\":\"disk:r=1\""));
  fs::remove_all(dir);
}
