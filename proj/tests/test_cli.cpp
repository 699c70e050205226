#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(FRS_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  const int status = pclose(pipe);
  res.code = WEXITSTATUS(status);
  return res;
}

json schema(const std::string& name) {
  std::ifstream in(fs::path(FRS_SCHEMA_DIR) / name);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exponent goldens through the command line") {
  const RunResult e3 = run("exponents --example 3 --N 3 --s 0.75");
  REQUIRE(e3.code == 0);
  const json j = json::parse(e3.out);
  std::string err;
  CHECK(oracle::schema_ok(schema("embedding_report.schema.json"), j, &err));
  CAPTURE(err);
  CHECK(j["report"]["q_single_interval"]["lo"].get<double>() == doctest::Approx(2.0));
  CHECK(j["report"]["q_single_interval"]["hi"].get<double>() == doctest::Approx(4.0));

  const RunResult e4 = run("exponents --example 4 --a 1 --b 1 --d 0");
  REQUIRE(e4.code == 0);
  const json j4 = json::parse(e4.out);
  CHECK(j4["report"]["summary"] == "compact for every q > 1");

  // standing assumption of the power family violated: usage error
  const RunResult bad = run("exponents --family power --a 0 --b -3 --N 3 --s 0.75");
  CHECK(bad.code == 2);
}

TEST_CASE("verify campaign writes valid reports and csv series") {
  const fs::path out = fs::temp_directory_path() / "frs_cli_verify";
  fs::remove_all(out);
  const RunResult r =
      run("verify --campaign s0-decay --family power --a 0 --b 0 --q 3 "
          "--budget 800 --M 192 --seed 5 --out " + out.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(out / "verify_s0-decay.json"));
  std::string err;
  CHECK(oracle::schema_ok(schema("verify_report.schema.json"), j, &err));
  CAPTURE(err);
  CHECK(j["operation"] == "s0-decay");
  CHECK(j["series"].size() == 3);
  const std::string csv = slurp(out / "s0-decay.csv");
  CHECK(csv.rfind("R,estimate", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  fs::remove_all(out);
}

TEST_CASE("identical manifests and seeds give identical bytes") {
  const fs::path o1 = fs::temp_directory_path() / "frs_rep_1";
  const fs::path o2 = fs::temp_directory_path() / "frs_rep_2";
  fs::remove_all(o1);
  fs::remove_all(o2);
  const std::string base =
      "verify --campaign sinf-decay --family exponential --cV 2 --cK 1 --q 2.5 "
      "--budget 600 --M 160 ";
  // identical manifest (same out dir) run twice: identical bytes
  REQUIRE(run(base + "--seed 11 --out " + o1.string()).code == 0);
  const std::string first_json = slurp(o1 / "verify_sinf-decay.json");
  const std::string first_csv = slurp(o1 / "sinf-decay.csv");
  REQUIRE(run(base + "--seed 11 --out " + o1.string()).code == 0);
  CHECK(slurp(o1 / "verify_sinf-decay.json") == first_json);
  CHECK(slurp(o1 / "sinf-decay.csv") == first_csv);
  // a different seed changes the maximizer search but not the schema
  const RunResult other = run(base + "--seed 12 --out " + o2.string());
  CHECK(other.code == 0);
  fs::remove_all(o1);
  fs::remove_all(o2);
}

TEST_CASE("solve run writes profiles, sidecars, and a run report") {
  const fs::path out = fs::temp_directory_path() / "frs_cli_solve";
  fs::remove_all(out);
  // a config file drives the run; flags could override
  const fs::path cfgpath = fs::temp_directory_path() / "frs_solve.cfg";
  {
    std::ofstream cfg(cfgpath);
    cfg << "grid.r1 = 1e-3\ngrid.rM = 50\ngrid.M = 192\n"
           "solver.tol = 1e-6\n"
           "nonlinearity.kind = pure_power\nnonlinearity.q1 = 3\n"
           "potentials.kind = exponential\npotentials.cV = 2\npotentials.cK = 1\n";
  }
  const RunResult r =
      run("solve --config " + cfgpath.string() + " --out " + out.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(out / "run_report.json"));
  std::string err;
  CHECK(oracle::schema_ok(schema("run_report.schema.json"), j, &err));
  CAPTURE(err);
  REQUIRE(j["solutions"].size() == 1);
  CHECK(j["solutions"][0]["converged"].get<bool>());
  CHECK(j["solutions"][0]["nonneg"].get<bool>());
  CHECK(j["solutions"][0]["energy"].get<double>() > 0.0);
  // the profile and its sidecar validate
  const json side = json::parse(slurp(out / "solution_0.csv.json"));
  CHECK(oracle::schema_ok(schema("profile_sidecar.schema.json"), side, &err));
  CHECK(side["extrapolation"] == "power_tail");
  const std::string prof = slurp(out / "solution_0.csv");
  CHECK(prof.rfind("r,value", 0) == 0);
  fs::remove_all(out);
  fs::remove(cfgpath);
}

TEST_CASE("out-of-range exponent draws a warning, not an error") {
  const RunResult r =
      run("solve --family exponential --cV 2 --cK 1 --q 5 --M 128 --rM 30 --tol 1e-4");
  // q = 5 sits outside (2, 4); the run still proceeds
  const json j = json::parse(r.out);
  CHECK(j.contains("warning"));
  const std::string w = j["warning"].get<std::string>();
  CHECK(w.find("outside admissible range") != std::string::npos);
  CHECK(w.find("(2") != std::string::npos);
  CHECK(w.find("4)") != std::string::npos);
}

TEST_CASE("sweep emits a grid of estimates") {
  const fs::path out = fs::temp_directory_path() / "frs_cli_sweep";
  fs::remove_all(out);
  const RunResult r = run(
      "sweep --family power --a 0 --b 0 --q-grid 2.5,3 --R-grid 0.2,0.4 "
      "--budget 400 --M 128 --out " + out.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(out / "sweep_report.json"));
  CHECK(j["series"].size() == 4);
  fs::remove_all(out);
}
