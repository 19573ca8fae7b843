#include "doctest.h"

#include "cli.hpp"

#include "mtlab/bounds.hpp"
#include "mtlab/maximizer.hpp"
#include "mtlab/sweep.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace mtlab;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run mt(std::vector<std::string> args) {
  args.insert(args.begin(), "mt");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = mtcli::run(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string last_line(const std::string &s) {
  auto end = s.find_last_not_of('\n');
  auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

} // namespace

TEST_CASE("usage errors exit 2 and name the flag") {
  auto r = mt({"maximize", "--alpha", "20", "--N", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--alpha") != std::string::npos);
  CHECK(mt({}).code == 2);
  CHECK(mt({"frobnicate"}).code == 2);
  CHECK(mt({"maximize", "--N", "x"}).code == 2);
  r = mt({"maximize", "--N", "2", "--alpha", "1", "--a", "-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--a ") != std::string::npos);
  CHECK(mt({"maximize", "--N", "2", "--alpha", "1", "--n-nodes", "7"}).code == 2);
  CHECK(mt({"maximize", "--N", "2", "--alpha", "1", "--format", "xml"}).code == 2);
  CHECK(mt({"maximize", "--N", "2", "--alpha", "12.566370614359172", "--b", "3"}).code == 2);
  CHECK(mt({"sweep", "--axis", "alpha:1:2"}).code == 2);
  CHECK(mt({"sweep", "--axis", "alpha:1:30:3"}).code == 2);
  CHECK(mt({"verify-appendix", "--n-max", "2"}).code == 2);
  CHECK(mt({"alpha0", "--N", "2", "--a", "3", "--b", "2", "--gn-c", "0.2"}).code == 2);
  CHECK(mt({"--help"}).code == 0);
}

TEST_CASE("maximize is a thin adapter") {
  const auto r = mt({"maximize", "--N", "2", "--alpha", "3", "--a", "3", "--b", "2", "--seed", "7", "--restarts", "3"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["invocation"]["seed"] == 7);
  CHECK(j["invocation"]["r_max"] == 40.0);
  CHECK(j["invocation"]["n_nodes"] == 512);
  CHECK(j["verdict"] == "attained-certified-numerically");
  j.erase("invocation");
  j.erase("verdict");
  MaximizerOptions o;
  o.seed = 7;
  o.restarts = 3;
  CHECK(j == to_json(maximize_d(MTParams::make(2, 3.0, 3.0, 2.0), o)));
}

TEST_CASE("human output carries the one-sided disclaimer") {
  auto r = mt({"maximize", "--N", "2", "--alpha", "1", "--a", "3", "--b", "2", "--restarts", "2", "--format", "human"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("one-sided") != std::string::npos);
  r = mt({"alpha-star", "--N", "2", "--a", "3", "--b", "2", "--restarts", "2", "--grid-points", "3",
          "--bisection-steps", "1", "--no-g-test", "--format", "human"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("one-sided") != std::string::npos);
}

TEST_CASE("verify-appendix") {
  auto r = mt({"verify-appendix", "--n-max", "50"});
  CHECK(r.code == 0);
  CHECK(last_line(r.out) == "all claims hold");
  CHECK(r.out.rfind("N,d_N,e_N,log_CN_pow,claim1,claim2,claim3_chain\n3,", 0) == 0);
  CHECK(r.out.find("39/40") != std::string::npos);
  r = mt({"verify-appendix", "--n-max", "100", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["all_claims_hold"] == true);
  CHECK(j["n2_cubic_exact"] == "39/40");
  CHECK(j["c3_squared"] == "27/32");
  CHECK(j["claim1_rows"] == 98);
}

TEST_CASE("bgn and alpha-star examples") {
  auto r = mt({"bgn", "--N", "2"});
  REQUIRE(r.code == 0);
  const auto g = json::parse(r.out);
  CHECK(g["bgn_estimate"].get<double>() > 0.15915);
  r = mt({"alpha-star", "--N", "2", "--a", "2", "--b", "8"});
  REQUIRE(r.code == 0);
  const auto a = json::parse(r.out);
  CHECK(a["alpha_high"].get<double>() < alpha_critical(2));
  CHECK(a["alpha_high"].get<double>() <= 4 / (8 * g["bgn_estimate"].get<double>()) + alpha_critical(2) / 12);
}

TEST_CASE("g-test and alpha0 match the API") {
  auto r = mt({"g-test", "--N", "2", "--alpha", "6.283185307179586", "--a", "2", "--b", "8", "--bgn", "0.1709"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  j.erase("invocation");
  j.erase("bgn_source");
  CHECK(j == to_json(g_function_test(2 * M_PI, 2.0, 8.0, 2, 0.1709).report));
  r = mt({"alpha0", "--N", "2", "--a", "1.5", "--b", "3", "--gn-c", "0.2"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["values"]["alpha0"].get<double>() == alpha0_nonexistence(1.5, 3.0, 2, 0.2).alpha0);
}

TEST_CASE("eval") {
  auto r = mt({"eval", "--N", "2", "--alpha", "2", "--a", "2", "--b", "2", "--profile", "gaussian", "--normalize"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["constraint_value"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["mt_integral"].get<double>() >= j["j_truncated"].get<double>() * (1 - 1e-13));
  CHECK(mt({"eval", "--profile", "square"}).code == 2);

  const auto path = (std::filesystem::temp_directory_path() / "mtlab_cli_profile.csv").string();
  {
    std::ofstream f(path);
    f << "r,u\n0,1\n1,0.5\n2,0\n";
  }
  r = mt({"eval", "--profile-file", path});
  CHECK(r.code == 0);
  std::filesystem::remove(path);
  CHECK(mt({"eval", "--profile-file", "/nonexistent/p.csv"}).code == 1);
}

TEST_CASE("sweep output is byte-identical and file output works") {
  const std::vector<std::string> args = {"sweep", "--N", "2", "--a", "3", "--b", "2", "--axis", "alpha:0.5:3:3",
                                         "--restarts", "2", "--seed", "5"};
  const auto r1 = mt(args), r2 = mt(args);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.rfind("alpha,best_value,lower_bound,margin,verdict,mode,iters,seed\n", 0) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "mtlab_cli_sweep";
  std::filesystem::create_directories(dir);
  auto with_out = args;
  with_out.push_back("--out");
  with_out.push_back((dir / "s.csv").string());
  CHECK(mt(with_out).code == 0);
  std::ifstream f(dir / "s.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == r1.out);
  CHECK(std::filesystem::exists(dir / "s.csv.json"));
  std::filesystem::remove_all(dir);

  auto bad_out = args;
  bad_out.push_back("--out");
  bad_out.push_back("/nonexistent-dir/s.csv");
  CHECK(mt(bad_out).code == 1);
}

TEST_CASE("phase-map") {
  const auto r = mt({"phase-map", "--N", "2", "--alpha", "3", "--a-axis", "2:3:2", "--b-axis", "2:10:2", "--restarts",
                     "2", "--bgn", "0.1709", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][3]["verdict"] == "attained-certified-numerically");
  CHECK(j["rows"][1]["verdict"] == "attained-certified-numerically");
}

TEST_CASE("MT_LAB_THREADS fallback") {
  setenv("MT_LAB_THREADS", "3", 1);
  auto r = mt({"eval"});
  CHECK(json::parse(r.out)["invocation"]["threads"] == 3);
  r = mt({"eval", "--threads", "2"});
  CHECK(json::parse(r.out)["invocation"]["threads"] == 2);
  unsetenv("MT_LAB_THREADS");
}
