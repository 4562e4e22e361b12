#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "spectra_lab/io.hpp"

using namespace spectra_lab;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "spectra_lab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("words") {
  const auto r2 = run({"words", "--k", "2"});
  REQUIRE(r2.code == 0);
  const auto p = r2.json()["payload"];
  CHECK(p["count"] == 3);
  CHECK(p["catalan_count"] == 2);
  CHECK(p["symmetric_count"] == 2);
  const auto r3 = run({"words", "--k", "3"}).json()["payload"];
  CHECK(r3["count"] == 15);
  CHECK(r3["catalan_count"] == 5);
  CHECK(r3["symmetric_count"] == 6);
  CHECK(run({"words", "--k", "7"}).code == cli::kUsage);
}

TEST_CASE("count") {
  const auto a = run({"count", "--word", "abab", "--kind", "toeplitz", "--n", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.json()["payload"]["raw"] == 8);
  const auto b = run({"count", "--word", "aa", "--kind", "wigner", "--sign", "skew", "--n", "3"}).json();
  CHECK(b["payload"]["p_estimate"].get<double>() == doctest::Approx(2.0 / 3.0));
  const auto c = run({"count", "--word", "abab", "--kind", "toeplitz", "--ladder", "8,16,32", "--extrapolate"}).json();
  CHECK(c["payload"]["extrapolation"]["limit"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(c["payload"]["ladder"].size() == 3);

  const auto big = run({"count", "--word", "abcdabcd", "--kind", "toeplitz", "--n", "500", "--budget", "1e6"});
  CHECK(big.code == cli::kResource);
  CHECK(run({"count", "--word", "abab", "--kind", "toeplitz"}).code == cli::kUsage);
  CHECK(run({"count", "--word", "baab", "--kind", "toeplitz", "--n", "3"}).code == cli::kUsage);
}

TEST_CASE("integrate") {
  const auto a = run({"integrate", "--word", "abab", "--kind", "toeplitz", "--weight", "modified", "--samples", "200000"});
  REQUIRE(a.code == 0);
  const auto p = a.json()["payload"];
  CHECK(p["value"].get<double>() == doctest::Approx(2.0 / 9.0).epsilon(0.03));
  const auto r = run({"integrate", "--region-19-62208", "--samples", "200000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("62208") != std::string::npos);
  CHECK(run({"integrate", "--word", "abab", "--kind", "wigner"}).code == cli::kUsage);
}

TEST_CASE("simulate") {
  const auto a = run({"simulate", "--kind", "wigner", "--modifier", "skew", "--n", "200", "--seed", "3"});
  REQUIRE(a.code == 0);
  const auto j = a.json();
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "simulate");
  CHECK(j["config"]["n"] == 200);
  CHECK(j["payload"]["kolmogorov"]["reference"] == "semicircle");
  CHECK(j["payload"]["moments"].size() > 0);

  const auto missing = run({"simulate", "--kind", "wigner"});
  CHECK(missing.code == cli::kUsage);
  CHECK(missing.err.find("--n") != std::string::npos);
  CHECK(run({"simulate", "--kind", "nope", "--n", "5"}).code == cli::kUsage);
}

TEST_CASE("simulate writes record, histogram and spectrum files") {
  const auto dir = scratch();
  const auto out = dir / "hankel.json";
  const auto r = run({"simulate", "--kind", "hankel", "--modifier", "skew", "--n", "100", "--dist", "gaussian",
                      "--seed", "7", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("wrote") == 0);
  CHECK(Json::parse(slurp(out))["payload"]["histogram"].size() == 81);
  CHECK(slurp(dir / "hankel.hist.csv").rfind("bin_left,bin_right,count\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "hankel.spectrum.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("same inputs give byte-identical payloads") {
  const std::vector<std::string> args{"simulate", "--kind", "toeplitz", "--modifier", "modified", "--n", "150", "--seed", "11"};
  const auto a = run(args).json();
  const auto b = run(args).json();
  CHECK(dump_json(a["payload"]) == dump_json(b["payload"]));
  CHECK(dump_json(a["config"]) == dump_json(b["config"]));
}

TEST_CASE("config file with flag precedence") {
  const auto dir = scratch();
  const auto cfg = dir / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"kind": "wigner", "modifier": ["skew"], "n": 50, "seed": 5})";
  }
  const auto a = run({"simulate", "--config", cfg.string(), "--n", "60"}).json();
  CHECK(a["config"]["n"] == 60);
  CHECK(a["config"]["seed"] == 5);
  CHECK(a["config"]["kind"] == "wigner");
  const auto b = run({"simulate", "--kind", "wigner", "--modifier", "skew", "--n", "60", "--seed", "5"}).json();
  CHECK(dump_json(a["payload"]) == dump_json(b["payload"]));
  CHECK(run({"simulate", "--config", (dir / "absent.json").string()}).code == cli::kUsage);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv format") {
  const auto r = run({"words", "--k", "1", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("field,value\n", 0) == 0);
  CHECK(r.out.find("payload.count,1") != std::string::npos);
}

TEST_CASE("compare") {
  const auto r = run({"compare", "--kind", "toeplitz", "--modifier", "skew", "--vs", "toeplitz", "--n", "200",
                      "--reps", "5", "--moment", "4"});
  REQUIRE(r.code == 0);
  const auto p = r.json()["payload"];
  CHECK(p.contains("rule"));
  CHECK(r.out.find("heuristic") != std::string::npos);
  CHECK(run({"compare", "--kind", "toeplitz", "--vs", "nope", "--n", "10"}).code == cli::kUsage);
}

TEST_CASE("interlace") {
  const auto r = run({"interlace", "--kind", "sc", "--modifier", "skew", "--n", "101"});
  REQUIRE(r.code == 0);
  const auto p = r.json()["payload"];
  CHECK(p["gap"].get<double>() <= 1.0 / 101 + 1e-12);
  CHECK(run({"interlace", "--kind", "wigner", "--modifier", "skew", "--n", "2"}).code == 0);
  CHECK(run({"interlace", "--kind", "wigner", "--n", "5"}).code == cli::kUsage);
}

TEST_CASE("no subcommand") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
}
