#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "artin/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "artin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = artin::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "artin_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("construct") {
  const Result r = run({"construct", "--deltas", "5"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["u"] == 13);
  CHECK(j["v"] == 40);
  CHECK(j["p0"] == 13);

  const auto j28 = nlohmann::json::parse(run({"construct", "--deltas", "28"}).out);
  CHECK(j28["u"] == 45);
  CHECK(j28["v"] == 56);

  const Result lit = run({"construct", "--deltas", "28", "--literal-v"});
  CHECK(nlohmann::json::parse(lit.out)["v"] == 224);

  const Result val = run({"construct", "--deltas", "5", "--validate", "--sample-x", "10000"});
  CHECK(val.code == 0);
  CHECK(nlohmann::json::parse(val.out)["validation"]["witnesses"].get<int>() > 0);

  CHECK(run({"construct", "--deltas", "12"}).code == 1);
}

TEST_CASE("exit codes for malformed invocations") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  const Result flag = run({"construct", "--nope"});
  CHECK(flag.code == 2);
  CHECK(flag.err.find("Usage") != std::string::npos);
  CHECK(run({"scan", "--format", "xml", "--deltas", "5"}).code == 2);
  CHECK(run({"scan", "--deltas", "8", "--unit", "3"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("classify") {
  const Result r = run({"classify", "--p", "13", "--x", "10000", "--delta", "0.05"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["case"] == "Case1");
  const auto fail = nlohmann::json::parse(run({"classify", "--p", "29", "--x", "10000"}).out);
  CHECK(fail["case"] == "Fail");
  CHECK(fail["failure"] == "r2 > p^(1/2+delta^2) violated");
  CHECK(run({"classify", "--p", "11"}).code == 1);
}

TEST_CASE("scan and direct-scan output") {
  const Result r = run({"scan", "--deltas", "8", "--unit", "3,2", "--x", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("p,case,u1_c,u1_order,u1_primitive\n5,Case1,1,6,1\n", 0) == 0);

  const Result d = run({"direct-scan", "--deltas", "8", "--unit", "3,2", "--x", "100", "--format", "json"});
  CHECK(d.code == 0);
  std::istringstream lines(d.out);
  std::string line;
  std::vector<int> ps;
  while (std::getline(lines, line)) ps.push_back(nlohmann::json::parse(line)["p"].get<int>());
  CHECK(ps == std::vector<int>{3, 5, 11, 13, 19, 29, 37, 43, 53, 59, 61, 67, 83});
  CHECK(run({"direct-scan", "--deltas", "5,8"}).code == 1);
}

TEST_CASE("scan output is byte-identical across worker counts") {
  const fs::path a = scratch("w1.csv"), b = scratch("w8.csv"), sa = scratch("w1.json"), sb = scratch("w8.json");
  CHECK(run({"scan", "--deltas", "5,8", "--x", "300000", "--workers", "1", "--out", a.string(), "--summary",
             sa.string()})
            .code == 0);
  CHECK(run({"scan", "--deltas", "5,8", "--x", "300000", "--workers", "8", "--out", b.string(), "--summary",
             sb.string()})
            .code == 0);
  CHECK(slurp(a).size() > 1000);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(sa) == slurp(sb));
}

TEST_CASE("config file with flag override") {
  const fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"deltas": [28], "x": 1000})";
  const Result r = run({"construct", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["u"] == 45);
  const Result o = run({"construct", "--config", cfg.string(), "--deltas", "5"});
  CHECK(nlohmann::json::parse(o.out)["u"] == 13);
  std::ofstream(scratch("bad.json")) << "{not json";
  CHECK(run({"construct", "--config", scratch("bad.json").string()}).code == 2);
}

TEST_CASE("reports") {
  const Result m = run({"mertens", "--x", "100", "--beta", "0.5", "--alpha", "1.0"});
  CHECK(m.code == 0);
  CHECK(std::abs(nlohmann::json::parse(m.out)["sum"].get<double>() - 0.627) <= 0.001);

  const Result obs = run({"census", "--kind", "obs", "--a", "2", "--y", "3"});
  CHECK(nlohmann::json::parse(obs.out)["count"] == 1);

  const Result bv = run({"census", "--kind", "bv", "--x", "1000", "--moduli", "1,4"});
  CHECK(nlohmann::json::parse(bv.out)["table"].size() == 2);

  const Result nk = run({"census", "--kind", "narkiewicz", "--deltas", "8", "--x", "10000", "--y-grid", "10,100"});
  CHECK(nk.code == 0);
  CHECK(nlohmann::json::parse(nk.out)["table"].size() == 2);

  const Result sr = run({"sieve-report", "--deltas", "5", "--x", "100000", "--c2", "0"});
  CHECK(sr.code == 0);
  CHECK(nlohmann::json::parse(sr.out).contains("remainder_sum"));
}
