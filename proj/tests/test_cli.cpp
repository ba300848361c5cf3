#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "mallows/json_io.hpp"

using namespace mallows;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"mallows"};
  storage.insert(storage.end(), args);
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mallows_cli_test_" + name);
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(f, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("sample is deterministic") {
  const auto a = invoke({"sample", "--n", "4", "--q", "0.5", "--seed", "1", "--count", "1"});
  const auto b = invoke({"sample", "--n", "4", "--q", "0.5", "--seed", "1", "--count", "1"});
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["records"].size() == 1);
  CHECK(j["records"][0]["permutation"].size() == 4);
  CHECK(j["records"][0].contains("lis"));
  CHECK(j["records"][0].contains("lds"));
  CHECK(j["records"][0].contains("inversions"));
  const auto other = invoke({"sample", "--n", "4", "--q", "0.5", "--seed", "1", "--count", "1", "--workers", "3"});
  CHECK(other.out.substr(other.out.find("\"records\"")) == a.out.substr(a.out.find("\"records\"")));
}

TEST_CASE("sample formats") {
  const auto csv = invoke({"sample", "--n", "5", "--count", "3", "--format", "csv"});
  REQUIRE(csv.code == cli::kOk);
  CHECK(csv.out.find("lis") != std::string::npos);
  const auto arr = invoke({"sample", "--n", "5", "--count", "1", "--format", "array"});
  CHECK(arr.code == cli::kOk);
  CHECK(invoke({"sample", "--format", "xml"}).code == cli::kUsage);
}

TEST_CASE("usage errors exit 2") {
  const auto bad_q = invoke({"sample", "--n", "4", "--q", "1.5"});
  CHECK(bad_q.code == cli::kUsage);
  CHECK(!bad_q.err.empty());
  CHECK(bad_q.out.empty());
  CHECK(invoke({"sample", "--n", "0"}).code == cli::kUsage);
  CHECK(invoke({"sample", "--count", "0"}).code == cli::kUsage);
  CHECK(invoke({"sample", "--n", "abc"}).code == cli::kUsage);
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"exact", "--n", "12"}).code == cli::kUsage);
  CHECK(invoke({"estimate", "--blocks", "10"}).code == cli::kUsage);
}

TEST_CASE("clt with missing or broken constants exits 2") {
  CHECK(invoke({"clt", "--constants", temp_path("does_not_exist.json").string()}).code == cli::kUsage);
  const auto broken = temp_path("broken.json");
  std::ofstream(broken) << "{not json";
  CHECK(invoke({"clt", "--constants", broken.string()}).code == cli::kUsage);
  std::filesystem::remove(broken);
}

TEST_CASE("blocks: file rows, summary, unwritable path") {
  const auto path = temp_path("blocks.csv");
  const auto r = invoke({"blocks", "--q", "0.5", "--blocks", "1", "--out", path.string()});
  REQUIRE(r.code == cli::kOk);
  const auto lines = lines_of(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "x,y,y_down");
  const auto j = Json::parse(r.out);
  CHECK(j["count"] == 1);

  const auto many = invoke({"blocks", "--q", "0.5", "--blocks", "5000", "--out", path.string()});
  REQUIRE(many.code == cli::kOk);
  CHECK(lines_of(path).size() == 5001);
  const auto s = Json::parse(many.out);
  CHECK(s["count"] == 5000);
  double sum_x = 0;
  const auto rows = lines_of(path);
  for (std::size_t i = 1; i < rows.size(); ++i) sum_x += std::stod(rows[i].substr(0, rows[i].find(',')));
  CHECK(s["mean_x"].get<double>() == doctest::Approx(sum_x / 5000).epsilon(1e-14));
  CHECK(s["mu0_hat"].get<double>() == doctest::Approx(5000 / sum_x).epsilon(1e-14));
  std::filesystem::remove(path);

  const auto bad = invoke({"blocks", "--blocks", "1", "--out", "/nonexistent-dir/x.csv"});
  CHECK(bad.code == cli::kIo);
}

TEST_CASE("exact pmf output") {
  const auto r = invoke({"exact", "--n", "2", "--q", "0.5", "--statistic", "pmf"});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j["pmf"]["12"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(j["pmf"]["21"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const auto lis = Json::parse(invoke({"exact", "--n", "3", "--q", "0.5", "--statistic", "lis"}).out);
  CHECK(lis["pmf"]["3"].get<double>() == doctest::Approx(1 / 2.625).epsilon(1e-14));
}

TEST_CASE("chain stationary mu0") {
  const auto r = invoke({"chain", "--mode", "stationary", "--q", "0.5"});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(std::abs(j["mu"][0].get<double>() - 0.288788095086602) < 1e-11);
  const auto fp = Json::parse(invoke({"chain", "--mode", "firstpassage", "--q", "0.5", "--horizon", "3"}).out);
  CHECK(fp["results"][2]["estimate"].get<double>() == doctest::Approx(5.0 / 64).epsilon(1e-13));
}

TEST_CASE("estimate then clt; config echo replays") {
  const auto est = invoke({"estimate", "--q", "0.5", "--blocks", "20000", "--seed", "5"});
  REQUIRE(est.code == cli::kOk);
  const auto constants_path = temp_path("constants.json");
  std::ofstream(constants_path) << est.out;
  const auto csv = temp_path("clt.csv");
  const auto r = invoke({"clt", "--q", "0.5", "--n", "1000", "--reps", "200", "--seed", "6", "--constants",
                         constants_path.string(), "--csv", csv.string()});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j["config"]["seed"] == 6);
  CHECK(j["config"]["reps"] == 200);
  CHECK(j["report"]["summary"]["count"] == 200);
  CHECK(lines_of(csv).size() == 201);

  const auto cfg = temp_path("clt_config.json");
  std::ofstream(cfg) << R"({"q": 0.5, "n": 1000, "reps": 200, "seed": 6, "thresholds": {"ks_max": 0.2}})";
  const auto via_cfg = invoke({"clt", "--constants", constants_path.string(), "--config", cfg.string()});
  REQUIRE(via_cfg.code == cli::kOk);
  const auto jc = Json::parse(via_cfg.out);
  CHECK(jc["report"]["summary"] == j["report"]["summary"]);
  CHECK(jc["config"]["thresholds"]["ks_max"] == 0.2);
  for (const auto& p : {constants_path, csv, cfg}) std::filesystem::remove(p);
}

TEST_CASE("JSON round-trips byte-identically") {
  const std::vector<std::vector<std::string>> commands{
      {"sample", "--n", "7", "--count", "2"},
      {"estimate", "--blocks", "5000"},
      {"lds", "--n", "1000", "--reps", "5"},
      {"chain", "--mode", "kac", "--blocks", "2000"},
      {"chain", "--mode", "tail", "--reps", "2000"},
      {"chain", "--mode", "stationary", "--q", "0.3"},
      {"exact", "--n", "4", "--statistic", "inv"},
  };
  for (const auto& cmd : commands) {
    std::vector<const char*> argv{"mallows"};
    for (const auto& s : cmd) argv.push_back(s.c_str());
    std::ostringstream out, err;
    REQUIRE(cli::run(static_cast<int>(argv.size()), argv.data(), out, err) == cli::kOk);
    CAPTURE(cmd[0]);
    CHECK(Json::parse(out.str()).dump(2) + "\n" == out.str());
  }
}
