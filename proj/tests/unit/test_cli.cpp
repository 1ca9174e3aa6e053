#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wmlab/cli.hpp"
#include "wmlab/errors.hpp"

using namespace wmlab;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(WMLAB_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("wht of max2 via the CLI") {
  const auto r = call({"wht", "--table", data("max2.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["coeffs"] == json({0.5, 0.5, 0.5, -0.5}));
  const auto csv = call({"wht", "--table", data("max2.json"), "--format", "csv"});
  CHECK(csv.out == "subset,coeff\n{},0.5\n{1},0.5\n{2},0.5\n\"{1,2}\",-0.5\n");
}

TEST_CASE("exit codes") {
  CHECK(call({"verify", "world-model", "--d", "3", "--mixture", "0.2,0.3,0.5"}).code == 0);
  CHECK(call({"verify", "world-model", "--d", "3", "--mixture", "0,0.5,0.5"}).code == 1);
  CHECK(call({"verify", "world-model", "--d", "3", "--mixture", "0.5,0.4"}).code == 2);
  CHECK(call({"verify", "not-a-claim"}).code == 2);
  CHECK(call({"verify", "multi-task"}).code == 2);  // needs a seed
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"verify", "--config", data("bad_unknown_key.json")}).code == 2);
  CHECK(call({"verify", "--config", data("world_model_p1_zero.json")}).code == 1);
}

TEST_CASE("JSON parse errors carry line and column") {
  try {
    cli::parse_json_text("{\n  \"d\": 3,\n  oops\n}", "cfg.json");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("cfg.json:3:") != std::string::npos);
  }
}

TEST_CASE("config validation rejects unknown and mistyped fields") {
  CHECK_NOTHROW(cli::validate_experiment_config(json{{"claim", "world-model"}, {"d", 3}}, false));
  CHECK_THROWS_AS(cli::validate_experiment_config(json{{"claim", "world-model"}, {"dd", 3}}, false), ValidationError);
  CHECK_THROWS_AS(cli::validate_experiment_config(json{{"claim", "world-model"}, {"d", "three"}}, false),
                  ValidationError);
  CHECK_THROWS_AS(cli::validate_experiment_config(json{{"claim", "world-model"}, {"grid", json::object()}}, false),
                  ValidationError);
  CHECK_NOTHROW(cli::validate_experiment_config(
      json{{"claim", "world-model"}, {"seed", 1}, {"grid", {{"d", {2, 3}}}}}, true));
}

TEST_CASE("flags override config values") {
  const auto r = call({"verify", "--config", data("world_model_p1_zero.json"), "--mixture", "0.2,0.3,0.5"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["parameters"]["mixture"].get<std::string>().find("1/5") != std::string::npos);
}

TEST_CASE("sweep CSV schema") {
  const auto r = call({"sweep", "--config", data("sweep_world_model.json")});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("cell,mixture,seed,", 0) == 0);
  CHECK(header.size() > 13);
  CHECK(header.substr(header.size() - 13) == ",status,error");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);
  CHECK(r.out.find(",fail,") != std::string::npos);

  const auto columns = cli::sweep_columns("world-model", {"mixture"});
  CHECK(columns.front() == "cell");
  CHECK(columns.back() == "error");
}

TEST_CASE("determinism across thread counts") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "single-task", "--d", "3", "--trials", "40", "--seed", "3"},
        std::vector<std::string>{"sweep", "--config", data("sweep_multi_task.json")}}) {
    auto one = args, eight = args;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const auto a = call(one);
    const auto b = call(eight);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("relative --out resolves against the output directory variable") {
  const auto dir = std::filesystem::temp_directory_path() / "wmlab_cli_test";
  std::filesystem::remove_all(dir);
  ::setenv(cli::kOutDirEnv, dir.c_str(), 1);
  const auto r = call({"degree", "--table", data("max2.json"), "--out", "sub/deg.json"});
  ::unsetenv(cli::kOutDirEnv);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(dir / "sub" / "deg.json");
  REQUIRE(f.good());
  CHECK(json::parse(f)["degree"] == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("minsolve and model-validate commands") {
  const auto r = call({"minsolve", "--task", data("task_table1_x1x4x5.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["solution"]["degree"] == 3);
  CHECK(j["model_ref"] == "table1");
  const auto v = call({"model-validate", "--model", data("model_triple_parity_r1.json")});
  CHECK(v.code == 0);
  CHECK(json::parse(v.out)["support_size"] == 4);
}

TEST_CASE("sample-tasks is seeded") {
  const std::vector<std::string> args{"sample-tasks", "--model", "example-c", "--mixture", "0.2,0.3,0.5",
                                      "--count", "5", "--seed", "8"};
  const auto a = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == call(args).out);
  CHECK(json::parse(a.out)["tasks"].size() == 5);
  CHECK(call({"sample-tasks", "--model", "example-c"}).code == 2);
}
