#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "acslab/errors.hpp"
#include "acslab/field_io.hpp"
#include "acslab/runner.hpp"
#include "acslab/suites.hpp"

using namespace acslab;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("acslab_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("flat hminus run reports kernel dimension 2") {
  const auto dir = scratch("hminus");
  RunOverrides o;
  o.out_dir = dir.string();
  const ExperimentConfig cfg =
      parse_config(R"({"experiment": "hminus", "seed": 3, "grid": {"resolution": 8}, "structure": {"kind": "standard"}})", o);
  const RunResult r = run(cfg);
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(r.json_path));
  CHECK(j["status"] == "ok");
  CHECK(j["result"]["kernel_dim"] == 2);
  CHECK(j["result"]["h_plus"] == 4);
  CHECK(j["result"]["rank_test"] == 2);

  const RunResult again = run(cfg);
  CHECK(again.record == r.record);
}

TEST_CASE("family sweep writes predicted and measured columns") {
  const auto dir = scratch("family");
  RunOverrides o;
  o.out_dir = dir.string();
  const ExperimentConfig cfg = parse_config(
      R"({"experiment": "family", "grid": {"resolution": 8}, "instances": [{"k1": 1, "k2": 0}], "output": {"name": "sweep"}})",
      o);
  const RunResult r = run(cfg);
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(r.csv_path);
  CHECK(csv.rfind("f,l,s,predicted,measured\n", 0) == 0);
  CHECK(csv.find(",2,2\n") != std::string::npos);
}

TEST_CASE("path scan CSV columns") {
  const auto dir = scratch("path");
  RunOverrides o;
  o.out_dir = dir.string();
  o.resolution = 6;
  const ExperimentConfig cfg = parse_config(
      R"({"experiment": "path-scan", "path": {"kind": "family", "l": "0", "s": "0", "samples": [0, 1]}})", o);
  CHECK(cfg.grid.resolution == 6);
  const RunResult r = run(cfg);
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(r.csv_path);
  CHECK(csv.rfind("t,kernel_dim,gap_ratio\n0,2,", 0) == 0);
}

TEST_CASE("lie run") {
  const auto dir = scratch("lie");
  RunOverrides o;
  o.out_dir = dir.string();
  const RunResult r = run(parse_config(R"({"experiment": "lie", "preset": "three-step"})", o));
  const auto j = nlohmann::json::parse(r.record);
  CHECK(j["result"]["h_minus"] == 1);
  CHECK(j["result"]["b_plus"] == 1);
  CHECK(j["result"]["lee_form"] == nlohmann::json::array({0.0, 0.0, -1.0, 0.0}));
}

TEST_CASE("type-D run dumps a readable field") {
  const auto dir = scratch("cy");
  RunOverrides o;
  o.out_dir = dir.string();
  const RunResult r = run(parse_config(
      R"({"experiment": "cy-solve", "grid": {"resolution": 6}, "structure": {"kind": "standard"}, "F": 0})", o));
  CHECK(r.exit_code == 0);
  const FormField omega = read_field((dir / "cy-solve.omega.fld").string());
  CHECK(omega.degree == 2);
  CHECK(omega.chart.resolution == 6);
  CHECK(omega.components[0].mean() == doctest::Approx(1.0));
  std::ostringstream dump;
  dump_field((dir / "cy-solve.omega.fld").string(), dump);
  CHECK(dump.str().find("\"degree\": 2") != std::string::npos);
}

TEST_CASE("computation errors produce an error record") {
  const auto dir = scratch("error");
  RunOverrides o;
  o.out_dir = dir.string();
  const RunResult r = run(parse_config(
      R"({"experiment": "intersection", "grid": {"resolution": 6}, "structure": {"kind": "standard"}, "second": {"kind": "standard"}})",
      o));
  CHECK(r.exit_code != 0);
  const auto j = nlohmann::json::parse(slurp(r.json_path));
  CHECK(j["status"] == "error");
  CHECK(j["error"]["kind"] == "IdenticalStructures");
}

TEST_CASE("configuration errors name the key") {
  CHECK(kind_of(R"({"experiment": "hminus", "structure": {"kind": "family", "l": "0.1*cos(", "s": "0"}})") ==
        ErrorKind::ConfigError);
  CHECK(message_of(R"({"experiment": "hminus", "structure": {"kind": "family", "l": "0.1*cos(", "s": "0"}})")
            .find("structure.l") != std::string::npos);
  CHECK(message_of(R"({"experiment": "hminus", "structure": {"kind": "standard"}, "seeed": 1})").find("seeed") !=
        std::string::npos);
  CHECK(message_of(R"({"experiment": "hminus", "structure": {"kind": "standard", "l": "x1"}})").find("structure.l") !=
        std::string::npos);
  CHECK(message_of(R"({"experiment": "lie", "preset": "kodaira", "grid": {"resolution": 8}})").find("grid") !=
        std::string::npos);
  CHECK(message_of(R"J({"experiment": "hminus", "structure": {"kind": "family", "l": "1/(x1-x1)", "s": "0"}})J")
            .find("not finite") != std::string::npos);
  CHECK(kind_of(R"({"experiment": "nope"})") == ErrorKind::ConfigError);
  CHECK(kind_of(R"({"experiment": "hminus", "grid": {"resolution": 7}, "structure": {}})") == ErrorKind::ConfigError);
  CHECK(kind_of("{not json") == ErrorKind::ConfigError);
}

TEST_CASE("suite names") {
  CHECK(suite_names().size() == 10);
  CHECK(suite_names().front() == "flat-torus");
  std::ostringstream out;
  CHECK_THROWS_AS(reproduce("no-such-suite", out), Error);
  CHECK(reproduce("lie-models", out) == 0);
  CHECK(out.str().find("PASS  [6] lie-models") != std::string::npos);
}
