#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hierlab/config.hpp"
#include "hierlab/errors.hpp"
#include "hierlab/report.hpp"

using namespace hierlab;
namespace fs = std::filesystem;

namespace {

// Returns {line, column} of the ConfigError raised by f.
template <class F>
std::pair<int, int> error_position(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return {e.line(), e.column()};
  }
  return {-1, -1};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hierlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = Config::parse(
      "# comment\n"
      "[time]\n"
      "t1 = 0.5\n"
      "dt=1e-3\n"
      "\n"
      "[scenario]\n"
      "seed = 0x10\n"
      "[chaos]\n"
      "particles = 2, 3,4\n"
      "initial_re = 0.8,0.6\n");
  CHECK(cfg.get_double("time.t1", 0.0) == 0.5);
  CHECK(cfg.get_double("time.dt", 0.0) == 1e-3);
  CHECK(cfg.get_double("time.t0", 7.0) == 7.0);
  CHECK(cfg.get_u64("scenario.seed", 0) == 16);
  CHECK(cfg.get_ints("chaos.particles", {}) == std::vector<int>{2, 3, 4});
  CHECK(cfg.get_doubles("chaos.initial_re", {}) == std::vector<double>{0.8, 0.6});
  CHECK(cfg.entries().at("time.t1").line == 3);
  CHECK(cfg.entries().at("time.t1").column == 6);
}

TEST_CASE("config errors carry positions") {
  CHECK(error_position([] { Config::parse("[time\nt1 = 1\n"); }).first == 1);
  CHECK(error_position([] { Config::parse("t1 = 1\n"); }) == std::pair{1, 1});
  CHECK(error_position([] { Config::parse("[time]\nt1 1\n"); }).first == 2);
  CHECK(error_position([] { Config::parse("[time]\nt1 = 1\nt1 = 2\n"); }).first == 3);
  CHECK(error_position([] { Config::parse("[time]\n  bad key = 2\n"); }).first == 2);
  CHECK(error_position([] { Config::parse("[time] x\n"); }).first == 1);

  const auto cfg = Config::parse("[time]\nt1 = abc\n[model]\n  cutof = 3\n");
  CHECK(error_position([&] { cfg.get_double("time.t1", 0.0); }) == std::pair{2, 6});
  CHECK(error_position([&] { cfg.get_int("time.t1", 0); }) == std::pair{2, 6});
  CHECK(error_position([&] { cfg.reject_unknown({"time.t1"}); }) == std::pair{4, 3});
  CHECK(error_position([&] { cfg.reject("time.dt", "missing"); }) == std::pair{0, 0});
  CHECK(error_position([] { Config::parse("[a]\nx = 1.5\n").get_int("a.x", 0); }).first == 2);
  CHECK(error_position([] { Config::parse("[a]\nx = 1 ; note\n").get_double("a.x", 0); }) == std::pair{2, 5});
  CHECK(error_position([] { Config::parse("[a]\nx = 1,,2\n").get_doubles("a.x", {}); }).first == 2);
  CHECK(error_position([] { Config::load("/nonexistent/hierlab.ini"); }).first == 0);
}

TEST_CASE("csv tables") {
  CsvTable t{"demo", {"a", "b"}, {}};
  t.add_row({"1", format_number(0.1)});
  t.add_row({"x", format_number(1e-300)});
  CHECK(t.render() == "a,b\n1,0.1\nx,1e-300\n");
  CHECK_THROWS(t.add_row({"only"}));
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sha256 matches known digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path target = dir / "out.txt";
  write_file_atomic(target, "first");
  write_file_atomic(target, "second");
  std::ifstream in(target);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  write_file_atomic(dir / "nested" / "x.txt", "y");
  CHECK(fs::exists(dir / "nested" / "x.txt"));
  fs::remove_all(dir);
}

TEST_CASE("report merge") {
  const nlohmann::json a = {{"schema_version", kSchemaVersion}, {"pass", true}};
  const nlohmann::json b = {{"schema_version", kSchemaVersion}, {"pass", false}};
  CHECK(report_merge({a}, {"a.json"}) == a);

  const auto merged = report_merge({a, b}, {"a.json", "b.json"});
  REQUIRE(merged.is_array());
  REQUIRE(merged.size() == 2);
  CHECK(merged[0]["provenance"] == "a.json");
  CHECK(merged[1]["pass"] == false);

  const nlohmann::json newer = {{"schema_version", kSchemaVersion + 1}};
  CHECK_THROWS_AS(report_merge({a, newer}, {"a.json", "c.json"}), SchemaMismatch);
  CHECK_THROWS_AS(report_merge({nlohmann::json{{"pass", true}}}, {"d.json"}), SchemaMismatch);

  const fs::path dir = scratch_dir("merge");
  write_file_atomic(dir / "r.json", a.dump());
  CHECK(load_report(dir / "r.json") == a);
  write_file_atomic(dir / "bad.json", "{not json");
  CHECK_THROWS(load_report(dir / "bad.json"));
  fs::remove_all(dir);
}
