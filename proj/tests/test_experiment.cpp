#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phaserec/error.hpp"
#include "phaserec/experiment.hpp"

using namespace phaserec;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json forward_config() {
  return json::parse(R"({
    "mode": "forward",
    "potential": {"dimension": 2, "kind": "disc_constant", "params": [0.5, 1.0], "support_radius": 1.0},
    "E": 1.0,
    "k_direction": [1.0, 0.0],
    "l_direction": [0.0, 1.0],
    "cells_per_side": 12
  })");
}

json recover_config() {
  auto config = forward_config();
  config["mode"] = "recover";
  config["n_list"] = {2, 4, 8, 16};
  config["seed"] = 7;
  return config;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("phaserec_test_" + name);
  fs::remove_all(dir);
  fs::remove_all(dir.string() + ".partial");
  return dir;
}

std::string error_of(const json& raw) {
  try {
    validate_config(raw);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config validation") {
  const auto config = validate_config(forward_config().dump());
  CHECK(config.mode == Mode::forward);
  CHECK(config.dimension() == 2);
  CHECK(config.cells_per_side == 12);
  CHECK(config.warnings.empty());

  auto bad = forward_config();
  bad["E"] = -1.0;
  CHECK(error_of(bad).find("E > 0") != std::string::npos);

  bad = forward_config();
  bad["energy"] = 1.0;
  CHECK(error_of(bad).find("energy") != std::string::npos);

  bad = forward_config();
  bad["potential"]["radius"] = 1.0;
  CHECK(error_of(bad).find("potential.radius") != std::string::npos);

  bad = forward_config();
  bad["k_direction"] = {1.0, 0.1};
  CHECK(error_of(bad).find("k_direction") != std::string::npos);

  bad = forward_config();
  bad.erase("cells_per_side");
  CHECK(error_of(bad).find("cells_per_side") != std::string::npos);

  bad = recover_config();
  bad["n_list"] = {2, 2, 4};
  CHECK(error_of(bad).find("n_list") != std::string::npos);

  bad = recover_config();
  bad["l_direction"] = {1.0, 0.0};
  CHECK_THROWS_AS(validate_config(bad), DegeneracyError);

  bad = recover_config();
  bad["s_offsets"] = {0.0, 3.14159265358979};
  CHECK_THROWS_AS(validate_config(bad), DegeneracyError);

  bad = recover_config();
  bad["l_direction"] = {0.9999, 0.0141414};
  CHECK_THROWS_AS(validate_config(bad), ValidationError);

  auto warned = recover_config();
  warned["l_direction"] = {0.5, std::sqrt(0.75)};
  warned["potential"]["support_radius"] = 1.0;
  warned["potential"]["params"] = {0.5, 0.1};
  warned["potential"]["support_radius"] = 0.1;
  CHECK(validate_config(warned).warnings.size() == 1);

  CHECK_THROWS_AS(validate_config(std::string("{not json")), ValidationError);
  CHECK(validate_config(config.to_json().dump()).to_json() == config.to_json());
}

TEST_CASE("forward run with v = 0") {
  auto raw = forward_config();
  raw["potential"] = json::parse(R"({"dimension": 2, "kind": "disc_constant", "params": [0.0, 1.0], "support_radius": 1.0})");
  const auto dir = scratch("forward_zero");
  const auto report = run_experiment(validate_config(raw), dir);
  CHECK(report.f_direct == Complex{0.0, 0.0});
  CHECK(report.per_n.empty());
  CHECK(fs::exists(dir / "report.json"));
  CHECK_FALSE(fs::exists(dir / "per_n.csv"));
  const auto written = json::parse(read_file(dir / "report.json"));
  CHECK(written["f_direct"]["re"] == 0.0);
  CHECK_FALSE(written.contains("wall_time_seconds"));
  fs::remove_all(dir);
}

TEST_CASE("recover run emits the documented files") {
  const auto config = validate_config(recover_config());
  const auto dir = scratch("recover");
  const auto report = run_experiment(config, dir);
  CHECK(report.per_n.size() == 4);
  CHECK(first_line(dir / "per_n.csv") == "n,f_hat_re,f_hat_im,abs_error");
  CHECK(first_line(dir / "ray_samples.csv") == "s,a_value,offset_index");
  CHECK(fs::exists(dir / "timing.json"));

  SUBCASE("determinism") {
    const auto again = scratch("recover_again");
    run_experiment(config, again);
    CHECK(read_file(dir / "report.json") == read_file(again / "report.json"));
    CHECK(read_file(dir / "per_n.csv") == read_file(again / "per_n.csv"));
    fs::remove_all(again);
  }
  SUBCASE("raw samples reproduce the in-process recovery") {
    auto raw = recover_config();
    raw["samples_csv"] = (dir / "ray_samples.csv").string();
    const auto replay = compute_experiment(validate_config(raw));
    REQUIRE(replay.per_n.size() == report.per_n.size());
    for (std::size_t i = 0; i < replay.per_n.size(); ++i) {
      CHECK(std::abs(replay.per_n[i].f_hat - report.per_n[i].f_hat) < 1e-12);
    }
  }
  SUBCASE("rerun in another mode drops stale files") {
    run_experiment(validate_config(forward_config()), dir);
    CHECK_FALSE(fs::exists(dir / "per_n.csv"));
  }
  fs::remove_all(dir);
}

TEST_CASE("resolvent_reduction and convergence outputs") {
  auto raw = forward_config();
  raw["mode"] = "resolvent_reduction";
  raw["source_point"] = {1.5, 0.5};
  raw["s_values"] = {100.0, 200.0, 400.0};
  const auto dir = scratch("reduction");
  const auto report = run_experiment(validate_config(raw), dir);
  CHECK(report.reduction.size() == 3);
  CHECK(first_line(dir / "reduction.csv") == "s,scaled_Rsq,psi_sq_reference,rel_defect");
  CHECK(report.reduction.back().rel_defect < 0.1);

  auto conv = recover_config();
  conv["mode"] = "convergence";
  conv.erase("cells_per_side");
  conv["grid_list"] = {8, 12, 16};
  const auto conv_dir = scratch("convergence");
  const auto conv_report = run_experiment(validate_config(conv), conv_dir);
  CHECK(conv_report.convergence.size() == 3);
  CHECK(first_line(conv_dir / "convergence.csv") ==
        "cells_per_side,f_direct_re,f_direct_im,successive_diff,final_abs_error");
  fs::remove_all(dir);
  fs::remove_all(conv_dir);
}

TEST_CASE("failed runs leave no output") {
  auto raw = recover_config();
  raw["samples_csv"] = "/nonexistent/samples.csv";
  const auto dir = scratch("failed");
  CHECK_THROWS_AS(run_experiment(validate_config(raw), dir), ValidationError);
  CHECK_FALSE(fs::exists(dir));
  CHECK_FALSE(fs::exists(dir.string() + ".partial"));

  const auto file = scratch("not_a_dir");
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(run_experiment(validate_config(forward_config()), file), ValidationError);
  CHECK_FALSE(fs::exists(file.string() + ".partial"));
  fs::remove(file);
}
