#include <clocale>
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "nhspec/output.hpp"
#include "nhspec/runner.hpp"

using namespace nhspec;
using namespace nhspec::cli;
using nlohmann::json;

namespace {

json lattice_doc() {
  return json::parse(R"({
    "model": {"kind": "lattice", "gamma": 0.005, "j0": 0, "N": 20, "t": 1},
    "bc": "obc",
    "task": {"name": "spectrum"},
    "output": {"directory": "out"}
  })");
}

}  // namespace

TEST_CASE("format_double: 17 significant digits, locale independent") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(std::nan("")) == "nan");
  const char* old = std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  CHECK(format_double(0.5) == "0.5");
  if (old) std::setlocale(LC_NUMERIC, "C");
}

TEST_CASE("to_csv: header, LF endings, cell types") {
  Table t;
  t.header = {"index", "re_energy", "provenance"};
  t.rows.push_back({1LL, 0.25, std::string("analytic")});
  CHECK(to_csv(t) == "index,re_energy,provenance\n1,0.25,analytic\n");
  const auto j = to_json(t);
  CHECK(j[0]["index"] == 1);
  CHECK(j[0]["provenance"] == "analytic");
}

TEST_CASE("sha256_hex") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("parse_config: valid documents") {
  const auto cfg = parse_config(lattice_doc(), Task::spectrum);
  CHECK(cfg.kind == ModelKind::lattice);
  CHECK(cfg.lattice.sites == 20);
  CHECK(cfg.bc == lattice::Boundary::open);
  CHECK(cfg.output.directory == "out");
  CHECK(cfg.echo == lattice_doc());
  // The echo parses back to the same configuration.
  const auto again = parse_config(cfg.echo, Task::spectrum);
  CHECK(again.lattice.gamma == cfg.lattice.gamma);
  CHECK(again.echo == cfg.echo);

  auto doc = lattice_doc();
  doc["task"] = {{"name", "winding"}, {"scan", {{"re", 0.1}, {"im_min", -0.5}, {"im_max", 0.5}, {"steps", 11}}}};
  doc["bc"] = "pbc";
  const auto w = parse_config(doc, Task::winding);
  REQUIRE(w.winding.bases.size() == 11);
  CHECK(w.winding.bases.front() == cplx(0.1, -0.5));
  CHECK(w.winding.bases.back() == cplx(0.1, 0.5));
}

TEST_CASE("parse_config: validation failures") {
  auto expect_fail = [](json doc, Task task) { CHECK_THROWS_AS(parse_config(doc, task), ConfigError); };
  auto doc = lattice_doc();
  doc["model"]["kind"] = "both";
  expect_fail(doc, Task::spectrum);
  doc = lattice_doc();
  doc["model"].erase("N");
  expect_fail(doc, Task::spectrum);
  doc = lattice_doc();
  doc["model"]["gamma"] = "fast";
  expect_fail(doc, Task::spectrum);
  doc = lattice_doc();
  doc["bc"] = "twisted";
  expect_fail(doc, Task::spectrum);
  doc = lattice_doc();
  doc["model"]["x0"] = 3;
  expect_fail(doc, Task::spectrum);
  doc = lattice_doc();
  doc["task"] = {{"name", "states"}, {"indices", {0}}};
  expect_fail(doc, Task::states);
  doc["task"]["indices"] = {21};
  expect_fail(doc, Task::states);
  doc["task"] = {{"name", "states"}};
  expect_fail(doc, Task::states);
  doc = lattice_doc();
  expect_fail(doc, Task::states);  // task name mismatch
  doc["task"] = {{"name", "sweep"}, {"gamma", {0.1, 0.2}}, {"N", {20, 30}}, {"max_points", 3}};
  expect_fail(doc, Task::sweep);
  doc["task"] = {{"name", "edge"}, {"base_energy", {0.1, -0.05}}};
  expect_fail(doc, Task::edge);  // edge needs a continuum model
  doc = lattice_doc();
  doc["output"]["format"] = "xml";
  expect_fail(doc, Task::spectrum);
  CHECK_THROWS_AS(parse_task("plot"), ConfigError);
}

TEST_CASE("apply_overrides updates the echo") {
  auto cfg = parse_config(lattice_doc(), Task::spectrum);
  apply_overrides(cfg, {std::filesystem::path("elsewhere"), 301, 99});
  CHECK(cfg.output.directory == "elsewhere");
  CHECK(cfg.output.points == 301);
  CHECK(cfg.seed == 99);
  CHECK(cfg.echo["output"]["points"] == 301);
  CHECK(cfg.echo["seed"] == 99);
  const auto again = parse_config(cfg.echo, Task::spectrum);
  CHECK(again.output.points == 301);
  CHECK(again.seed == 99);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(DimensionError("x")) == 2);
  CHECK(exit_code_for(ConvergenceError("x", 3)) == 3);
  CHECK(exit_code_for(IoError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}
