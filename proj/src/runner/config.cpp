#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nhspec/runner.hpp"

namespace nhspec::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key + " must be finite");
  return d;
}

double number_or(const json& obj, const std::string& key, const std::string& where, double def) {
  return obj.contains(key) ? number(obj, key, where) : def;
}

long long integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::size_t count_or(const json& obj, const std::string& key, const std::string& where,
                     std::size_t def) {
  if (!obj.contains(key)) return def;
  const long long v = integer(obj, key, where);
  if (v <= 0) fail(where + "." + key + " must be positive");
  return static_cast<std::size_t>(v);
}

cplx complex_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(where + " must be a [re, im] pair");
  }
  const double re = v[0].get<double>();
  const double im = v[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) fail(where + " must be finite");
  return {re, im};
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& where,
                                 double def) {
  if (!obj.contains(key)) return {def};
  const json& v = obj.at(key);
  if (!v.is_array()) fail(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(where + "." + key + " entries must be numbers");
    const double d = e.get<double>();
    if (!std::isfinite(d)) fail(where + "." + key + " entries must be finite");
    out.push_back(d);
  }
  return out;
}

void parse_model(const json& m, RunConfig& cfg) {
  if (!m.is_object()) fail("model must be an object");
  if (!m.contains("kind") || !m["kind"].is_string()) fail("model.kind is required");
  const std::string kind = m["kind"].get<std::string>();
  if (kind == "continuum") {
    check_keys(m, "model", {"kind", "gamma", "x0", "L", "m"});
    if (!m.contains("L")) fail("model.L is required for a continuum model");
    cfg.kind = ModelKind::continuum;
    cfg.continuum.gamma = number_or(m, "gamma", "model", 0.0);
    cfg.continuum.x0 = number_or(m, "x0", "model", 0.0);
    cfg.continuum.length = number(m, "L", "model");
    if (m.contains("m")) {
      const long long order = integer(m, "m", "model");
      if (order < 0) fail("model.m must be non-negative");
      cfg.continuum.order = static_cast<unsigned>(order);
    }
    try {
      cfg.continuum.validate();
    } catch (const InputError& e) {
      fail(e.what());
    }
  } else if (kind == "lattice") {
    check_keys(m, "model", {"kind", "gamma", "j0", "N", "t"});
    if (!m.contains("N")) fail("model.N is required for a lattice model");
    cfg.kind = ModelKind::lattice;
    cfg.lattice.gamma = number_or(m, "gamma", "model", 0.0);
    cfg.lattice.j0 = number_or(m, "j0", "model", 0.0);
    cfg.lattice.t = number_or(m, "t", "model", 1.0);
    const long long n = integer(m, "N", "model");
    if (n < 2) fail("model.N must be at least 2");
    cfg.lattice.sites = static_cast<std::size_t>(n);
  } else {
    fail("model.kind must be 'continuum' or 'lattice'");
  }
}

void parse_output(const json& o, RunConfig& cfg) {
  check_keys(o, "output", {"directory", "format", "points", "norm"});
  if (o.contains("directory")) {
    if (!o["directory"].is_string()) fail("output.directory must be a string");
    cfg.output.directory = o["directory"].get<std::string>();
  }
  if (o.contains("format")) {
    const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
    if (f == "csv") cfg.output.format = OutputFormat::csv;
    else if (f == "json") cfg.output.format = OutputFormat::json;
    else fail("output.format must be 'csv' or 'json'");
  }
  cfg.output.points = count_or(o, "points", "output", 0);
  if (o.contains("norm")) {
    const std::string n = o["norm"].is_string() ? o["norm"].get<std::string>() : "";
    if (n == "unit_l2") cfg.output.norm = NormConvention::unit_l2;
    else if (n == "unit_max") cfg.output.norm = NormConvention::unit_max;
    else if (n == "raw") cfg.output.norm = NormConvention::raw;
    else fail("output.norm must be 'unit_l2', 'unit_max' or 'raw'");
  }
}

void parse_task_params(const json& t, RunConfig& cfg) {
  switch (cfg.task) {
    case Task::spectrum: {
      check_keys(t, "task", {"name", "count"});
      const std::size_t c = count_or(t, "count", "task", 30);
      if (c > 100000) fail("task.count too large");
      cfg.spectrum.count = static_cast<int>(c);
      break;
    }
    case Task::states: {
      check_keys(t, "task", {"name", "indices"});
      if (!t.contains("indices") || !t["indices"].is_array() || t["indices"].empty()) {
        fail("task.indices must be a non-empty array of integers");
      }
      for (const auto& v : t["indices"]) {
        if (!v.is_number_integer()) fail("task.indices entries must be integers");
        cfg.states.indices.push_back(v.get<long>());
      }
      for (long n : cfg.states.indices) {
        const bool ok = cfg.kind == ModelKind::lattice
                            ? (n >= 1 && static_cast<std::size_t>(n) <= cfg.lattice.sites)
                            : (cfg.bc == lattice::Boundary::periodic || n >= 1);
        if (!ok || std::abs(n) > 1000000) fail("state index " + std::to_string(n) + " out of range");
      }
      break;
    }
    case Task::winding: {
      check_keys(t, "task", {"name", "base_energies", "scan", "samples", "cutoff"});
      const bool has_list = t.contains("base_energies");
      const bool has_scan = t.contains("scan");
      if (has_list == has_scan) fail("task needs exactly one of base_energies or scan");
      if (has_list) {
        if (!t["base_energies"].is_array()) fail("task.base_energies must be an array");
        for (const auto& v : t["base_energies"]) {
          cfg.winding.bases.push_back(complex_value(v, "task.base_energies entry"));
        }
      } else {
        const json& s = t["scan"];
        check_keys(s, "task.scan", {"re", "im_min", "im_max", "steps"});
        for (const char* k : {"re", "im_min", "im_max", "steps"}) {
          if (!s.contains(k)) fail(std::string("task.scan.") + k + " is required");
        }
        const double re = number(s, "re", "task.scan");
        const double lo = number(s, "im_min", "task.scan");
        const double hi = number(s, "im_max", "task.scan");
        const std::size_t steps = count_or(s, "steps", "task.scan", 1);
        if (steps > 1000000) fail("task.scan.steps too large");
        for (std::size_t i = 0; i < steps; ++i) {
          const double im = steps == 1 ? lo
                                       : lo + (hi - lo) * static_cast<double>(i) /
                                                  static_cast<double>(steps - 1);
          cfg.winding.bases.emplace_back(re, im);
        }
      }
      cfg.winding.samples = count_or(t, "samples", "task", 4096);
      if (cfg.winding.samples < 64) fail("task.samples must be at least 64");
      cfg.winding.cutoff = number_or(t, "cutoff", "task", cfg.winding.cutoff);
      if (cfg.winding.cutoff <= 0.0) fail("task.cutoff must be positive");
      break;
    }
    case Task::edge: {
      check_keys(t, "task", {"name", "base_energy", "gamma2", "x_max"});
      if (cfg.kind != ModelKind::continuum) fail("edge task requires a continuum model");
      if (!t.contains("base_energy")) fail("task.base_energy is required");
      cfg.edge.base = complex_value(t["base_energy"], "task.base_energy");
      cfg.edge.gamma2 = number_or(t, "gamma2", "task", cfg.continuum.gamma);
      cfg.edge.x_max = number_or(t, "x_max", "task", 2.0 * cfg.continuum.length);
      if (cfg.edge.x_max <= 0.0) fail("task.x_max must be positive");
      break;
    }
    case Task::sweep: {
      const bool cont = cfg.kind == ModelKind::continuum;
      const std::string shift_key = cont ? "x0" : "j0";
      const std::string extent_key = cont ? "L" : "N";
      check_keys(t, "task", {"name", "gamma", shift_key, extent_key, "index", "base_energy",
                             "max_points"});
      cfg.sweep.gamma = number_list(t, "gamma", "task", cont ? cfg.continuum.gamma : cfg.lattice.gamma);
      cfg.sweep.shift = number_list(t, shift_key, "task", cont ? cfg.continuum.x0 : cfg.lattice.j0);
      cfg.sweep.extent = number_list(t, extent_key, "task",
                                     cont ? cfg.continuum.length
                                          : static_cast<double>(cfg.lattice.sites));
      for (double e : cfg.sweep.extent) {
        if (cont && e <= 0.0) fail("task.L entries must be positive");
        if (!cont && (e < 2.0 || e != std::floor(e))) fail("task.N entries must be integers >= 2");
      }
      if (t.contains("index")) cfg.sweep.index = static_cast<long>(integer(t, "index", "task"));
      if (cfg.sweep.index < 1) fail("task.index must be positive");
      for (double e : cfg.sweep.extent) {
        if (!cont && static_cast<double>(cfg.sweep.index) > e) fail("task.index exceeds a swept N");
      }
      if (t.contains("base_energy")) cfg.sweep.base = complex_value(t["base_energy"], "task.base_energy");
      cfg.sweep.max_points = count_or(t, "max_points", "task", 10000);
      const long double total = static_cast<long double>(cfg.sweep.gamma.size()) *
                                cfg.sweep.shift.size() * cfg.sweep.extent.size();
      if (total > static_cast<long double>(cfg.sweep.max_points)) {
        fail("sweep has " + std::to_string(static_cast<unsigned long long>(total)) +
             " points, cap is " + std::to_string(cfg.sweep.max_points));
      }
      break;
    }
  }
}

}  // namespace

Task parse_task(const std::string& name) {
  if (name == "spectrum") return Task::spectrum;
  if (name == "states") return Task::states;
  if (name == "winding") return Task::winding;
  if (name == "edge") return Task::edge;
  if (name == "sweep") return Task::sweep;
  fail("unknown task '" + name + "'");
}

std::string to_string(Task task) {
  switch (task) {
    case Task::spectrum: return "spectrum";
    case Task::states: return "states";
    case Task::winding: return "winding";
    case Task::edge: return "edge";
    case Task::sweep: return "sweep";
  }
  return "?";
}

RunConfig parse_config(const json& doc, Task task) {
  check_keys(doc, "config", {"model", "bc", "task", "output", "seed"});
  RunConfig cfg;
  cfg.task = task;
  if (!doc.contains("model")) fail("model section is required");
  parse_model(doc["model"], cfg);

  const std::string bc = doc.contains("bc") && doc["bc"].is_string() ? doc["bc"].get<std::string>()
                                                                       : "";
  if (bc == "obc") cfg.bc = lattice::Boundary::open;
  else if (bc == "pbc") cfg.bc = lattice::Boundary::periodic;
  else fail("bc must be 'obc' or 'pbc'");
  cfg.lattice.bc = cfg.bc;
  if (cfg.kind == ModelKind::lattice) {
    try {
      cfg.lattice.validate();
    } catch (const InputError& e) {
      fail(e.what());
    }
  }

  const json task_section = doc.contains("task") ? doc["task"] : json::object();
  if (!task_section.is_object()) fail("task must be an object");
  if (task_section.contains("name")) {
    if (!task_section["name"].is_string() || task_section["name"].get<std::string>() != to_string(task)) {
      fail("task.name does not match the requested task '" + to_string(task) + "'");
    }
  }
  parse_task_params(task_section, cfg);

  if (doc.contains("output")) parse_output(doc["output"], cfg);
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.echo = doc;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file, Task task) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw IoError("cannot read config " + file.string());
  std::stringstream ss;
  ss << f.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, task);
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.out) {
    config.output.directory = *overrides.out;
    config.echo["output"]["directory"] = overrides.out->string();
  }
  if (overrides.points) {
    if (*overrides.points == 0) fail("--points must be positive");
    config.output.points = *overrides.points;
    config.echo["output"]["points"] = *overrides.points;
  }
  if (overrides.seed) {
    config.seed = *overrides.seed;
    config.echo["seed"] = *overrides.seed;
  }
}

std::size_t max_matrix_dimension() {
  const char* env = std::getenv("NHSPEC_MAX_N");
  if (env == nullptr || *env == '\0') return 2048;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) fail("NHSPEC_MAX_N must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace nhspec::cli
