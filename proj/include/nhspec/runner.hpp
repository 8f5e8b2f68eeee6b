#pragma once

// Experiment runner behind the nhspec command line: configuration parsing,
// task orchestration and artifact/manifest emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhspec/continuum.hpp"
#include "nhspec/error.hpp"
#include "nhspec/lattice.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec::cli {

inline constexpr const char* kVersion = "0.1.0";

// Raised for malformed or incomplete run configurations (exit code 2).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

enum class Task { spectrum, states, winding, edge, sweep };
enum class ModelKind { continuum, lattice };
enum class OutputFormat { csv, json };

Task parse_task(const std::string& name);
std::string to_string(Task task);

struct OutputSpec {
  std::filesystem::path directory = ".";
  OutputFormat format = OutputFormat::csv;
  std::size_t points = 0;  // 0: task default
  NormConvention norm = NormConvention::unit_l2;
};

struct SpectrumParams {
  int count = 30;  // continuum: OBC n = 1..count, PBC n = -count..count
};

struct StatesParams {
  std::vector<long> indices;
};

struct WindingParams {
  std::vector<cplx> bases;
  std::size_t samples = 4096;
  double cutoff = 3.141592653589793;  // continuum k range [-cutoff, cutoff]
};

struct EdgeParams {
  cplx base;
  double gamma2 = 0.0;
  double x_max = 0.0;
};

struct SweepParams {
  std::vector<double> gamma;
  std::vector<double> shift;   // x0 (continuum) or j0 (lattice)
  std::vector<double> extent;  // L (continuum) or N (lattice)
  long index = 13;
  cplx base{0.1, -0.05};
  std::size_t max_points = 10000;
};

struct RunConfig {
  Task task = Task::spectrum;
  ModelKind kind = ModelKind::continuum;
  continuum::ContinuumModel continuum;
  lattice::LatticeModel lattice;
  lattice::Boundary bc = lattice::Boundary::open;
  OutputSpec output;
  std::uint64_t seed = 0;

  SpectrumParams spectrum;
  StatesParams states;
  WindingParams winding;
  EdgeParams edge;
  SweepParams sweep;

  nlohmann::json echo;  // effective configuration, as written to the manifest
};

// Validates the document for the given task. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, Task task);

// Reads and parses a JSON file. Throws IoError if unreadable, ConfigError if
// the content is invalid.
RunConfig load_config(const std::filesystem::path& file, Task task);

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
};

// Applies command-line overrides to the config and its echo.
void apply_overrides(RunConfig& config, const Overrides& overrides);

// Matrix-size cap: NHSPEC_MAX_N if set and valid, else 2048.
std::size_t max_matrix_dimension();

// Runs the task, writes artifacts and manifest.json into the output
// directory, and returns the manifest.
nlohmann::json run(const RunConfig& config);

// Process exit code for an exception escaping run(): 2 validation,
// 3 convergence, 4 I/O, 1 anything else.
int exit_code_for(const std::exception& e);

// True if every file listed in dir/manifest.json exists with its checksum.
bool verify_manifest(const std::filesystem::path& dir);

}  // namespace nhspec::cli
