#include "nhspec/runner.hpp"

#include <openssl/crypto.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <random>
#include <thread>

#include "nhspec/diagnostics.hpp"
#include "nhspec/edge_modes.hpp"
#include "nhspec/output.hpp"
#include "nhspec/topology.hpp"

namespace nhspec::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kEdgeDefaultPoints = 4001;

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Artifact {
  std::string name;
  std::string content;
};

struct TaskResult {
  std::vector<Artifact> artifacts;
  json summary = json::object();
  json diagnostics;  // null unless the task produces per-item diagnostics
};

class Emitter {
 public:
  explicit Emitter(OutputFormat format) : format_(format) {}

  Artifact table(const std::string& stem, const Table& t) const {
    if (format_ == OutputFormat::json) return {stem + ".json", to_json(t).dump(2) + "\n"};
    return {stem + ".csv", to_csv(t)};
  }

 private:
  OutputFormat format_;
};

// Evaluates fn(i) for i in [0, count) on a small worker pool; results are
// stored by index so assembly order never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, F fn) {
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min(hw, count);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Table spectrum_table(const Spectrum& s) {
  Table t;
  t.header = {"index", "re_energy", "im_energy", "provenance"};
  for (const auto& e : s.entries) {
    t.rows.push_back({static_cast<long long>(e.index), e.energy.real(), e.energy.imag(),
                      std::string(to_string(e.provenance))});
  }
  return t;
}

json envelope_json(const WaveField& wf) {
  try {
    const auto fit = diagnostics::envelope_fit(wf);
    return {{"center", jnum(fit.center)},
            {"rate", jnum(fit.rate)},
            {"rms_residual", jnum(fit.rms_residual)},
            {"samples_used", fit.samples_used},
            {"from_maxima", fit.from_maxima},
            {"anti_gaussian", fit.anti_gaussian}};
  } catch (const InsufficientStructureError& e) {
    return {{"error", e.what()}};
  }
}

json state_diagnostics(const WaveField& wf) {
  return {{"pinning_position", jnum(diagnostics::pinning_position(wf))},
          {"center_of_mass", jnum(diagnostics::center_of_mass(wf))},
          {"ipr", jnum(diagnostics::ipr(wf))},
          {"envelope", envelope_json(wf)}};
}

std::size_t grid_points(const RunConfig& cfg, std::size_t def) {
  return cfg.output.points != 0 ? cfg.output.points : def;
}

// Aligns the global phase of v so that <a|v> is real and positive.
WaveField phase_aligned(const WaveField& reference, WaveField v) {
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) overlap += std::conj(reference.amplitudes[i]) * v.amplitudes[i];
  if (std::abs(overlap) > 0.0) {
    const cplx phase = std::conj(overlap) / std::abs(overlap);
    for (auto& a : v.amplitudes) a *= phase;
  }
  return v;
}

double overlap_modulus(const WaveField& a, const WaveField& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return std::abs(s) / (l2_norm(a) * l2_norm(b));
}

// ---------------------------------------------------------------- spectrum

TaskResult run_spectrum(const RunConfig& cfg, const Emitter& out) {
  TaskResult r;
  if (cfg.kind == ModelKind::continuum) {
    const Spectrum s = cfg.bc == lattice::Boundary::open
                           ? continuum::obc_spectrum(cfg.continuum, cfg.spectrum.count)
                           : continuum::pbc_spectrum(cfg.continuum, cfg.spectrum.count);
    r.artifacts.push_back(out.table("spectrum_analytic", spectrum_table(s)));
    r.summary["count"] = s.size();
    r.summary["max_abs_imag_analytic"] = jnum(lattice::max_abs_imag(s));
    return r;
  }

  const auto& model = cfg.lattice;
  EigOptions opts;
  opts.max_dimension = max_matrix_dimension();
  const Spectrum analytic = lattice::analytic_energies(model);
  const Spectrum numeric = lattice::numeric_spectrum(model, opts);
  r.artifacts.push_back(out.table("spectrum_analytic", spectrum_table(analytic)));
  r.artifacts.push_back(out.table("spectrum_numeric", spectrum_table(numeric)));

  r.summary["max_mismatch"] = jnum(lattice::compare_spectra(analytic, numeric));
  r.summary["max_abs_imag_numeric"] = jnum(lattice::max_abs_imag(numeric));
  r.summary["max_abs_imag_analytic"] = jnum(lattice::max_abs_imag(analytic));
  if (model.bc == lattice::Boundary::open) {
    try {
      r.summary["hermitized_mismatch"] =
          jnum(lattice::compare_spectra(analytic, lattice::hermitized_spectrum(model)));
    } catch (const ParameterRangeError& e) {
      r.summary["hermitized_mismatch"] = nullptr;
      r.summary["hermitized_error"] = e.what();
    }
  }

  // A random vector must fail the eigen-equation check that the analytic
  // states pass.
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  WaveField probe;
  probe.sampling = Sampling::sites;
  for (std::size_t j = 1; j <= model.sites; ++j) {
    probe.positions.push_back(static_cast<double>(j));
    probe.amplitudes.emplace_back(normal(rng), normal(rng));
  }
  r.summary["negative_control_residual"] =
      jnum(lattice::lattice_residual(model, probe, analytic.entries.front().energy));
  return r;
}

// ------------------------------------------------------------------ states

TaskResult run_states(const RunConfig& cfg, const Emitter& out) {
  TaskResult r;
  r.diagnostics = json::array();
  const NormConvention norm = cfg.output.norm;

  if (cfg.kind == ModelKind::continuum) {
    const std::size_t points = grid_points(cfg, continuum::kDefaultPoints);
    for (long n : cfg.states.indices) {
      const int idx = static_cast<int>(n);
      const bool obc = cfg.bc == lattice::Boundary::open;
      const WaveField wf = obc ? continuum::obc_state(cfg.continuum, idx, points, norm)
                               : continuum::pbc_state(cfg.continuum, idx, points, norm);
      const cplx e = obc ? cplx(continuum::obc_energy(cfg.continuum, idx))
                         : continuum::pbc_energy(cfg.continuum, idx);
      r.artifacts.push_back(out.table("state_" + std::to_string(n), wave_table(wf)));
      json d = state_diagnostics(wf);
      d["index"] = n;
      d["energy"] = {jnum(e.real()), jnum(e.imag())};
      d["residual_norm"] = jnum(continuum::residual_norm(cfg.continuum, wf, e));
      r.diagnostics.push_back(std::move(d));
    }
    return r;
  }

  const auto& model = cfg.lattice;
  const EigenDecomposition eig = lattice::numeric_eigenpairs(model, max_matrix_dimension());
  for (long n : cfg.states.indices) {
    const auto an = lattice::analytic_state(model, static_cast<int>(n));
    std::size_t best = 0;
    for (std::size_t i = 1; i < eig.eigenvalues.size(); ++i) {
      if (std::abs(eig.eigenvalues[i] - an.energy) < std::abs(eig.eigenvalues[best] - an.energy)) best = i;
    }
    WaveField num;
    num.positions = an.state.positions;
    num.amplitudes = eig.eigenvectors[best];
    num.sampling = Sampling::sites;
    num = normalized(phase_aligned(an.state, std::move(num)), NormConvention::unit_l2);

    const WaveField an_out = normalized(an.state, norm);
    const WaveField num_out = normalized(num, norm);
    r.artifacts.push_back(out.table("state_" + std::to_string(n), wave_table(an_out)));
    r.artifacts.push_back(out.table("state_" + std::to_string(n) + "_numeric", wave_table(num_out)));

    json d = state_diagnostics(an.state);
    d["index"] = n;
    d["energy"] = {jnum(an.energy.real()), jnum(an.energy.imag())};
    d["residual_norm"] = jnum(lattice::lattice_residual(model, an.state, an.energy));
    d["numeric_energy"] = {jnum(eig.eigenvalues[best].real()), jnum(eig.eigenvalues[best].imag())};
    d["numeric_energy_mismatch"] = jnum(std::abs(eig.eigenvalues[best] - an.energy));
    d["numeric_overlap"] = jnum(overlap_modulus(an.state, num));
    d["numeric_pinning_position"] = jnum(diagnostics::pinning_position(num));
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

// ----------------------------------------------------------------- winding

struct WindingRow {
  double winding = kNaN;
  std::string interior;
  bool flagged = false;
  bool disagrees = false;
};

TaskResult run_winding(const RunConfig& cfg, const Emitter& out) {
  TaskResult r;
  lattice::LatticeModel ring = cfg.lattice;
  ring.bc = lattice::Boundary::periodic;
  const topology::SpectralCurve curve = cfg.kind == ModelKind::continuum
                                            ? topology::continuum_curve(cfg.continuum, cfg.winding.cutoff)
                                            : topology::lattice_curve(ring);
  const auto& bases = cfg.winding.bases;

  const auto rows = parallel_map<WindingRow>(bases.size(), [&](std::size_t i) {
    WindingRow row;
    const cplx b = bases[i];
    try {
      const auto rep = topology::winding_number(curve, b, cfg.winding.samples);
      if (rep.min_distance <= 1e-6) {
        row.flagged = true;
      } else {
        row.winding = rep.winding;
      }
    } catch (const SingularBaseError&) {
      row.flagged = true;
    }
    if (row.flagged) {
      row.interior = "on_curve";
      return row;
    }
    try {
      const bool inside = cfg.kind == ModelKind::continuum ? topology::interior_parabola(cfg.continuum, b)
                                                           : topology::interior_ellipse(ring, b);
      row.interior = inside ? "true" : "false";
      row.disagrees = inside != (std::abs(row.winding) > 0.5);
    } catch (const DegenerateError&) {
      row.interior = "degenerate";
    }
    return row;
  });

  Table t;
  t.header = {"base_re", "base_im", "winding", "interior"};
  std::size_t flagged = 0;
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.rows.push_back({bases[i].real(), bases[i].imag(), rows[i].winding, rows[i].interior});
    flagged += rows[i].flagged ? 1 : 0;
    disagreements += rows[i].disagrees ? 1 : 0;
  }
  r.artifacts.push_back(out.table("winding", t));
  r.summary["rows"] = rows.size();
  r.summary["flagged_on_curve"] = flagged;
  r.summary["interior_disagreements"] = disagreements;
  r.summary["samples"] = cfg.winding.samples;
  return r;
}

// -------------------------------------------------------------------- edge

TaskResult run_edge(const RunConfig& cfg, const Emitter& out) {
  TaskResult r;
  const edge::EdgeGeometry geom{cfg.continuum.length, cfg.continuum.x0};
  const continuum::ContinuumModel model{cfg.edge.gamma2, cfg.continuum.x0, cfg.continuum.length, 1};
  const std::size_t points = grid_points(cfg, kEdgeDefaultPoints);

  const auto grid = uniform_grid(0.0, cfg.edge.x_max, points);
  const auto es = edge::edge_state(cfg.edge.base, cfg.edge.gamma2, geom, grid);
  const double res = continuum::residual_norm(model, es.state, cfg.edge.base);
  const auto fine_grid = uniform_grid(0.0, cfg.edge.x_max, 2 * points - 1);
  const auto fine = edge::edge_state(cfg.edge.base, cfg.edge.gamma2, geom, fine_grid);
  const double res_fine = continuum::residual_norm(model, fine.state, cfg.edge.base);

  r.artifacts.push_back(out.table("edge_state", wave_table(normalized(es.state, cfg.output.norm))));

  json report = {
      {"base_energy", {cfg.edge.base.real(), cfg.edge.base.imag()}},
      {"gamma2", cfg.edge.gamma2},
      {"k", jnum(es.decomposition.k)},
      {"gamma1", jnum(es.decomposition.gamma1)},
      {"boundary_value", jnum(es.boundary_value)},
      {"decay_position", jnum(es.decay_position)},
      {"tail_ratio", jnum(es.tail_ratio)},
      {"residual_norm", jnum(res)},
      {"residual_norm_refined", jnum(res_fine)},
      {"convergence_order", jnum(std::log2(res / res_fine))},
      {"points", points},
      {"x_max", cfg.edge.x_max},
      {"diagnostics", state_diagnostics(es.state)},
  };
  r.artifacts.push_back({"edge_report.json", report.dump(2) + "\n"});
  r.summary = report;
  return r;
}

// ------------------------------------------------------------------- sweep

struct SweepPoint {
  double gamma, shift, extent;
};

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double rate_error(const WaveField& wf, double gamma, double* center) {
  *center = kNaN;
  if (gamma == 0.0) return kNaN;
  try {
    const auto fit = diagnostics::envelope_fit(wf);
    *center = fit.center;
    return std::abs(fit.rate - gamma) / std::abs(gamma);
  } catch (const InsufficientStructureError&) {
    return kNaN;
  }
}

double winding_or_nan(const topology::SpectralCurve& curve, cplx base) {
  try {
    return topology::winding_number(curve, base).winding;
  } catch (const SingularBaseError&) {
    return kNaN;
  }
}

std::vector<Cell> sweep_continuum(const RunConfig& cfg, const SweepPoint& p) {
  const continuum::ContinuumModel m{p.gamma, p.shift, p.extent, cfg.continuum.order};
  const std::size_t points = grid_points(cfg, continuum::kDefaultPoints);
  const int n = static_cast<int>(cfg.sweep.index);
  const bool obc = cfg.bc == lattice::Boundary::open;
  const WaveField wf = obc ? continuum::obc_state(m, n, points) : continuum::pbc_state(m, n, points);
  const cplx e = obc ? cplx(continuum::obc_energy(m, n)) : continuum::pbc_energy(m, n);
  double center = kNaN;
  const double err = rate_error(wf, p.gamma, &center);
  const double w = winding_or_nan(topology::continuum_curve(m), cfg.sweep.base);
  return {p.gamma, p.shift, p.extent, continuum::residual_norm(m, wf, e),
          diagnostics::pinning_position(wf), center, err, w};
}

std::vector<Cell> sweep_lattice(const RunConfig& cfg, const SweepPoint& p) {
  lattice::LatticeModel m = cfg.lattice;
  m.gamma = p.gamma;
  m.j0 = p.shift;
  m.sites = static_cast<std::size_t>(p.extent);
  EigOptions opts;
  opts.max_dimension = max_matrix_dimension();
  const Spectrum analytic = lattice::analytic_energies(m);
  const Spectrum numeric = lattice::numeric_spectrum(m, opts);
  const auto st = lattice::analytic_state(m, static_cast<int>(cfg.sweep.index));
  double center = kNaN;
  const double err = rate_error(st.state, p.gamma, &center);
  lattice::LatticeModel ring = m;
  ring.bc = lattice::Boundary::periodic;
  const double w = winding_or_nan(topology::lattice_curve(ring), cfg.sweep.base);
  return {p.gamma, p.shift, static_cast<long long>(m.sites), lattice::compare_spectra(analytic, numeric),
          lattice::max_abs_imag(numeric), diagnostics::pinning_position(st.state), center, err, w};
}

TaskResult run_sweep(const RunConfig& cfg, const Emitter& out) {
  TaskResult r;
  const bool cont = cfg.kind == ModelKind::continuum;
  std::vector<SweepPoint> points;
  for (double g : sorted(cfg.sweep.gamma)) {
    for (double s : sorted(cfg.sweep.shift)) {
      for (double e : sorted(cfg.sweep.extent)) points.push_back({g, s, e});
    }
  }

  Table t;
  if (cont) {
    t.header = {"gamma", "x0", "L", "residual_norm", "pinning_position", "envelope_center",
                "envelope_rate_error", "winding"};
  } else {
    t.header = {"gamma", "j0", "N", "max_mismatch", "max_abs_imag", "pinning_position",
                "envelope_center", "envelope_rate_error", "winding"};
  }
  t.rows = parallel_map<std::vector<Cell>>(points.size(), [&](std::size_t i) {
    return cont ? sweep_continuum(cfg, points[i]) : sweep_lattice(cfg, points[i]);
  });
  r.artifacts.push_back(out.table("sweep", t));
  r.summary["points"] = points.size();
  r.summary["state_index"] = cfg.sweep.index;
  r.summary["reference_base_energy"] = {cfg.sweep.base.real(), cfg.sweep.base.imag()};
  return r;
}

}  // namespace

json run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Emitter out(cfg.output.format);

  TaskResult result;
  switch (cfg.task) {
    case Task::spectrum: result = run_spectrum(cfg, out); break;
    case Task::states: result = run_states(cfg, out); break;
    case Task::winding: result = run_winding(cfg, out); break;
    case Task::edge: result = run_edge(cfg, out); break;
    case Task::sweep: result = run_sweep(cfg, out); break;
  }

  const auto& dir = cfg.output.directory;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }

  json files = json::array();
  for (const auto& a : result.artifacts) {
    write_file(dir / a.name, a.content);
    files.push_back({{"name", a.name}, {"sha256", sha256_hex(a.content)}, {"bytes", a.content.size()}});
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {
      {"tool", "nhspec"},
      {"task", to_string(cfg.task)},
      {"config", cfg.echo},
      {"seed", cfg.seed},
      {"files", files},
      {"wall_time_seconds", wall},
      {"versions",
       {{"nhspec", kVersion},
        {"compiler", __VERSION__},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"openssl", OpenSSL_version(OPENSSL_VERSION)}}},
      {"summary", result.summary},
  };
  if (result.summary.contains("max_mismatch")) manifest["max_mismatch"] = result.summary["max_mismatch"];
  if (!result.diagnostics.is_null()) manifest["diagnostics"] = result.diagnostics;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 4;
  if (dynamic_cast<const InputError*>(&e)) return 2;
  return 1;
}

bool verify_manifest(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const std::exception&) {
    return false;
  }
  if (!manifest.contains("files") || !manifest["files"].is_array()) return false;
  for (const auto& f : manifest["files"]) {
    const auto path = dir / f.at("name").get<std::string>();
    if (!std::filesystem::is_regular_file(path)) return false;
    if (sha256_hex(read_file(path)) != f.at("sha256").get<std::string>()) return false;
  }
  return true;
}

}  // namespace nhspec::cli
