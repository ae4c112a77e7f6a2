#include "phaserec/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "phaserec/error.hpp"
#include "phaserec/far_field.hpp"
#include "phaserec/forward_solver.hpp"
#include "phaserec/resolvent.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "experiments_cli";
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw ValidationError(kModule, "config key '" + key + "': " + what);
}

const json& require_key(const json& obj, const std::string& key, const std::string& path = "") {
  const auto it = obj.find(key);
  if (it == obj.end()) bad_key(path + key, "is required");
  return *it;
}

double as_number(const json& value, const std::string& key) {
  if (!value.is_number()) bad_key(key, "must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) bad_key(key, "must be finite");
  return x;
}

int as_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) bad_key(key, "must be an integer");
  return value.get<int>();
}

std::vector<double> as_number_list(const json& value, const std::string& key) {
  if (!value.is_array()) bad_key(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : value) out.push_back(as_number(item, key));
  return out;
}

std::vector<int> as_int_list(const json& value, const std::string& key) {
  if (!value.is_array()) bad_key(key, "must be an array of integers");
  std::vector<int> out;
  for (const auto& item : value) out.push_back(as_int(item, key));
  return out;
}

Vec as_vec(const json& value, const std::string& key, int dimension) {
  const auto comps = as_number_list(value, key);
  if (static_cast<int>(comps.size()) != dimension) {
    bad_key(key, "must have " + std::to_string(dimension) + " components");
  }
  return make_vec(comps);
}

Vec as_direction(const json& value, const std::string& key, int dimension) {
  const Vec v = as_vec(value, key, dimension);
  if (std::abs(norm(v) - 1.0) > 1e-10) bad_key(key, "must be a unit vector (|v| = 1 within 1e-10)");
  return v;
}

void require_strictly_increasing(const std::vector<int>& list, const std::string& key, int minimum) {
  if (list.empty()) bad_key(key, "must not be empty");
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] < minimum) bad_key(key, "entries must be >= " + std::to_string(minimum));
    if (i > 0 && list[i] <= list[i - 1]) bad_key(key, "must be strictly increasing");
  }
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void require_finite(double x, const std::string& field) {
  if (!std::isfinite(x)) {
    throw SolverError(kModule, "non-finite value in report field '" + field + "'", 0.0);
  }
}

std::vector<double> n_as_double(const std::vector<int>& n_list) {
  return {n_list.begin(), n_list.end()};
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::forward: return "forward";
    case Mode::recover: return "recover";
    case Mode::convergence: return "convergence";
    case Mode::resolvent_reduction: return "resolvent_reduction";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  if (name == "forward") return Mode::forward;
  if (name == "recover") return Mode::recover;
  if (name == "convergence") return Mode::convergence;
  if (name == "resolvent_reduction") return Mode::resolvent_reduction;
  bad_key("mode", "unknown mode '" + name +
                      "' (expected forward, recover, convergence or resolvent_reduction)");
}

ExperimentConfig validate_config(const std::string& json_text) {
  json raw;
  try {
    raw = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(kModule, std::string("config is not valid JSON: ") + e.what());
  }
  return validate_config(raw);
}

ExperimentConfig validate_config(const json& raw) {
  if (!raw.is_object()) throw ValidationError(kModule, "config must be a JSON object");

  static const std::set<std::string> kKeys = {
      "mode",     "potential", "E",        "k_direction", "l_direction", "cells_per_side",
      "n_list",   "s_offsets", "output_dir", "seed",      "grid_list",   "source_point",
      "s_values", "samples_csv"};
  for (const auto& [key, value] : raw.items()) {
    if (!kKeys.count(key)) bad_key(key, "unknown key");
  }

  ExperimentConfig config;
  const auto& mode = require_key(raw, "mode");
  if (!mode.is_string()) bad_key("mode", "must be a string");
  config.mode = parse_mode(mode.get<std::string>());

  // potential
  const auto& potential = require_key(raw, "potential");
  if (!potential.is_object()) bad_key("potential", "must be an object");
  static const std::set<std::string> kPotentialKeys = {"dimension", "kind", "params",
                                                       "support_radius"};
  for (const auto& [key, value] : potential.items()) {
    if (!kPotentialKeys.count(key)) bad_key("potential." + key, "unknown key");
  }
  config.potential.dimension = as_int(require_key(potential, "dimension", "potential."),
                                      "potential.dimension");
  if (config.potential.dimension != 2 && config.potential.dimension != 3) {
    bad_key("potential.dimension", "must be 2 or 3");
  }
  const auto& kind = require_key(potential, "kind", "potential.");
  if (!kind.is_string()) bad_key("potential.kind", "must be a string");
  try {
    config.potential.kind = parse_potential_kind(kind.get<std::string>());
  } catch (const ValidationError& e) {
    bad_key("potential.kind", e.what());
  }
  config.potential.params =
      as_number_list(require_key(potential, "params", "potential."), "potential.params");
  config.potential.support_radius =
      as_number(require_key(potential, "support_radius", "potential."), "potential.support_radius");
  try {
    config.potential.build();
  } catch (const ValidationError& e) {
    bad_key("potential", e.what());
  }
  const int d = config.potential.dimension;
  const double support = config.potential.support_radius;

  config.energy = as_number(require_key(raw, "E"), "E");
  if (!(config.energy > 0.0)) bad_key("E", "must satisfy E > 0");

  config.k_direction = as_direction(require_key(raw, "k_direction"), "k_direction", d);
  if (raw.contains("l_direction")) {
    config.l_direction = as_direction(raw["l_direction"], "l_direction", d);
  }

  if (raw.contains("seed")) {
    const auto& seed = raw["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      bad_key("seed", "must be a non-negative integer");
    }
    config.seed = raw["seed"].get<std::uint64_t>();
  }
  if (raw.contains("output_dir")) {
    if (!raw["output_dir"].is_string()) bad_key("output_dir", "must be a string");
    config.output_dir = raw["output_dir"].get<std::string>();
  }

  const bool needs_grid = config.mode != Mode::convergence || !raw.contains("grid_list");
  if (raw.contains("cells_per_side") || needs_grid) {
    config.cells_per_side = as_int(require_key(raw, "cells_per_side"), "cells_per_side");
    if (config.cells_per_side < 4) bad_key("cells_per_side", "must be >= 4");
  }

  const bool recovers = config.mode == Mode::recover || config.mode == Mode::convergence;
  if (raw.contains("n_list") || recovers) {
    config.n_list = as_int_list(require_key(raw, "n_list"), "n_list");
    require_strictly_increasing(config.n_list, "n_list", 1);
  }
  if (raw.contains("s_offsets")) {
    const auto offsets = as_number_list(raw["s_offsets"], "s_offsets");
    if (offsets.size() != 2) bad_key("s_offsets", "must be [s1, s2]");
    config.s_offsets = std::pair{offsets[0], offsets[1]};
  }

  if (recovers) {
    if (!config.l_direction) bad_key("l_direction", "is required in mode " + to_string(config.mode));
    const Vec k = std::sqrt(config.energy) * config.k_direction;
    const Vec l = std::sqrt(config.energy) * *config.l_direction;
    double T = 0.0;
    try {
      T = period_T(k, l);
    } catch (const DegeneracyError& e) {
      throw DegeneracyError(kModule, std::string("config keys 'k_direction'/'l_direction': ") + e.what());
    }
    if (T > 1e3 * support) {
      bad_key("l_direction", "near-forward pair: period T = " + std::to_string(T) +
                                 " exceeds 1000 * support_radius");
    }
    if (T > 50.0 * support) {
      config.warnings.push_back("period T = " + std::to_string(T) +
                                " exceeds 50 * support_radius; sample radii will be large");
    }
    try {
      resolve_offsets(T, config.s_offsets);
    } catch (const Error& e) {
      if (dynamic_cast<const DegeneracyError*>(&e)) throw;
      bad_key("s_offsets", e.what());
    }
  }

  if (config.mode == Mode::convergence) {
    if (raw.contains("grid_list")) {
      config.grid_list = as_int_list(raw["grid_list"], "grid_list");
      require_strictly_increasing(config.grid_list, "grid_list", 4);
    } else {
      config.grid_list = {config.cells_per_side};
    }
  } else if (raw.contains("grid_list")) {
    bad_key("grid_list", "only valid in mode convergence");
  }

  if (config.mode == Mode::resolvent_reduction) {
    config.source_point = as_vec(require_key(raw, "source_point"), "source_point", d);
    if (!(norm(*config.source_point) > support)) {
      bad_key("source_point", "must lie outside the support ball");
    }
    config.s_values = as_number_list(require_key(raw, "s_values"), "s_values");
    if (config.s_values.size() < 2) bad_key("s_values", "needs at least two radii");
    for (std::size_t i = 0; i < config.s_values.size(); ++i) {
      if (!(config.s_values[i] >= 2.0 * support)) bad_key("s_values", "radii must be >= 2 * support_radius");
      if (i > 0 && config.s_values[i] <= config.s_values[i - 1]) {
        bad_key("s_values", "must be strictly increasing");
      }
    }
  } else {
    if (raw.contains("source_point")) bad_key("source_point", "only valid in mode resolvent_reduction");
    if (raw.contains("s_values")) bad_key("s_values", "only valid in mode resolvent_reduction");
  }

  if (raw.contains("samples_csv")) {
    if (config.mode != Mode::recover) bad_key("samples_csv", "only valid in mode recover");
    if (!raw["samples_csv"].is_string()) bad_key("samples_csv", "must be a string path");
    config.samples_csv = raw["samples_csv"].get<std::string>();
  }
  return config;
}

ordered_json ExperimentConfig::to_json() const {
  const int d = dimension();
  ordered_json out;
  out["mode"] = to_string(mode);
  out["potential"] = {{"dimension", potential.dimension},
                      {"kind", phaserec::to_string(potential.kind)},
                      {"params", potential.params},
                      {"support_radius", potential.support_radius}};
  out["E"] = energy;
  out["k_direction"] = components(k_direction, d);
  if (l_direction) out["l_direction"] = components(*l_direction, d);
  if (cells_per_side > 0) out["cells_per_side"] = cells_per_side;
  if (!n_list.empty()) out["n_list"] = n_list;
  if (s_offsets) out["s_offsets"] = {s_offsets->first, s_offsets->second};
  if (!output_dir.empty()) out["output_dir"] = output_dir;
  out["seed"] = seed;
  if (!grid_list.empty()) out["grid_list"] = grid_list;
  if (source_point) out["source_point"] = components(*source_point, d);
  if (!s_values.empty()) out["s_values"] = s_values;
  if (samples_csv) out["samples_csv"] = *samples_csv;
  return out;
}

ordered_json RunReport::to_json() const {
  ordered_json out;
  out["config"] = config.to_json();
  out["f_direct"] = complex_json(f_direct);
  out["solver"] = {{"active_cells", active_cells},
                   {"condition_estimate", condition_estimate},
                   {"relative_residual", residual}};
  if (period) out["period_T"] = *period;
  if (offsets) out["s_offsets"] = {offsets->first, offsets->second};
  if (!per_n.empty()) {
    auto rows = ordered_json::array();
    for (const auto& row : per_n) {
      rows.push_back({{"n", row.n},
                      {"f_hat", complex_json(row.f_hat)},
                      {"abs_error", row.abs_error}});
    }
    out["per_n"] = rows;
    out["final_estimate"] = complex_json(per_n.back().f_hat);
    out["estimate_selection"] = "largest n";
    if (slope) {
      out["fitted_slope"] = *slope;
    } else {
      out["fitted_slope"] = nullptr;
    }
  }
  if (!convergence.empty()) {
    auto rows = ordered_json::array();
    for (const auto& row : convergence) {
      rows.push_back({{"cells_per_side", row.cells_per_side},
                      {"f_direct", complex_json(row.f_direct)},
                      {"successive_diff", row.successive_diff},
                      {"final_abs_error", row.final_abs_error}});
    }
    out["convergence"] = rows;
  }
  if (!reduction.empty()) {
    auto rows = ordered_json::array();
    for (const auto& row : reduction) {
      rows.push_back({{"s", row.s},
                      {"scaled_Rsq", row.scaled_r_squared},
                      {"psi_sq_reference", row.psi_sq_reference},
                      {"rel_defect", row.rel_defect}});
    }
    out["reduction"] = rows;
  }
  if (!config.warnings.empty()) out["warnings"] = config.warnings;
  return out;
}

namespace {

struct Simulation {
  std::shared_ptr<const NystromOperator> op;
  ScatteringSolution solution;
  FarFieldEntry amplitude;
};

Simulation simulate(const ExperimentConfig& config, int cells_per_side) {
  const auto grid = std::make_shared<const GridDiscretization>(
      discretize(config.potential.build(), cells_per_side));
  const auto context =
      PlaneWaveContext::from_direction(config.dimension(), config.k_direction, config.energy);
  auto op = std::make_shared<const NystromOperator>(grid, context.k_norm());
  auto solution = solve_psi_on_support(op, context);
  const Vec l = std::sqrt(config.energy) * config.l_direction.value_or(config.k_direction);
  auto amplitude = scattering_amplitude(solution, l);
  return {std::move(op), std::move(solution), amplitude};
}

void fill_solver_fields(RunReport& report, const Simulation& sim) {
  report.f_direct = sim.amplitude.f;
  report.condition_estimate = sim.op->condition_estimate();
  report.residual = sim.solution.residual;
  report.active_cells = sim.op->grid().size();
}

void fill_recovery(RunReport& report, const ExperimentConfig& config, const Simulation& sim) {
  const Vec l = std::sqrt(config.energy) * *config.l_direction;
  RaySampleSet samples;
  if (config.samples_csv) {
    std::ifstream in(*config.samples_csv);
    if (!in) bad_key("samples_csv", "cannot open '" + *config.samples_csv + "'");
    const auto records = read_ray_samples_csv(in);
    samples = samples_from_records(sim.solution.context.k, l, records,
                                   config.potential.support_radius);
  } else {
    samples = sample_ray(sim.solution, l, config.n_list, config.s_offsets);
  }
  const auto constant = farfield_constant(config.dimension(), sim.solution.context.k_norm());
  const auto result = recover_f_sequence(samples, constant, sim.amplitude.f);

  report.period = samples.T;
  report.offsets = std::pair{samples.s1, samples.s2};
  report.ray_samples = to_records(samples);
  report.per_n.clear();
  std::vector<double> errors;
  for (std::size_t i = 0; i < result.n_list.size(); ++i) {
    const double error = std::abs(result.per_n_estimates[i] - sim.amplitude.f);
    report.per_n.push_back({result.n_list[i], result.per_n_estimates[i], error});
    errors.push_back(error);
  }
  try {
    report.slope = estimate_decay_slope(n_as_double(result.n_list), errors);
  } catch (const InsufficientDataError&) {
    report.slope.reset();
  }
}

void check_finite(const RunReport& report) {
  require_finite(report.f_direct.real(), "f_direct");
  require_finite(report.f_direct.imag(), "f_direct");
  require_finite(report.condition_estimate, "condition_estimate");
  require_finite(report.residual, "relative_residual");
  for (const auto& row : report.per_n) {
    require_finite(row.f_hat.real(), "per_n.f_hat");
    require_finite(row.f_hat.imag(), "per_n.f_hat");
    require_finite(row.abs_error, "per_n.abs_error");
  }
  for (const auto& row : report.reduction) {
    require_finite(row.scaled_r_squared, "reduction.scaled_Rsq");
    require_finite(row.rel_defect, "reduction.rel_defect");
  }
  for (const auto& row : report.ray_samples) require_finite(row.a_value, "ray_samples.a_value");
}

}  // namespace

RunReport compute_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;

  switch (config.mode) {
    case Mode::forward: {
      fill_solver_fields(report, simulate(config, config.cells_per_side));
      break;
    }
    case Mode::recover: {
      const auto sim = simulate(config, config.cells_per_side);
      fill_solver_fields(report, sim);
      fill_recovery(report, config, sim);
      break;
    }
    case Mode::convergence: {
      std::optional<Complex> previous;
      for (int cells : config.grid_list) {
        const auto sim = simulate(config, cells);
        fill_solver_fields(report, sim);
        fill_recovery(report, config, sim);
        ConvergenceRow row{cells, sim.amplitude.f, 0.0, report.per_n.back().abs_error};
        row.successive_diff = previous ? std::abs(sim.amplitude.f - *previous) : 0.0;
        previous = sim.amplitude.f;
        report.convergence.push_back(row);
      }
      break;
    }
    case Mode::resolvent_reduction: {
      const auto sim = simulate(config, config.cells_per_side);
      fill_solver_fields(report, sim);
      const Vec& source = *config.source_point;
      const double psi_sq = std::norm(evaluate_psi(sim.solution, source));
      const auto field = solve_resolvent_field(sim.op, source);
      const auto samples = sample_backward_ray(field, sim.solution.context.k, config.s_values);
      const auto reduction =
          psi_sq_from_resolvent(config.dimension(), samples, sim.solution.context.k, source,
                                config.potential.support_radius);
      for (std::size_t i = 0; i < reduction.s_values.size(); ++i) {
        report.reduction.push_back({reduction.s_values[i], reduction.scaled[i], psi_sq,
                                    std::abs(reduction.scaled[i] - psi_sq) / psi_sq});
      }
      break;
    }
  }

  check_finite(report);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_outputs(const RunReport& report, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (fs::exists(out_dir) && !fs::is_directory(out_dir)) {
    throw ValidationError(kModule, "output path '" + out_dir.string() + "' is not a directory");
  }
  const fs::path staging = out_dir.string() + ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);

  auto open = [&](const std::string& name) {
    std::ofstream out(staging / name, std::ios::binary);
    if (!out) throw ValidationError(kModule, "cannot write '" + (staging / name).string() + "'");
    out << std::setprecision(17);
    return out;
  };

  std::vector<std::string> files;
  try {
    {
      auto out = open("report.json");
      out << report.to_json().dump(2) << '\n';
      files.push_back("report.json");
    }
    {
      auto out = open("timing.json");
      out << ordered_json{{"wall_time_seconds", report.wall_time_seconds}}.dump(2) << '\n';
      files.push_back("timing.json");
    }
    if (!report.per_n.empty()) {
      auto out = open("per_n.csv");
      out << "n,f_hat_re,f_hat_im,abs_error\n";
      for (const auto& row : report.per_n) {
        out << row.n << ',' << row.f_hat.real() << ',' << row.f_hat.imag() << ',' << row.abs_error
            << '\n';
      }
      files.push_back("per_n.csv");
    }
    if (!report.ray_samples.empty()) {
      auto out = open("ray_samples.csv");
      write_ray_samples_csv(out, report.ray_samples);
      files.push_back("ray_samples.csv");
    }
    if (!report.reduction.empty()) {
      auto out = open("reduction.csv");
      out << "s,scaled_Rsq,psi_sq_reference,rel_defect\n";
      for (const auto& row : report.reduction) {
        out << row.s << ',' << row.scaled_r_squared << ',' << row.psi_sq_reference << ','
            << row.rel_defect << '\n';
      }
      files.push_back("reduction.csv");
    }
    if (!report.convergence.empty()) {
      auto out = open("convergence.csv");
      out << "cells_per_side,f_direct_re,f_direct_im,successive_diff,final_abs_error\n";
      for (const auto& row : report.convergence) {
        out << row.cells_per_side << ',' << row.f_direct.real() << ',' << row.f_direct.imag() << ','
            << row.successive_diff << ',' << row.final_abs_error << '\n';
      }
      files.push_back("convergence.csv");
    }
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }

  fs::create_directories(out_dir);
  for (const char* stale : {"report.json", "timing.json", "per_n.csv", "ray_samples.csv",
                            "reduction.csv", "convergence.csv"}) {
    fs::remove(out_dir / stale);
  }
  for (const auto& name : files) fs::rename(staging / name, out_dir / name);
  fs::remove_all(staging);
}

RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  auto report = compute_experiment(config);
  write_outputs(report, out_dir);
  return report;
}

}  // namespace phaserec
