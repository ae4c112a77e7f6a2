#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phaserec/geometry.hpp"
#include "phaserec/medium.hpp"
#include "phaserec/phase_recovery.hpp"

namespace phaserec {

enum class Mode { forward, recover, convergence, resolvent_reduction };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

struct PotentialSpec {
  int dimension = 2;
  PotentialKind kind = PotentialKind::disc_constant;
  std::vector<double> params;
  double support_radius = 1.0;

  Potential build() const { return Potential::make(dimension, kind, params, support_radius); }
};

struct ExperimentConfig {
  Mode mode = Mode::forward;
  PotentialSpec potential;
  double energy = 1.0;
  Vec k_direction{};
  std::optional<Vec> l_direction;
  int cells_per_side = 0;
  std::vector<int> n_list;
  std::optional<std::pair<double, double>> s_offsets;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::vector<int> grid_list;        ///< convergence mode
  std::optional<Vec> source_point;   ///< resolvent_reduction mode
  std::vector<double> s_values;      ///< resolvent_reduction mode
  std::optional<std::string> samples_csv;  ///< recover mode: raw phaseless samples
  std::vector<std::string> warnings;

  int dimension() const { return potential.dimension; }
  nlohmann::ordered_json to_json() const;
};

/// Parses and checks a JSON config against the strict schema. Unknown keys,
/// missing keys and violated constraints throw ValidationError naming the key;
/// a degenerate (k, l) pair throws DegeneracyError.
ExperimentConfig validate_config(const std::string& json_text);
ExperimentConfig validate_config(const nlohmann::json& raw);

struct PerNRow {
  int n = 0;
  Complex f_hat;
  double abs_error = 0.0;
};

struct ReductionRow {
  double s = 0.0;
  double scaled_r_squared = 0.0;
  double psi_sq_reference = 0.0;
  double rel_defect = 0.0;
};

struct ConvergenceRow {
  int cells_per_side = 0;
  Complex f_direct;
  double successive_diff = 0.0;
  double final_abs_error = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  Complex f_direct;
  std::vector<PerNRow> per_n;
  std::optional<double> slope;
  double wall_time_seconds = 0.0;  ///< kept out of report.json
  double condition_estimate = 1.0;
  double residual = 0.0;
  std::size_t active_cells = 0;
  std::optional<double> period;
  std::optional<std::pair<double, double>> offsets;
  std::vector<ReductionRow> reduction;
  std::vector<ConvergenceRow> convergence;
  std::vector<RaySampleRecord> ray_samples;

  /// Deterministic content of report.json.
  nlohmann::ordered_json to_json() const;
};

/// Runs the pipeline selected by config.mode and writes report.json plus the
/// mode's CSV files into out_dir. Files are staged and only moved into out_dir
/// once the whole run succeeded.
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Runs without writing files.
RunReport compute_experiment(const ExperimentConfig& config);

void write_outputs(const RunReport& report, const std::filesystem::path& out_dir);

}  // namespace phaserec
