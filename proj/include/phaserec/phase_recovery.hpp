#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "phaserec/far_field.hpp"
#include "phaserec/forward_solver.hpp"

namespace phaserec {

/// Smallest accepted |sin(2 pi (s1 - s2) / T)|.
inline constexpr double kMinOffsetSine = 0.1;

/// Oscillation period T = 2 pi / (sqrt(E) (1 - k.l / E)) of the first-order
/// phaseless signal along the ray through l. Throws DegeneracyError for k = l.
double period_T(const Vec& k, const Vec& l);

/// Phaseless samples a((s_j + n T) l/|l|, k) for j = 1, 2 and every n.
struct RaySampleSet {
  Vec k{};
  Vec l{};
  double T = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  std::vector<int> n_list;
  std::vector<std::pair<double, double>> a_values;  ///< aligned with n_list

  double radius(int n, int offset_index) const { return (offset_index == 1 ? s1 : s2) + n * T; }
};

struct PhaseRecoveryResult {
  std::vector<int> n_list;
  std::vector<Complex> per_n_estimates;
  Complex final_estimate;
  std::vector<double> residual_trace;  ///< |f_n - f_{n_max}|
  /// With a reference amplitude: a - a0 at (s1 + nT), (s2 + nT) for every n,
  /// interleaved. Empty otherwise.
  std::vector<double> delta_a_diagnostic;
};

/// One row of the raw-sample CSV format `s,a_value,offset_index`.
struct RaySampleRecord {
  double s = 0.0;
  double a_value = 0.0;
  int offset_index = 1;
};

/// Solves the 2x2 oscillation system for sample index n (δa taken as zero).
Complex recover_f_at_n(const RaySampleSet& samples, int n, const FarFieldConstant& constant);

/// Offsets (s1, s2); defaults to (0, T/4). Validates the nondegeneracy guard.
std::pair<double, double> resolve_offsets(double T, std::optional<std::pair<double, double>> offsets);

/// Generates phaseless samples from a forward solution along l. Every sample
/// radius must exceed 2 * support radius.
RaySampleSet sample_ray(const ScatteringSolution& solution, const Vec& l, std::vector<int> n_list,
                        std::optional<std::pair<double, double>> offsets = std::nullopt);

/// Builds a sample set from raw records; offsets and n are inferred from s
/// modulo T. Every n must be present at both offsets.
RaySampleSet samples_from_records(const Vec& k, const Vec& l, std::span<const RaySampleRecord> records,
                                  std::optional<double> support_radius = std::nullopt);

std::vector<RaySampleRecord> to_records(const RaySampleSet& samples);

PhaseRecoveryResult recover_f_sequence(const RaySampleSet& samples, const FarFieldConstant& constant,
                                       std::optional<Complex> reference = std::nullopt);

PhaseRecoveryResult recover_f_sequence(const ScatteringSolution& solution, const Vec& l,
                                       std::vector<int> n_list,
                                       std::optional<std::pair<double, double>> offsets = std::nullopt,
                                       std::optional<Complex> reference = std::nullopt);

/// Least-squares slope of log(error) against log(n). Non-positive errors are
/// dropped; fewer than four surviving points throw InsufficientDataError.
double estimate_decay_slope(std::span<const double> n_values, std::span<const double> errors);

/// CSV with header `s,a_value,offset_index`.
void write_ray_samples_csv(std::ostream& out, std::span<const RaySampleRecord> records);
std::vector<RaySampleRecord> read_ray_samples_csv(std::istream& in);

}  // namespace phaserec
