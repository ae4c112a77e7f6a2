#include "phaserec/phase_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "phaserec/error.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "phase_recovery";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_n_list(const std::vector<int>& n_list) {
  if (n_list.empty()) throw ValidationError(kModule, "n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ValidationError(kModule, "n_list entries must be positive integers");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ValidationError(kModule, "n_list must be strictly increasing");
    }
  }
}

double offset_sine(double T, double s1, double s2) { return std::sin(kTwoPi * (s1 - s2) / T); }

}  // namespace

double period_T(const Vec& k, const Vec& l) {
  require_same_shell(k, l, kModule);
  const double energy = dot(k, k);
  const double gap = 1.0 - dot(k, l) / energy;
  if (!(gap >= 1e-12)) {
    throw DegeneracyError(kModule, "k = l: the oscillation period is undefined for the forward pair");
  }
  return kTwoPi / (std::sqrt(energy) * gap);
}

std::pair<double, double> resolve_offsets(double T,
                                          std::optional<std::pair<double, double>> offsets) {
  const auto [s1, s2] = offsets.value_or(std::pair{0.0, 0.25 * T});
  const double slack = 1e-12 * T;
  for (double s : {s1, s2}) {
    if (!std::isfinite(s) || s < -slack || s > T + slack) {
      std::ostringstream msg;
      msg << "sampling offset " << s << " outside [0, T] with T = " << T;
      throw ValidationError(kModule, msg.str());
    }
  }
  if (std::abs(offset_sine(T, s1, s2)) < kMinOffsetSine) {
    std::ostringstream msg;
    msg << "degenerate sampling offsets: |sin(2 pi (s1 - s2) / T)| = "
        << std::abs(offset_sine(T, s1, s2)) << " < " << kMinOffsetSine
        << " (s1 must differ from s2 modulo T/2)";
    throw DegeneracyError(kModule, msg.str());
  }
  return {s1, s2};
}

Complex recover_f_at_n(const RaySampleSet& samples, int n, const FarFieldConstant& constant) {
  const auto it = std::find(samples.n_list.begin(), samples.n_list.end(), n);
  if (it == samples.n_list.end()) {
    throw ValidationError(kModule, "n = " + std::to_string(n) + " is not in the sample set");
  }
  const auto [a1, a2] = samples.a_values[static_cast<std::size_t>(it - samples.n_list.begin())];

  const double det = offset_sine(samples.T, samples.s1, samples.s2);
  if (std::abs(det) < kMinOffsetSine) {
    throw DegeneracyError(kModule, "degenerate sampling offsets (s1 = s2 modulo T/2)");
  }
  const double theta1 = kTwoPi * samples.s1 / samples.T + constant.phase_beta;
  const double theta2 = kTwoPi * samples.s2 / samples.T + constant.phase_beta;
  const double scale = 1.0 / (2.0 * constant.modulus * det);
  const double real = scale * (-std::sin(theta2) * a1 + std::sin(theta1) * a2);
  const double imag = scale * (-std::cos(theta2) * a1 + std::cos(theta1) * a2);
  return {real, imag};
}

RaySampleSet sample_ray(const ScatteringSolution& solution, const Vec& l, std::vector<int> n_list,
                        std::optional<std::pair<double, double>> offsets) {
  validate_n_list(n_list);
  const Vec& k = solution.context.k;
  const double T = period_T(k, l);
  const auto [s1, s2] = resolve_offsets(T, offsets);

  const double support = solution.grid().potential.support_radius();
  const double nearest = std::min(s1, s2) + n_list.front() * T;
  if (!(nearest > 2.0 * support)) {
    std::ostringstream msg;
    msg << "smallest sample radius " << nearest << " must exceed 2 * support_radius = "
        << 2.0 * support << "; raise the smallest n";
    throw GeometryError(kModule, msg.str());
  }

  RaySampleSet samples{k, l, T, s1, s2, std::move(n_list), {}};
  const Vec direction = unit(l);
  samples.a_values.reserve(samples.n_list.size());
  for (int n : samples.n_list) {
    samples.a_values.emplace_back(phaseless_a(solution, samples.radius(n, 1) * direction),
                                  phaseless_a(solution, samples.radius(n, 2) * direction));
  }
  return samples;
}

RaySampleSet samples_from_records(const Vec& k, const Vec& l, std::span<const RaySampleRecord> records,
                                  std::optional<double> support_radius) {
  const double T = period_T(k, l);
  std::map<int, double> by_offset[2];
  std::optional<double> offset[2];
  for (const auto& record : records) {
    if (record.offset_index != 1 && record.offset_index != 2) {
      throw ValidationError(kModule, "offset_index must be 1 or 2");
    }
    if (!std::isfinite(record.s) || !std::isfinite(record.a_value) || !(record.s > 0.0)) {
      throw ValidationError(kModule, "sample radii must be positive and values finite");
    }
    if (support_radius && !(record.s > *support_radius)) {
      throw GeometryError(kModule, "sample radius " + std::to_string(record.s) +
                                       " lies inside the support ball");
    }
    const int n = static_cast<int>(std::floor(record.s / T + 1e-9));
    const double s_j = std::max(0.0, record.s - n * T);
    const int slot = record.offset_index - 1;
    if (offset[slot] && std::abs(*offset[slot] - s_j) > 1e-9 * T) {
      throw ValidationError(kModule, "samples of one offset_index are not spaced by multiples of T");
    }
    offset[slot] = s_j;
    if (n < 1) throw ValidationError(kModule, "sample radius below one period T");
    if (!by_offset[slot].emplace(n, record.a_value).second) {
      throw ValidationError(kModule, "duplicate sample for n = " + std::to_string(n));
    }
  }
  if (!offset[0] || !offset[1]) throw ValidationError(kModule, "samples must cover both offsets");

  RaySampleSet samples{k, l, T, *offset[0], *offset[1], {}, {}};
  resolve_offsets(T, std::pair{samples.s1, samples.s2});
  if (by_offset[0].size() != by_offset[1].size()) {
    throw ValidationError(kModule, "every n must be sampled at both offsets");
  }
  for (const auto& [n, a1] : by_offset[0]) {
    const auto match = by_offset[1].find(n);
    if (match == by_offset[1].end()) {
      throw ValidationError(kModule, "n = " + std::to_string(n) + " is missing at offset 2");
    }
    samples.n_list.push_back(n);
    samples.a_values.emplace_back(a1, match->second);
  }
  return samples;
}

std::vector<RaySampleRecord> to_records(const RaySampleSet& samples) {
  std::vector<RaySampleRecord> records;
  records.reserve(2 * samples.n_list.size());
  for (std::size_t i = 0; i < samples.n_list.size(); ++i) {
    const int n = samples.n_list[i];
    records.push_back({samples.radius(n, 1), samples.a_values[i].first, 1});
    records.push_back({samples.radius(n, 2), samples.a_values[i].second, 2});
  }
  return records;
}

PhaseRecoveryResult recover_f_sequence(const RaySampleSet& samples, const FarFieldConstant& constant,
                                       std::optional<Complex> reference) {
  validate_n_list(samples.n_list);
  if (samples.a_values.size() != samples.n_list.size()) {
    throw ValidationError(kModule, "sample values do not cover n_list");
  }
  PhaseRecoveryResult result;
  result.n_list = samples.n_list;
  for (int n : samples.n_list) result.per_n_estimates.push_back(recover_f_at_n(samples, n, constant));
  result.final_estimate = result.per_n_estimates.back();
  for (const Complex& estimate : result.per_n_estimates) {
    result.residual_trace.push_back(std::abs(estimate - result.final_estimate));
  }
  if (reference) {
    const Complex i{0.0, 1.0};
    for (std::size_t idx = 0; idx < samples.n_list.size(); ++idx) {
      const int n = samples.n_list[idx];
      for (int j : {1, 2}) {
        const double s = samples.radius(n, j);
        const double a0 = 2.0 * (constant.c * std::exp(i * (kTwoPi * s / samples.T)) * *reference).real();
        const double a = j == 1 ? samples.a_values[idx].first : samples.a_values[idx].second;
        result.delta_a_diagnostic.push_back(a - a0);
      }
    }
  }
  return result;
}

PhaseRecoveryResult recover_f_sequence(const ScatteringSolution& solution, const Vec& l,
                                       std::vector<int> n_list,
                                       std::optional<std::pair<double, double>> offsets,
                                       std::optional<Complex> reference) {
  const auto samples = sample_ray(solution, l, std::move(n_list), offsets);
  const auto constant = farfield_constant(solution.context.dimension, solution.context.k_norm());
  return recover_f_sequence(samples, constant, reference);
}

double estimate_decay_slope(std::span<const double> n_values, std::span<const double> errors) {
  if (n_values.size() != errors.size()) {
    throw ValidationError(kModule, "n and error lists differ in length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i]) || !(n_values[i] > 0.0)) continue;
    xs.push_back(std::log(n_values[i]));
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 4) {
    throw InsufficientDataError(kModule, "slope fit needs at least 4 positive errors, got " +
                                             std::to_string(xs.size()));
  }
  const double count = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  return sxy / sxx;
}

void write_ray_samples_csv(std::ostream& out, std::span<const RaySampleRecord> records) {
  out << "s,a_value,offset_index\n";
  out << std::setprecision(17);
  for (const auto& record : records) {
    out << record.s << ',' << record.a_value << ',' << record.offset_index << '\n';
  }
}

std::vector<RaySampleRecord> read_ray_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(kModule, "empty ray-sample CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,a_value,offset_index") {
    throw ValidationError(kModule, "ray-sample CSV header must be 's,a_value,offset_index', got '" +
                                       line + "'");
  }
  std::vector<RaySampleRecord> records;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    RaySampleRecord record;
    char comma1 = 0;
    char comma2 = 0;
    if (!(row >> record.s >> comma1 >> record.a_value >> comma2 >> record.offset_index) ||
        comma1 != ',' || comma2 != ',' || !(row >> std::ws).eof()) {
      throw ValidationError(kModule, "malformed ray-sample CSV at line " + std::to_string(line_number));
    }
    if (record.offset_index != 1 && record.offset_index != 2) {
      throw ValidationError(kModule, "offset_index must be 1 or 2 at line " + std::to_string(line_number));
    }
    records.push_back(record);
  }
  return records;
}

}  // namespace phaserec
