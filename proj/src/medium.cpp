#include "phaserec/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phaserec/error.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "medium";

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(kModule, what); }

std::size_t bump_stride(int dimension) { return 2 + static_cast<std::size_t>(dimension); }

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::disc_constant: return "disc_constant";
    case PotentialKind::truncated_gaussian: return "truncated_gaussian";
    case PotentialKind::sum_of_bumps: return "sum_of_bumps";
    case PotentialKind::acoustic: return "acoustic";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "disc_constant") return PotentialKind::disc_constant;
  if (name == "truncated_gaussian") return PotentialKind::truncated_gaussian;
  if (name == "sum_of_bumps") return PotentialKind::sum_of_bumps;
  invalid("unknown potential kind '" + name +
          "' (expected disc_constant, truncated_gaussian or sum_of_bumps)");
}

Potential Potential::make(int dimension, PotentialKind kind, std::vector<double> params,
                          double support_radius) {
  if (dimension != 2 && dimension != 3) invalid("dimension must be 2 or 3");
  if (!std::isfinite(support_radius) || !(support_radius > 0.0)) {
    invalid("support_radius must be finite and > 0");
  }
  for (double p : params) {
    if (!std::isfinite(p)) invalid("potential params must be finite");
  }

  switch (kind) {
    case PotentialKind::disc_constant:
      if (params.size() != 2) invalid("disc_constant needs params [amplitude, radius]");
      if (!(params[1] > 0.0)) invalid("disc_constant radius must be > 0");
      if (params[1] > support_radius) invalid("disc_constant radius exceeds support_radius");
      break;
    case PotentialKind::truncated_gaussian:
      if (params.size() != 2) invalid("truncated_gaussian needs params [amplitude, sigma]");
      if (!(params[1] > 0.0)) invalid("truncated_gaussian sigma must be > 0");
      break;
    case PotentialKind::sum_of_bumps: {
      const std::size_t stride = bump_stride(dimension);
      if (params.empty() || params.size() % stride != 0) {
        invalid("sum_of_bumps needs groups of [amplitude, width, center...] of length " +
                std::to_string(stride));
      }
      for (std::size_t g = 0; g < params.size(); g += stride) {
        if (!(params[g + 1] > 0.0)) invalid("sum_of_bumps width must be > 0");
        Vec center{0.0, 0.0, 0.0};
        for (int i = 0; i < dimension; ++i) center[i] = params[g + 2 + i];
        if (!(norm(center) < support_radius)) {
          invalid("sum_of_bumps center must lie strictly inside the support ball");
        }
      }
      break;
    }
    case PotentialKind::acoustic:
      invalid("acoustic potentials are built with acoustic_to_potential");
  }

  Potential v;
  v.dimension_ = dimension;
  v.kind_ = kind;
  v.params_ = std::move(params);
  v.support_radius_ = support_radius;
  return v;
}

Potential Potential::zero(int dimension, double support_radius) {
  return make(dimension, PotentialKind::disc_constant, {0.0, support_radius}, support_radius);
}

bool Potential::is_zero() const {
  switch (kind_) {
    case PotentialKind::disc_constant:
    case PotentialKind::truncated_gaussian:
      return params_[0] == 0.0;
    case PotentialKind::sum_of_bumps:
      for (std::size_t g = 0; g < params_.size(); g += bump_stride(dimension_)) {
        if (params_[g] != 0.0) return false;
      }
      return true;
    case PotentialKind::acoustic:
      return false;
  }
  return false;
}

double Potential::operator()(const Vec& x) const {
  const double rho2 = dot(x, x);
  if (!(rho2 < support_radius_ * support_radius_)) return 0.0;

  switch (kind_) {
    case PotentialKind::disc_constant:
      return rho2 < params_[1] * params_[1] ? params_[0] : 0.0;
    case PotentialKind::truncated_gaussian:
      return params_[0] * std::exp(-rho2 / (2.0 * params_[1] * params_[1]));
    case PotentialKind::sum_of_bumps: {
      double value = 0.0;
      const std::size_t stride = bump_stride(dimension_);
      for (std::size_t g = 0; g < params_.size(); g += stride) {
        Vec center{0.0, 0.0, 0.0};
        for (int i = 0; i < dimension_; ++i) center[i] = params_[g + 2 + i];
        const double width = params_[g + 1];
        const Vec offset = x - center;
        const double t = dot(offset, offset) / (width * width);
        if (t < 1.0) value += params_[g] * (1.0 - t) * (1.0 - t);
      }
      return value;
    }
    case PotentialKind::acoustic:
      return profile_(x);
  }
  return 0.0;
}

AcousticMedium acoustic_to_potential(int dimension, std::function<double(const Vec&)> refraction,
                                     double omega, double c0, double support_radius) {
  if (dimension != 2 && dimension != 3) invalid("dimension must be 2 or 3");
  if (!(omega > 0.0) || !(c0 > 0.0) || !std::isfinite(omega) || !std::isfinite(c0)) {
    invalid("omega and c0 must be finite and > 0");
  }
  if (!std::isfinite(support_radius) || !(support_radius > 0.0)) {
    invalid("support_radius must be finite and > 0");
  }
  if (!refraction) invalid("refraction index function is empty");

  // n must be 1 on the support sphere and beyond it.
  constexpr int kAngles = 64;
  for (double shell : {1.0, 1.01, 1.1, 1.5, 2.0}) {
    const double radius = shell * support_radius;
    for (int i = 0; i < kAngles; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / kAngles;
      const int polar_steps = dimension == 2 ? 1 : 9;
      for (int j = 0; j < polar_steps; ++j) {
        const double theta =
            dimension == 2 ? 0.5 * std::numbers::pi : std::numbers::pi * (j + 0.5) / polar_steps;
        const Vec x{radius * std::sin(theta) * std::cos(phi),
                    radius * std::sin(theta) * std::sin(phi),
                    dimension == 2 ? 0.0 : radius * std::cos(theta)};
        const double n = refraction(x);
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12) {
          std::ostringstream msg;
          msg << "refraction index must equal 1 outside the support ball; n = " << n
              << " at |x| = " << radius;
          invalid(msg.str());
        }
      }
    }
  }

  const double wavenumber_sq = (omega / c0) * (omega / c0);
  Potential v;
  v.dimension_ = dimension;
  v.kind_ = PotentialKind::acoustic;
  v.params_ = {omega, c0};
  v.support_radius_ = support_radius;
  v.profile_ = [n = std::move(refraction), wavenumber_sq](const Vec& x) {
    const double index = n(x);
    return (1.0 - index * index) * wavenumber_sq;
  };
  return {std::move(v), wavenumber_sq};
}

double GridDiscretization::integral() const {
  double sum = 0.0;
  for (double value : v_values) sum += value;
  return sum * cell_volume;
}

std::optional<std::size_t> GridDiscretization::owning_cell(const Vec& x) const {
  const double r = potential.support_radius();
  long linear = 0;
  long stride = 1;
  for (int axis = 0; axis < dimension(); ++axis) {
    const double t = (x[axis] + r) / cell_size;
    if (!(t >= 0.0) || t >= cells_per_side) return std::nullopt;
    const long index = std::min<long>(static_cast<long>(t), cells_per_side - 1);
    linear += index * stride;
    stride *= cells_per_side;
  }
  const long active = active_index[static_cast<std::size_t>(linear)];
  if (active < 0) return std::nullopt;
  return static_cast<std::size_t>(active);
}

GridDiscretization discretize(const Potential& potential, int cells_per_side) {
  if (cells_per_side < 4) invalid("cells_per_side must be >= 4");

  const int d = potential.dimension();
  const double r = potential.support_radius();

  GridDiscretization grid{potential, cells_per_side, 2.0 * r / cells_per_side, 0.0, {}, {}, {}};
  grid.cell_volume = std::pow(grid.cell_size, d);

  long total = 1;
  for (int i = 0; i < d; ++i) total *= cells_per_side;
  grid.active_index.assign(static_cast<std::size_t>(total), -1);

  for (long linear = 0; linear < total; ++linear) {
    Vec center{0.0, 0.0, 0.0};
    long rest = linear;
    for (int axis = 0; axis < d; ++axis) {
      const long index = rest % cells_per_side;
      rest /= cells_per_side;
      center[axis] = -r + (static_cast<double>(index) + 0.5) * grid.cell_size;
    }
    if (!(norm(center) < r)) continue;
    grid.active_index[static_cast<std::size_t>(linear)] = static_cast<long>(grid.cell_centers.size());
    grid.cell_centers.push_back(center);
    grid.v_values.push_back(potential(center));
  }
  return grid;
}

}  // namespace phaserec
