#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phaserec/geometry.hpp"

namespace phaserec {

enum class PotentialKind {
  disc_constant,       ///< params: amplitude, radius (disc in 2D, ball in 3D)
  truncated_gaussian,  ///< params: amplitude, sigma
  sum_of_bumps,        ///< params: groups of (amplitude, width, center_1..center_d)
  acoustic,            ///< built from a refraction index, see acoustic_to_potential
};

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

struct AcousticMedium;

/// A real, bounded, compactly supported scatterer v. Vanishes identically
/// outside the open ball of radius support_radius() centered at the origin.
class Potential {
 public:
  using Profile = std::function<double(const Vec&)>;

  /// Validates params against the kind; throws ValidationError.
  static Potential make(int dimension, PotentialKind kind, std::vector<double> params,
                        double support_radius);

  /// The identically zero potential on a ball of the given radius.
  static Potential zero(int dimension, double support_radius);

  double operator()(const Vec& x) const;

  int dimension() const { return dimension_; }
  PotentialKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double support_radius() const { return support_radius_; }

  /// True when v is known to vanish everywhere.
  bool is_zero() const;

 private:
  friend AcousticMedium acoustic_to_potential(int, std::function<double(const Vec&)>, double,
                                              double, double);
  Potential() = default;

  int dimension_ = 2;
  PotentialKind kind_ = PotentialKind::disc_constant;
  std::vector<double> params_;
  double support_radius_ = 1.0;
  Profile profile_;  // only for the acoustic kind
};

inline Potential make_potential(int dimension, PotentialKind kind, std::vector<double> params,
                                double support_radius) {
  return Potential::make(dimension, kind, std::move(params), support_radius);
}

struct AcousticMedium {
  Potential potential;
  double energy;  ///< (omega / c0)^2
};

/// v(x) = (1 - n(x)^2) (omega/c0)^2. The refraction index must equal 1 on and
/// outside the support sphere; this is checked on a set of shells.
AcousticMedium acoustic_to_potential(int dimension, std::function<double(const Vec&)> refraction,
                                     double omega, double c0, double support_radius);

/// Midpoint sampling of a potential on the uniform grid covering [-r, r]^d.
/// Only cells whose center lies inside the support ball are kept ("active").
struct GridDiscretization {
  Potential potential;
  int cells_per_side = 0;
  double cell_size = 0.0;
  double cell_volume = 0.0;
  std::vector<Vec> cell_centers;  ///< active cells only
  std::vector<double> v_values;   ///< aligned with cell_centers
  std::vector<long> active_index; ///< full-grid linear index -> active index or -1

  int dimension() const { return potential.dimension(); }
  std::size_t size() const { return cell_centers.size(); }

  /// Sum of v over the active cells times the cell volume.
  double integral() const;

  /// Index of the active cell whose box contains x, if any.
  std::optional<std::size_t> owning_cell(const Vec& x) const;
};

GridDiscretization discretize(const Potential& potential, int cells_per_side);

}  // namespace phaserec
