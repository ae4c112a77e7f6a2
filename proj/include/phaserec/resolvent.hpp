#pragma once

#include <memory>
#include <span>
#include <vector>

#include "phaserec/forward_solver.hpp"

namespace phaserec {

/// R+(., x', E) on the active cells for a point source at x'.
struct ResolventField {
  Vec source{};
  double energy = 0.0;
  std::shared_ptr<const NystromOperator> op;
  std::vector<Complex> R_values;
  double residual = 0.0;
  bool source_shifted = false;  ///< source collided with a cell center and was moved

  const GridDiscretization& grid() const { return op->grid(); }
};

/// Solves R+(x_i, x') = -G0+(|x_i - x'|) + sum_j W_ij v_j R+(x_j, x').
ResolventField solve_resolvent_field(std::shared_ptr<const NystromOperator> op, const Vec& source);
ResolventField solve_resolvent_field(const GridDiscretization& grid, const Vec& source,
                                     double energy);

/// R+(x, x') anywhere except at the source.
Complex evaluate_resolvent(const ResolventField& field, const Vec& x);

/// |R+(x, x') - R+(x', x)| from two independent solves. x, x' outside the
/// support ball and distinct.
double reciprocity_defect(std::shared_ptr<const NystromOperator> op, const Vec& x,
                          const Vec& x_prime);
double reciprocity_defect(const GridDiscretization& grid, const Vec& x, const Vec& x_prime,
                          double energy);

/// |R+(-s k/|k|, x', E)|^2 recorded at radius s.
struct RadialSample {
  double s = 0.0;
  double r_squared = 0.0;
};

/// Samples |R+|^2 along the ray -s k/|k|.
std::vector<RadialSample> sample_backward_ray(const ResolventField& field, const Vec& k,
                                              std::span<const double> radii);

enum class ReductionScaling {
  squared,     ///< (2 pi)^(2d) |c|^-2 s^(d-1): the square of the far-field link
  as_printed,  ///< (2 pi)^d |c|^-1 s^((d-1)/2): kept only to show it does not converge
};

struct ResolventReduction {
  double psi_sq = 0.0;      ///< estimate at the largest radius
  double defect = 0.0;      ///< |estimate(s_max) - estimate(s_prev)|
  double s = 0.0;           ///< radius of the reported estimate
  std::vector<double> s_values;
  std::vector<double> scaled;  ///< scaled |R+|^2 for every sample, sorted by s
};

/// Estimates |psi+(x', k)|^2 from |R+(-s k/|k|, x', E)|^2 at two or more radii
/// s >= 2 support_radius.
ResolventReduction psi_sq_from_resolvent(int dimension, std::span<const RadialSample> samples,
                                         const Vec& k, const Vec& x_prime, double support_radius,
                                         ReductionScaling scaling = ReductionScaling::squared);

}  // namespace phaserec
