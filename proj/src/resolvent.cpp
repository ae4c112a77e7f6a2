#include "phaserec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "phaserec/error.hpp"
#include "phaserec/far_field.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "resolvent";

void require_exterior(const Vec& x, double support_radius, const char* what) {
  if (!(norm(x) > support_radius)) {
    std::ostringstream msg;
    msg << what << " must lie outside the support ball (|x| = " << norm(x) << ", r = "
        << support_radius << ")";
    throw GeometryError(kModule, msg.str());
  }
}

}  // namespace

ResolventField solve_resolvent_field(std::shared_ptr<const NystromOperator> op, const Vec& source) {
  if (!op) throw ValidationError(kModule, "null operator");
  const auto& grid = op->grid();
  const int d = grid.dimension();
  if (d == 2 && source[2] != 0.0) throw ValidationError(kModule, "2D source has a third component");

  ResolventField field{source, op->k_norm() * op->k_norm(), op, {}, 0.0, false};
  const double tolerance = 1e-9 * grid.cell_size;
  for (const Vec& center : grid.cell_centers) {
    if (distance(center, field.source) < tolerance) {
      for (int axis = 0; axis < d; ++axis) field.source[axis] += 0.5 * grid.cell_size;
      field.source_shifted = true;
      std::clog << "warning: resolvent source " << to_string(source, d)
                << " coincides with a cell center; shifted to " << to_string(field.source, d)
                << '\n';
      break;
    }
  }

  std::vector<Complex> rhs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rhs[i] = -green_free(d, distance(grid.cell_centers[i], field.source), op->k_norm());
  }
  field.R_values = op->solve(rhs, &field.residual);
  return field;
}

ResolventField solve_resolvent_field(const GridDiscretization& grid, const Vec& source,
                                     double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ValidationError(kModule, "E > 0 required");
  auto op = std::make_shared<const NystromOperator>(
      std::make_shared<const GridDiscretization>(grid), std::sqrt(energy));
  return solve_resolvent_field(std::move(op), source);
}

Complex evaluate_resolvent(const ResolventField& field, const Vec& x) {
  const double r = distance(x, field.source);
  if (!(r > 0.0)) throw DomainError(kModule, "R+ is singular at the source point");
  return -green_free(field.grid().dimension(), r, field.op->k_norm()) +
         field.op->represent(x, field.R_values);
}

double reciprocity_defect(std::shared_ptr<const NystromOperator> op, const Vec& x,
                          const Vec& x_prime) {
  if (!op) throw ValidationError(kModule, "null operator");
  if (!(distance(x, x_prime) > 0.0)) throw DomainError(kModule, "reciprocity needs x != x'");
  const double support = op->grid().potential.support_radius();
  require_exterior(x, support, "x");
  require_exterior(x_prime, support, "x'");
  const Complex forward = evaluate_resolvent(solve_resolvent_field(op, x_prime), x);
  const Complex backward = evaluate_resolvent(solve_resolvent_field(op, x), x_prime);
  return std::abs(forward - backward);
}

double reciprocity_defect(const GridDiscretization& grid, const Vec& x, const Vec& x_prime,
                          double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ValidationError(kModule, "E > 0 required");
  auto op = std::make_shared<const NystromOperator>(
      std::make_shared<const GridDiscretization>(grid), std::sqrt(energy));
  return reciprocity_defect(std::move(op), x, x_prime);
}

std::vector<RadialSample> sample_backward_ray(const ResolventField& field, const Vec& k,
                                              std::span<const double> radii) {
  const Vec direction = unit(k);
  std::vector<RadialSample> samples;
  samples.reserve(radii.size());
  for (double s : radii) {
    samples.push_back({s, std::norm(evaluate_resolvent(field, -s * direction))});
  }
  return samples;
}

ResolventReduction psi_sq_from_resolvent(int dimension, std::span<const RadialSample> samples,
                                         const Vec& k, const Vec& x_prime, double support_radius,
                                         ReductionScaling scaling) {
  if (samples.size() < 2) {
    throw ValidationError(kModule, "psi_sq_from_resolvent needs at least two radii");
  }
  require_exterior(x_prime, support_radius, "x'");
  std::vector<RadialSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RadialSample& a, const RadialSample& b) { return a.s < b.s; });
  for (const auto& sample : sorted) {
    if (!(sample.s >= 2.0 * support_radius) || !std::isfinite(sample.r_squared)) {
      std::ostringstream msg;
      msg << "reduction radius s = " << sample.s << " is below 2 * support_radius";
      throw ValidationError(kModule, msg.str());
    }
  }

  const double two_pi = 2.0 * std::numbers::pi;
  const double c_modulus = farfield_constant(dimension, norm(k)).modulus;
  ResolventReduction result;
  for (const auto& sample : sorted) {
    double factor;
    if (scaling == ReductionScaling::squared) {
      factor = std::pow(two_pi, 2 * dimension) / (c_modulus * c_modulus) *
               std::pow(sample.s, dimension - 1);
    } else {
      factor = std::pow(two_pi, dimension) / c_modulus * std::pow(sample.s, 0.5 * (dimension - 1));
    }
    result.s_values.push_back(sample.s);
    result.scaled.push_back(factor * sample.r_squared);
  }
  const std::size_t last = result.scaled.size() - 1;
  result.psi_sq = result.scaled[last];
  result.defect = std::abs(result.scaled[last] - result.scaled[last - 1]);
  result.s = result.s_values[last];
  return result;
}

}  // namespace phaserec
