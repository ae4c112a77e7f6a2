#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "phaserec/geometry.hpp"
#include "phaserec/medium.hpp"

namespace phaserec {

/// Incident wave vector k on the energy shell |k|^2 = E.
struct PlaneWaveContext {
  int dimension = 2;
  Vec k{0.0, 0.0, 0.0};
  double energy = 0.0;

  double k_norm() const { return std::sqrt(energy); }

  /// From a wave vector; E = |k|^2.
  static PlaneWaveContext from_wave_vector(int dimension, const Vec& k);
  /// From a (not necessarily unit) direction and the energy.
  static PlaneWaveContext from_direction(int dimension, const Vec& direction, double energy);
};

/// Outgoing free Green's function G0+(|x|, |k|) of -Delta - k^2 with the sign
/// convention (-Delta - k^2) G = -delta:
///   d = 3: -exp(i k r) / (4 pi r)
///   d = 2: -(i/4) H0^(1)(k r)
/// Throws DomainError for distance <= 0.
Complex green_free(int dimension, double distance, double k_norm);

/// Integral of the weakly singular kernel over the disc/ball with the area
/// (volume) of one grid cell, centered on the singularity.
Complex singular_cell_weight(int dimension, double cell_size, double k_norm);

/// Dense Nystrom discretization of u = g + G v u on the active cells of a
/// grid, LU-factorized once. Shared by the plane-wave and point-source solves.
class NystromOperator {
 public:
  NystromOperator(std::shared_ptr<const GridDiscretization> grid, double k_norm);
  ~NystromOperator();
  NystromOperator(NystromOperator&&) noexcept;
  NystromOperator& operator=(NystromOperator&&) noexcept;

  const GridDiscretization& grid() const { return *grid_; }
  const std::shared_ptr<const GridDiscretization>& shared_grid() const { return grid_; }
  double k_norm() const { return k_norm_; }

  /// Reciprocal of the LU-based 1-norm reciprocal condition estimate.
  double condition_estimate() const { return condition_; }

  /// Solves (I - W V) u = rhs. Throws SolverError when the relative
  /// backsubstitution residual exceeds 1e-10.
  std::vector<Complex> solve(std::span<const Complex> rhs, double* relative_residual = nullptr) const;

  /// Quadrature weight coupling an arbitrary point x to active cell j; the
  /// singular-cell weight when j owns x.
  Complex weight(const Vec& x, std::size_t j, std::optional<std::size_t> owner) const;

  /// sum_j weight(x, j) v_j density_j
  Complex represent(const Vec& x, std::span<const Complex> density) const;

 private:
  struct Factorization;

  std::shared_ptr<const GridDiscretization> grid_;
  double k_norm_;
  Complex diagonal_weight_;
  double condition_ = 1.0;
  std::unique_ptr<Factorization> factorization_;  // null when v vanishes on the grid
};

/// psi+ on the active cells of a grid for one incident wave.
struct ScatteringSolution {
  PlaneWaveContext context;
  std::shared_ptr<const NystromOperator> op;
  std::vector<Complex> psi_values;
  double residual = 0.0;

  const GridDiscretization& grid() const { return op->grid(); }
  double condition_estimate() const { return op->condition_estimate(); }
};

ScatteringSolution solve_psi_on_support(std::shared_ptr<const NystromOperator> op,
                                        const PlaneWaveContext& context);
ScatteringSolution solve_psi_on_support(const GridDiscretization& grid,
                                        const PlaneWaveContext& context);

/// psi+(x) - exp(i k x), via the discrete Lippmann-Schwinger representation.
Complex scattered_psi(const ScatteringSolution& solution, const Vec& x);

/// psi+(x) anywhere in space.
Complex evaluate_psi(const ScatteringSolution& solution, const Vec& x);

/// First Born amplitude (2 pi)^-d \int exp(i (k - l) y) v(y) dy. Closed form
/// for disc_constant and (untruncated) truncated_gaussian, quadrature otherwise.
Complex born_amplitude(const Potential& potential, const Vec& k, const Vec& l);

/// Throws ValidationError unless |k| = |l| within 1e-12 relative.
void require_same_shell(const Vec& k, const Vec& l, const char* module);

}  // namespace phaserec
