#include "phaserec/forward_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phaserec/error.hpp"
#include "phaserec/parallel.hpp"
#include "phaserec/special_functions.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "forward_solver";
constexpr double kMaxCondition = 1e12;
constexpr double kMaxResidual = 1e-10;
constexpr Complex kI{0.0, 1.0};

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

}  // namespace

PlaneWaveContext PlaneWaveContext::from_wave_vector(int dimension, const Vec& k) {
  if (dimension != 2 && dimension != 3) throw ValidationError(kModule, "dimension must be 2 or 3");
  if (dimension == 2 && k[2] != 0.0) {
    throw ValidationError(kModule, "2D wave vector has a third component");
  }
  const double energy = dot(k, k);
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw ValidationError(kModule, "wave vector must be finite and nonzero (E > 0)");
  }
  return {dimension, k, energy};
}

PlaneWaveContext PlaneWaveContext::from_direction(int dimension, const Vec& direction,
                                                  double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ValidationError(kModule, "E > 0 required");
  PlaneWaveContext ctx = from_wave_vector(dimension, std::sqrt(energy) * unit(direction));
  ctx.energy = energy;
  return ctx;
}

Complex green_free(int dimension, double distance, double k_norm) {
  if (!(distance > 0.0) || !std::isfinite(distance)) {
    throw DomainError(kModule, "green_free is singular at distance 0; use singular_cell_weight");
  }
  if (!(k_norm > 0.0)) throw DomainError(kModule, "green_free requires |k| > 0");
  if (dimension == 3) {
    return -std::exp(kI * (k_norm * distance)) / (4.0 * std::numbers::pi * distance);
  }
  if (dimension == 2) return -0.25 * kI * special::hankel1_0(k_norm * distance);
  throw DomainError(kModule, "dimension must be 2 or 3");
}

Complex singular_cell_weight(int dimension, double cell_size, double k_norm) {
  const double pi = std::numbers::pi;
  if (dimension == 2) {
    // H0(z) ~ 1 + (2i/pi)(ln(z/2) + gamma), integrated over the equal-area disc.
    const double area = cell_size * cell_size;
    const double rho = cell_size / std::sqrt(pi);
    return -0.25 * kI * area +
           area / (2.0 * pi) * (std::log(0.5 * k_norm * rho) + special::kEulerGamma - 0.5);
  }
  if (dimension == 3) {
    // -\int_ball exp(i k s) / (4 pi s) dV = -\int_0^rho s exp(i k s) ds, exactly.
    const double rho = cell_size * std::cbrt(3.0 / (4.0 * pi));
    const double k2 = k_norm * k_norm;
    return -(std::exp(kI * (k_norm * rho)) * (1.0 / k2 - kI * (rho / k_norm)) - 1.0 / k2);
  }
  throw DomainError(kModule, "dimension must be 2 or 3");
}

struct NystromOperator::Factorization {
  Matrix system;
  Eigen::PartialPivLU<Matrix> lu;
};

NystromOperator::NystromOperator(std::shared_ptr<const GridDiscretization> grid, double k_norm)
    : grid_(std::move(grid)), k_norm_(k_norm) {
  if (!grid_) throw ValidationError(kModule, "null grid");
  if (!(k_norm_ > 0.0) || !std::isfinite(k_norm_)) throw ValidationError(kModule, "E > 0 required");
  const int d = grid_->dimension();
  diagonal_weight_ = singular_cell_weight(d, grid_->cell_size, k_norm_);

  const auto& v = grid_->v_values;
  const bool vanishing = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  if (vanishing) return;

  const auto n = static_cast<Eigen::Index>(grid_->size());
  auto factorization = std::make_unique<Factorization>();
  Matrix& a = factorization->system;
  a.resize(n, n);
  const auto& centers = grid_->cell_centers;
  const double volume = grid_->cell_volume;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    a(row, row) = 1.0 - diagonal_weight_ * v[i];
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      const Complex w = green_free(d, distance(centers[i], centers[j]), k_norm_) * volume;
      a(row, col) = -w * v[j];
      a(col, row) = -w * v[i];
    }
  });

  factorization->lu.compute(a);
  const double rcond = factorization->lu.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "Lippmann-Schwinger system is ill-conditioned (condition estimate " << condition_
        << " > " << kMaxCondition << ")";
    throw SolverError(kModule, msg.str(), condition_);
  }
  factorization_ = std::move(factorization);
}

NystromOperator::~NystromOperator() = default;
NystromOperator::NystromOperator(NystromOperator&&) noexcept = default;
NystromOperator& NystromOperator::operator=(NystromOperator&&) noexcept = default;

std::vector<Complex> NystromOperator::solve(std::span<const Complex> rhs,
                                            double* relative_residual) const {
  if (rhs.size() != grid_->size()) throw ValidationError(kModule, "right-hand side size mismatch");
  if (!factorization_) {
    if (relative_residual) *relative_residual = 0.0;
    return {rhs.begin(), rhs.end()};
  }
  const auto n = static_cast<Eigen::Index>(rhs.size());
  const Eigen::Map<const Vector> b(rhs.data(), n);
  const Vector u = factorization_->lu.solve(b);
  const double b_norm = b.norm();
  const double residual =
      b_norm > 0.0 ? (factorization_->system * u - b).norm() / b_norm : (factorization_->system * u).norm();
  if (!(residual <= kMaxResidual)) {
    std::ostringstream msg;
    msg << "backsubstitution residual " << residual << " exceeds " << kMaxResidual;
    throw SolverError(kModule, msg.str(), condition_);
  }
  if (relative_residual) *relative_residual = residual;
  return {u.data(), u.data() + n};
}

Complex NystromOperator::weight(const Vec& x, std::size_t j,
                                std::optional<std::size_t> owner) const {
  if (owner && *owner == j) return diagonal_weight_;
  return green_free(grid_->dimension(), distance(x, grid_->cell_centers[j]), k_norm_) *
         grid_->cell_volume;
}

Complex NystromOperator::represent(const Vec& x, std::span<const Complex> density) const {
  const auto owner = grid_->owning_cell(x);
  const auto& v = grid_->v_values;
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 0.0) continue;
    sum += weight(x, j, owner) * v[j] * density[j];
  }
  return sum;
}

ScatteringSolution solve_psi_on_support(std::shared_ptr<const NystromOperator> op,
                                        const PlaneWaveContext& context) {
  if (!op) throw ValidationError(kModule, "null operator");
  const auto& grid = op->grid();
  if (context.dimension != grid.dimension()) {
    throw ValidationError(kModule, "wave vector dimension does not match the grid");
  }
  if (std::abs(op->k_norm() - context.k_norm()) > 1e-12 * context.k_norm()) {
    throw ValidationError(kModule, "operator was assembled for a different energy");
  }
  std::vector<Complex> incident(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    incident[i] = std::exp(kI * dot(context.k, grid.cell_centers[i]));
  }
  ScatteringSolution solution{context, op, {}, 0.0};
  solution.psi_values = op->solve(incident, &solution.residual);
  return solution;
}

ScatteringSolution solve_psi_on_support(const GridDiscretization& grid,
                                        const PlaneWaveContext& context) {
  if (context.dimension != grid.dimension()) {
    throw ValidationError(kModule, "wave vector dimension does not match the grid");
  }
  auto op = std::make_shared<const NystromOperator>(
      std::make_shared<const GridDiscretization>(grid), context.k_norm());
  return solve_psi_on_support(std::move(op), context);
}

Complex scattered_psi(const ScatteringSolution& solution, const Vec& x) {
  return solution.op->represent(x, solution.psi_values);
}

Complex evaluate_psi(const ScatteringSolution& solution, const Vec& x) {
  return std::exp(kI * dot(solution.context.k, x)) + scattered_psi(solution, x);
}

void require_same_shell(const Vec& k, const Vec& l, const char* module) {
  const double nk = norm(k);
  const double nl = norm(l);
  if (!(nk > 0.0) || std::abs(nk - nl) > 1e-12 * nk) {
    std::ostringstream msg;
    msg << "wave vectors are not on the same energy shell: |k| = " << nk << ", |l| = " << nl;
    throw ValidationError(module, msg.str());
  }
}

Complex born_amplitude(const Potential& potential, const Vec& k, const Vec& l) {
  require_same_shell(k, l, kModule);
  const int d = potential.dimension();
  const double pi = std::numbers::pi;
  const double normalization = std::pow(2.0 * pi, -d);
  const Vec q = k - l;
  const double qn = norm(q);
  const auto& p = potential.params();

  switch (potential.kind()) {
    case PotentialKind::disc_constant: {
      const double amplitude = p[0];
      const double radius = p[1];
      const double z = qn * radius;
      double transform;
      if (d == 2) {
        // \int_disc exp(i q y) dy = 2 pi R^2 J1(qR) / (qR)
        transform = z < 1e-8 ? pi * radius * radius
                             : 2.0 * pi * radius * radius * special::bessel_j1(z) / z;
      } else {
        // \int_ball exp(i q y) dy = 4 pi (sin z - z cos z) / q^3
        transform = z < 1e-3 ? 4.0 * pi * radius * radius * radius / 3.0 * (1.0 - z * z / 10.0)
                             : 4.0 * pi * (std::sin(z) - z * std::cos(z)) / (qn * qn * qn);
      }
      return normalization * amplitude * transform;
    }
    case PotentialKind::truncated_gaussian: {
      const double sigma = p[1];
      return normalization * p[0] * std::pow(2.0 * pi * sigma * sigma, 0.5 * d) *
             std::exp(-0.5 * sigma * sigma * qn * qn);
    }
    case PotentialKind::sum_of_bumps:
    case PotentialKind::acoustic:
      break;
  }

  // Midpoint quadrature over [-r, r]^d.
  const int n = d == 2 ? 400 : 96;
  const double r = potential.support_radius();
  const double h = 2.0 * r / n;
  Complex sum{0.0, 0.0};
  const int nz = d == 2 ? 1 : n;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const Vec y{-r + (ix + 0.5) * h, -r + (iy + 0.5) * h, d == 2 ? 0.0 : -r + (iz + 0.5) * h};
        const double value = potential(y);
        if (value != 0.0) sum += value * std::exp(kI * dot(q, y));
      }
    }
  }
  return normalization * sum * std::pow(h, d);
}

}  // namespace phaserec
