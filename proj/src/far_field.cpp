#include "phaserec/far_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phaserec/error.hpp"

namespace phaserec {
namespace {

constexpr const char* kModule = "far_field";
constexpr Complex kI{0.0, 1.0};

// z^(m/2) on the principal branch, exact multiplication for even m.
Complex half_integer_power(Complex z, int m) {
  const Complex base = m % 2 == 0 ? z : std::sqrt(z);
  const int count = m % 2 == 0 ? m / 2 : m;
  Complex result{1.0, 0.0};
  for (int i = 0; i < count; ++i) result *= base;
  return result;
}

void require_along(const Vec& l, const Vec& x) {
  if (!(norm(x) > 0.0)) throw DomainError(kModule, "observation point must be nonzero");
  if (norm(unit(l) - unit(x)) > 1e-10) {
    throw ValidationError(kModule, "amplitude direction l does not point along x");
  }
}

}  // namespace

double principal_arg(Complex z) {
  const double angle = std::atan2(z.imag(), z.real());
  return angle <= -std::numbers::pi ? std::numbers::pi : angle;
}

FarFieldConstant farfield_constant(int dimension, double k_norm) {
  if (dimension != 2 && dimension != 3) throw DomainError(kModule, "dimension must be 2 or 3");
  if (!(k_norm > 0.0) || !std::isfinite(k_norm)) throw DomainError(kModule, "|k| must be > 0");
  const double pi = std::numbers::pi;
  Complex c = -pi * kI * half_integer_power(-2.0 * pi * kI, dimension - 1) *
              std::pow(k_norm, 0.5 * (dimension - 3));
  // Clean signed zeros so that a real negative c reports beta = pi.
  if (c.imag() == 0.0) c = {c.real(), 0.0};
  return {dimension, k_norm, c, std::abs(c), principal_arg(c)};
}

FarFieldEntry FarFieldEntry::from_value(const Vec& k, const Vec& l, Complex f) {
  const double modulus = std::abs(f);
  return {k, l, f, modulus, modulus < 1e-14 ? 0.0 : principal_arg(f)};
}

FarFieldEntry scattering_amplitude(const ScatteringSolution& solution, const Vec& l) {
  require_same_shell(solution.context.k, l, kModule);
  const auto& grid = solution.grid();
  const int d = grid.dimension();
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid.v_values[j] == 0.0) continue;
    sum += std::exp(-kI * dot(l, grid.cell_centers[j])) * grid.v_values[j] * solution.psi_values[j];
  }
  const Complex f = sum * grid.cell_volume * std::pow(2.0 * std::numbers::pi, -d);
  return FarFieldEntry::from_value(solution.context.k, l, f);
}

Complex leading_field(const FarFieldEntry& entry, int dimension, const Vec& x) {
  require_along(entry.l, x);
  const double r = norm(x);
  const double k_norm = norm(entry.k);
  const auto constant = farfield_constant(dimension, k_norm);
  return std::exp(kI * dot(entry.k, x)) +
         constant.c * std::exp(kI * (k_norm * r)) / std::pow(r, 0.5 * (dimension - 1)) * entry.f;
}

double phaseless_a(const ScatteringSolution& solution, const Vec& x) {
  const double r = norm(x);
  const double support = solution.grid().potential.support_radius();
  if (!(r > support)) {
    std::ostringstream msg;
    msg << "phaseless samples must lie outside the scatterer: |x| = " << r
        << " <= support radius " << support;
    throw GeometryError(kModule, msg.str());
  }
  // |psi|^2 - 1 = 2 Re(conj(incident) scattered) + |scattered|^2, without cancellation
  const Complex incident = std::exp(kI * dot(solution.context.k, x));
  const Complex scattered = scattered_psi(solution, x);
  const double excess = 2.0 * (std::conj(incident) * scattered).real() + std::norm(scattered);
  return std::pow(r, 0.5 * (solution.context.dimension - 1)) * excess;
}

double background_a0(const FarFieldEntry& entry, int dimension, const Vec& x) {
  require_along(entry.l, x);
  const double k_norm = norm(entry.k);
  const auto constant = farfield_constant(dimension, k_norm);
  const double phase = k_norm * norm(x) - dot(entry.k, x);
  return 2.0 * (constant.c * std::exp(kI * phase) * entry.f).real();
}

}  // namespace phaserec
