#pragma once

#include "phaserec/forward_solver.hpp"
#include "phaserec/geometry.hpp"

namespace phaserec {

/// Argument in (-pi, pi]; -pi is mapped to pi.
double principal_arg(Complex z);

/// c(d, |k|) = -pi i (-2 pi i)^((d-1)/2) |k|^((d-3)/2), principal branch,
/// with its polar form c = |c| exp(i beta).
struct FarFieldConstant {
  int dimension = 2;
  double k_norm = 1.0;
  Complex c;
  double modulus = 0.0;
  double phase_beta = 0.0;
};

FarFieldConstant farfield_constant(int dimension, double k_norm);

/// Scattering amplitude f(k, l) with f = |f| exp(i alpha). alpha is 0 when
/// |f| < 1e-14.
struct FarFieldEntry {
  Vec k{};
  Vec l{};
  Complex f;
  double modulus = 0.0;
  double phase_alpha = 0.0;

  static FarFieldEntry from_value(const Vec& k, const Vec& l, Complex f);
};

/// f(k, l) = (2 pi)^-d sum_j exp(-i l x_j) v_j psi_j vol.
FarFieldEntry scattering_amplitude(const ScatteringSolution& solution, const Vec& l);

/// Leading far-field approximation
///   psi1(x, k) = exp(i k x) + c exp(i |k||x|) |x|^-((d-1)/2) f(k, |k| x/|x|).
/// entry.l must point along x.
Complex leading_field(const FarFieldEntry& entry, int dimension, const Vec& x);

/// Phaseless observable a(x, k) = |x|^((d-1)/2) (|psi+(x, k)|^2 - 1), for x
/// outside the support ball.
double phaseless_a(const ScatteringSolution& solution, const Vec& x);

/// a0(x, k) = 2 Re(c exp(i (|k||x| - k x)) f(k, |k| x/|x|)); entry.l must
/// point along x.
double background_a0(const FarFieldEntry& entry, int dimension, const Vec& x);

}  // namespace phaserec
