#pragma once

#include "phaserec/geometry.hpp"

/// Order-zero (and order-one) cylinder functions of a real positive argument.
///
/// Every function uses the ascending power series below `kSeriesSwitchover`
/// and the Hankel asymptotic expansion above it. Both regimes agree to
/// better than 1e-10 at the switchover.
namespace phaserec::special {

inline constexpr double kSeriesSwitchover = 12.0;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// J0(x), x >= 0.
double bessel_j0(double x);

/// J1(x), x >= 0.
double bessel_j1(double x);

/// Y0(x), x > 0.
double bessel_y0(double x);

/// H0^(1)(x) = J0(x) + i Y0(x), x > 0.
Complex hankel1_0(double x);

namespace detail {
// The two evaluation regimes, exposed so their agreement can be tested.
double series_j0(double x);
double series_j1(double x);
double series_y0(double x);
double asymptotic_j0(double x);
double asymptotic_j1(double x);
double asymptotic_y0(double x);
}  // namespace detail

}  // namespace phaserec::special
