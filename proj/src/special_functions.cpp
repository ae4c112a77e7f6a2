#include "phaserec/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phaserec/error.hpp"

namespace phaserec::special {
namespace {

constexpr const char* kModule = "special_functions";

void require(bool ok, const char* what, double x) {
  if (!ok) {
    std::ostringstream msg;
    msg << what << " (x = " << x << ")";
    throw DomainError(kModule, msg.str());
  }
}

// sum_k (-1)^k (x^2/4)^k / (k! (k+order)!), order in {0, 1}
double ascending_series(double x, int order) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > q) break;
  }
  return sum;
}

// sum_{k>=1} (-1)^(k+1) H_k (x^2/4)^k / (k!)^2, H_k the harmonic numbers
double y0_series_tail(double x) {
  const double q = 0.25 * x * x;
  double power = 1.0;
  double harmonic = 0.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    power *= -q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    const double term = -power * harmonic;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > q) break;
  }
  return sum;
}

struct Asymptotic {
  double p;
  double q;
};

// Hankel expansion J_n = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// Y_n = sqrt(2/(pi x)) (P sin chi + Q cos chi), chi = x - (n/2 + 1/4) pi.
Asymptotic hankel_pq(double x, int order) {
  const double mu = 4.0 * order * order;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;  // a_k / x^k, signs included
  double previous = std::abs(term);
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double magnitude = std::abs(term);
    if (magnitude > previous) break;  // the expansion started to diverge
    previous = magnitude;
    // k odd feeds Q with sign (-1)^((k-1)/2), k even feeds P with (-1)^(k/2)
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (magnitude < 1e-17) break;
  }
  return {p, q};
}

double asymptotic_prefactor(double x) {
  return std::sqrt(2.0 / (std::numbers::pi * x));
}

}  // namespace

namespace detail {

double series_j0(double x) { return ascending_series(x, 0); }

double series_j1(double x) { return 0.5 * x * ascending_series(x, 1); }

double series_y0(double x) {
  const double two_over_pi = 2.0 / std::numbers::pi;
  return two_over_pi *
         ((std::log(0.5 * x) + kEulerGamma) * ascending_series(x, 0) + y0_series_tail(x));
}

double asymptotic_j0(double x) {
  const auto [p, q] = hankel_pq(x, 0);
  const double chi = x - 0.25 * std::numbers::pi;
  return asymptotic_prefactor(x) * (p * std::cos(chi) - q * std::sin(chi));
}

double asymptotic_j1(double x) {
  const auto [p, q] = hankel_pq(x, 1);
  const double chi = x - 0.75 * std::numbers::pi;
  return asymptotic_prefactor(x) * (p * std::cos(chi) - q * std::sin(chi));
}

double asymptotic_y0(double x) {
  const auto [p, q] = hankel_pq(x, 0);
  const double chi = x - 0.25 * std::numbers::pi;
  return asymptotic_prefactor(x) * (p * std::sin(chi) + q * std::cos(chi));
}

}  // namespace detail

double bessel_j0(double x) {
  require(std::isfinite(x) && x >= 0.0, "bessel_j0 requires a finite x >= 0", x);
  return x < kSeriesSwitchover ? detail::series_j0(x) : detail::asymptotic_j0(x);
}

double bessel_j1(double x) {
  require(std::isfinite(x) && x >= 0.0, "bessel_j1 requires a finite x >= 0", x);
  return x < kSeriesSwitchover ? detail::series_j1(x) : detail::asymptotic_j1(x);
}

double bessel_y0(double x) {
  require(std::isfinite(x) && x > 0.0,
          "bessel_y0 requires a finite x > 0 (logarithmic singularity at 0)", x);
  return x < kSeriesSwitchover ? detail::series_y0(x) : detail::asymptotic_y0(x);
}

Complex hankel1_0(double x) {
  require(std::isfinite(x) && x > 0.0, "hankel1_0 requires a finite x > 0", x);
  return {bessel_j0(x), bessel_y0(x)};
}

}  // namespace phaserec::special
