#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace phaserec {

using Complex = std::complex<double>;

/// Point or wave vector. Two-dimensional quantities keep the third
/// component at zero, so dot products and norms work for both d=2 and d=3.
using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec operator-(const Vec& a, const Vec& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec operator*(double s, const Vec& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

/// Builds a Vec from 2 or 3 components; throws ValidationError otherwise.
Vec make_vec(std::span<const double> components);

/// Unit vector along a; throws DomainError for the zero vector.
Vec unit(const Vec& a);

/// The first `dimension` components.
std::vector<double> components(const Vec& a, int dimension);

std::string to_string(const Vec& a, int dimension);

}  // namespace phaserec
