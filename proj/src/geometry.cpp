#include "phaserec/geometry.hpp"

#include <sstream>

#include "phaserec/error.hpp"

namespace phaserec {

Vec make_vec(std::span<const double> comps) {
  if (comps.size() != 2 && comps.size() != 3) {
    throw ValidationError("geometry", "vectors must have 2 or 3 components, got " +
                                          std::to_string(comps.size()));
  }
  Vec v{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!std::isfinite(comps[i])) throw ValidationError("geometry", "non-finite vector component");
    v[i] = comps[i];
  }
  return v;
}

Vec unit(const Vec& a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw DomainError("geometry", "cannot normalize the zero vector");
  return (1.0 / n) * a;
}

std::vector<double> components(const Vec& a, int dimension) {
  return {a.begin(), a.begin() + dimension};
}

std::string to_string(const Vec& a, int dimension) {
  std::ostringstream out;
  out << '(';
  for (int i = 0; i < dimension; ++i) out << (i ? ", " : "") << a[i];
  out << ')';
  return out.str();
}

}  // namespace phaserec
