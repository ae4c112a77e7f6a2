#pragma once

#include "phaserec/forward_solver.hpp"

namespace fixtures {

/// 2D disc (amplitude 0.5, radius 1, support 1), E = 1, k = (1, 0).
inline const phaserec::ScatteringSolution& disc_2d() {
  constexpr int cells = 24;
  using namespace phaserec;
  static const auto solution = [] {
    const auto disc = make_potential(2, PotentialKind::disc_constant, {0.5, 1.0}, 1.0);
    return solve_psi_on_support(discretize(disc, cells),
                                PlaneWaveContext::from_wave_vector(2, {1.0, 0.0, 0.0}));
  }();
  return solution;
}

/// 3D ball (amplitude 0.3, radius 1, support 1), E = 1, k = (1, 0, 0).
inline const phaserec::ScatteringSolution& ball_3d() {
  using namespace phaserec;
  static const auto solution = [] {
    const auto ball = make_potential(3, PotentialKind::disc_constant, {0.3, 1.0}, 1.0);
    return solve_psi_on_support(discretize(ball, 10),
                                PlaneWaveContext::from_wave_vector(3, {1.0, 0.0, 0.0}));
  }();
  return solution;
}

}  // namespace fixtures
