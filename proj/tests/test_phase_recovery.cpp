#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "phaserec/error.hpp"
#include "phaserec/phase_recovery.hpp"

using namespace phaserec;

namespace {
constexpr double kPi = std::numbers::pi;

/// Samples of the pure oscillation model 2|c||f| cos(2 pi s / T + alpha + beta).
RaySampleSet synthetic(const Vec& k, const Vec& l, int d, Complex f, std::vector<int> n_list,
                       double s1, double s2) {
  RaySampleSet set;
  set.k = k;
  set.l = l;
  set.T = period_T(k, l);
  set.s1 = s1;
  set.s2 = s2;
  set.n_list = std::move(n_list);
  const auto c = farfield_constant(d, norm(k));
  auto model = [&](double s) {
    return 2.0 * c.modulus * std::abs(f) * std::cos(2.0 * kPi * s / set.T + std::arg(f) + c.phase_beta);
  };
  for (int n : set.n_list) set.a_values.emplace_back(model(s1 + n * set.T), model(s2 + n * set.T));
  return set;
}
}  // namespace

TEST_CASE("period_T") {
  CHECK(period_T({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(period_T({2.0, 0.0, 0.0}, {-2.0, 0.0, 0.0}) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
  CHECK(period_T({0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(period_T({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}), DegeneracyError);
  CHECK_THROWS_AS(period_T({1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}), ValidationError);
}

TEST_CASE("offset validation") {
  const double T = 2.0 * kPi;
  const auto [s1, s2] = resolve_offsets(T, std::nullopt);
  CHECK(s1 == 0.0);
  CHECK(s2 == doctest::Approx(T / 4.0));
  CHECK_THROWS_AS(resolve_offsets(T, std::pair{0.0, T / 2.0}), DegeneracyError);
  CHECK_THROWS_AS(resolve_offsets(T, std::pair{1.0, 1.0}), DegeneracyError);
  CHECK_THROWS_AS(resolve_offsets(T, std::pair{-0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(resolve_offsets(T, std::pair{0.5, T + 1.0}), ValidationError);
  CHECK_NOTHROW(resolve_offsets(T, std::pair{0.3, 1.7}));
}

TEST_CASE("oscillation inverse is exact on the model") {
  const Vec k{1.0, 0.0, 0.0};
  for (int d : {2, 3}) {
    const Vec l{0.0, 1.0, 0.0};
    const Complex f{0.37, -1.21};
    const auto set = synthetic(k, l, d, f, {1, 3, 7}, 0.0, period_T(k, l) / 4.0);
    const auto c = farfield_constant(d, 1.0);
    for (int n : set.n_list) CHECK(std::abs(recover_f_at_n(set, n, c) - f) < 1e-12 * std::abs(f));
  }
  const auto zero = synthetic(k, {0.0, 1.0, 0.0}, 2, {0.0, 0.0}, {1, 2}, 0.0, 1.5);
  CHECK(recover_f_sequence(zero, farfield_constant(2, 1.0)).final_estimate == Complex{0.0, 0.0});
}

TEST_CASE("recovery does not depend on the admissible offsets") {
  const Vec k{1.0, 0.0, 0.0};
  const Vec l = unit(Vec{1.0, 1.0, 0.0});
  const double T = period_T(k, l);
  const Complex f{-0.8, 0.45};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> offset(0.0, T);
  int accepted = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double s1 = offset(rng);
    const double s2 = offset(rng);
    if (std::abs(std::sin(2.0 * kPi * (s1 - s2) / T)) < kMinOffsetSine) continue;
    ++accepted;
    const auto set = synthetic(k, l, 2, f, {5}, s1, s2);
    CHECK(std::abs(recover_f_at_n(set, 5, farfield_constant(2, 1.0)) - f) < 1e-10);
  }
  CHECK(accepted > 800);
}

TEST_CASE("noise propagates through the 2x2 inverse with the expected gain") {
  const Vec k{1.0, 0.0, 0.0};
  const Vec l{0.0, -1.0, 0.0};
  const double T = period_T(k, l);
  const Complex f{0.2, 0.1};
  const auto c = farfield_constant(2, 1.0);
  const double eta = 1e-3;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-eta, eta);
  for (double s2 : {T / 4.0, T / 8.0, 0.05 * T}) {
    const double gain = std::sqrt(2.0) / (c.modulus * std::abs(std::sin(2.0 * kPi * s2 / T)));
    for (int trial = 0; trial < 200; ++trial) {
      auto set = synthetic(k, l, 2, f, {4}, 0.0, s2);
      set.a_values[0].first += noise(rng);
      set.a_values[0].second += noise(rng);
      CHECK(std::abs(recover_f_at_n(set, 4, c) - f) <= eta * gain * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("decay slope estimate") {
  std::vector<double> n{2, 4, 8, 16, 32, 64};
  std::vector<double> half, one;
  for (double x : n) {
    half.push_back(3.0 * std::pow(x, -0.5));
    one.push_back(0.2 / x);
  }
  CHECK(estimate_decay_slope(n, half) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(estimate_decay_slope(n, one) == doctest::Approx(-1.0).epsilon(1e-10));

  std::vector<double> gaps = one;
  gaps[1] = 0.0;
  gaps[4] = -1.0;
  CHECK(estimate_decay_slope(n, gaps) == doctest::Approx(-1.0).epsilon(1e-10));
  gaps[2] = 0.0;
  CHECK_THROWS_AS(estimate_decay_slope(n, gaps), InsufficientDataError);
  const std::vector<double> short_n{1, 2, 3};
  CHECK_THROWS_AS(estimate_decay_slope(short_n, std::vector<double>{1, 0.5, 0.3}), InsufficientDataError);
}

TEST_CASE("raw sample CSV") {
  const Vec k{1.0, 0.0, 0.0};
  const Vec l{0.0, 1.0, 0.0};
  const auto set = synthetic(k, l, 2, {0.1, 0.2}, {2, 3, 5}, 0.25, 2.0);
  const auto records = to_records(set);
  REQUIRE(records.size() == 6);

  std::ostringstream out;
  write_ray_samples_csv(out, records);
  CHECK(out.str().rfind("s,a_value,offset_index\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_ray_samples_csv(in);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].s == records[i].s);
    CHECK(back[i].a_value == records[i].a_value);
    CHECK(back[i].offset_index == records[i].offset_index);
  }

  const auto rebuilt = samples_from_records(k, l, back);
  CHECK(rebuilt.n_list == set.n_list);
  CHECK(rebuilt.s1 == doctest::Approx(set.s1).epsilon(1e-12));
  CHECK(rebuilt.s2 == doctest::Approx(set.s2).epsilon(1e-12));
  const auto c = farfield_constant(2, 1.0);
  CHECK(std::abs(recover_f_sequence(rebuilt, c).final_estimate - Complex{0.1, 0.2}) < 1e-12);

  std::istringstream bad_header("s,a,offset\n1,2,1\n");
  CHECK_THROWS_AS(read_ray_samples_csv(bad_header), ValidationError);
  std::istringstream bad_index("s,a_value,offset_index\n1,2,3\n");
  CHECK_THROWS_AS(read_ray_samples_csv(bad_index), ValidationError);

  auto missing = back;
  missing.pop_back();
  CHECK_THROWS_AS(samples_from_records(k, l, missing), ValidationError);
}

TEST_CASE("recovery from solver samples") {
  SUBCASE("v = 0 gives zero at every n") {
    const auto zero = solve_psi_on_support(discretize(Potential::zero(2, 1.0), 8),
                                           PlaneWaveContext::from_wave_vector(2, {1.0, 0.0, 0.0}));
    const auto result = recover_f_sequence(zero, {0.0, 1.0, 0.0}, {1, 2, 4});
    for (const auto& f : result.per_n_estimates) CHECK(std::abs(f) < 1e-15);
  }
  SUBCASE("samples inside 2r are rejected") {
    CHECK_THROWS_AS(sample_ray(fixtures::disc_2d(), {0.0, 1.0, 0.0}, {0, 1}), ValidationError);
    const auto small_T = sample_ray(fixtures::disc_2d(), {0.0, 1.0, 0.0}, {1, 2});
    CHECK(small_T.radius(1, 1) > 2.0);
  }
  SUBCASE("2D disc converges at the expected rate") {
    const auto& disc = fixtures::disc_2d();
    const Vec l{0.0, 1.0, 0.0};
    const auto reference = scattering_amplitude(disc, l).f;
    const std::vector<int> n_list{2, 4, 8, 16, 32, 64};
    const auto result = recover_f_sequence(disc, l, n_list, std::nullopt, reference);
    std::vector<double> n, errors;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      n.push_back(n_list[i]);
      errors.push_back(std::abs(result.per_n_estimates[i] - reference));
    }
    const double slope = estimate_decay_slope(n, errors);
    CHECK(slope >= -0.9);
    CHECK(slope <= -0.25);
    CHECK(errors.back() < 0.05 * std::abs(reference));
    CHECK(result.delta_a_diagnostic.size() == 2 * n_list.size());
    CHECK(result.residual_trace.back() == 0.0);

    std::vector<double> scaled;
    for (std::size_t i = 0; i < n.size(); ++i) scaled.push_back(errors[i] * std::sqrt(n[i]));
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 6.0);
  }
  SUBCASE("3D ball on a coarse grid") {
    const auto& ball = fixtures::ball_3d();
    const Vec l{0.0, 1.0, 0.0};
    const auto reference = scattering_amplitude(ball, l).f;
    const std::vector<int> n_list{2, 4, 8, 16, 32};
    const auto result = recover_f_sequence(ball, l, n_list, std::nullopt, reference);
    std::vector<double> n, errors;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      n.push_back(n_list[i]);
      errors.push_back(std::abs(result.per_n_estimates[i] - reference));
    }
    const double slope = estimate_decay_slope(n, errors);
    CHECK(slope >= -1.4);
    CHECK(slope <= -0.6);
  }
}
