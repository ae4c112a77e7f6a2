#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "phaserec/error.hpp"
#include "phaserec/far_field.hpp"
#include "phaserec/resolvent.hpp"

using namespace phaserec;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

std::shared_ptr<const NystromOperator> disc_operator(int cells, double amplitude = 0.5) {
  const auto disc = make_potential(2, PotentialKind::disc_constant, {amplitude, 1.0}, 1.0);
  return std::make_shared<const NystromOperator>(
      std::make_shared<const GridDiscretization>(discretize(disc, cells)), 1.0);
}
}  // namespace

TEST_CASE("free resolvent") {
  const auto grid = discretize(Potential::zero(3, 1.0), 6);
  const auto field = solve_resolvent_field(grid, {2.0, 0.0, 0.0}, 1.0);
  const Vec x{2.0, 1.0, 0.0};
  const double r = distance(x, field.source);
  const Complex expected = std::exp(kI * r) / (4.0 * kPi * r);
  CHECK(std::abs(evaluate_resolvent(field, x) - expected) < 1e-15);
  CHECK(std::abs(evaluate_resolvent(field, x) - Complex{0.0429956, 0.0669620}) < 1e-6);
  CHECK(std::abs(evaluate_resolvent(field, x) - Complex{0.043006, 0.066968}) < 2e-5);
  CHECK_THROWS_AS(evaluate_resolvent(field, field.source), DomainError);

  const auto grid2 = discretize(Potential::zero(2, 1.0), 8);
  const auto field2 = solve_resolvent_field(grid2, {0.0, 3.0, 0.0}, 4.0);
  const Vec y{1.0, -1.0, 0.0};
  CHECK(std::abs(evaluate_resolvent(field2, y) + green_free(2, distance(y, field2.source), 2.0)) < 1e-15);
}

TEST_CASE("resolvent scattered part is linear in a weak potential") {
  const Vec source{0.0, 3.0, 0.0};
  const Vec x{2.5, -1.0, 0.0};
  auto scattered = [&](double eps) {
    const auto field = solve_resolvent_field(disc_operator(16, eps), source);
    return evaluate_resolvent(field, x) + green_free(2, distance(x, source), 1.0);
  };
  const double ratio = std::abs(scattered(2e-3)) / std::abs(scattered(1e-3));
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("reciprocity") {
  const Vec x{2.0, 0.5, 0.0};
  const Vec y{-1.0, 3.0, 0.0};
  const auto free = discretize(Potential::zero(2, 1.0), 8);
  CHECK(reciprocity_defect(free, x, y, 1.0) < 1e-12);
  CHECK(reciprocity_defect(disc_operator(32), x, y) < 1e-6);
  CHECK(reciprocity_defect(disc_operator(16), {3.0, 0.0, 0.0}, {0.0, -2.0, 0.0}) < 1e-6);

  CHECK_THROWS_AS(reciprocity_defect(disc_operator(8), {0.5, 0.0, 0.0}, y), GeometryError);
  CHECK_THROWS_AS(reciprocity_defect(disc_operator(8), y, y), DomainError);
}

TEST_CASE("source on a cell center is shifted") {
  const auto op = disc_operator(8);
  const Vec center = op->grid().cell_centers.front();
  const auto field = solve_resolvent_field(op, center);
  CHECK(field.source_shifted);
  CHECK(distance(field.source, center) > 0.0);
  const auto clean = solve_resolvent_field(op, {0.013, 0.021, 0.0});
  CHECK_FALSE(clean.source_shifted);
}

TEST_CASE("resolvent reduction, free space 3D") {
  const auto grid = discretize(Potential::zero(3, 1.0), 4);
  const Vec k{1.0, 0.0, 0.0};
  const Vec source{1.2, -0.5, 0.6};
  const auto field = solve_resolvent_field(grid, source, 1.0);
  const std::vector<double> radii{50.0, 100.0, 200.0};
  const auto samples = sample_backward_ray(field, k, radii);
  const auto reduction = psi_sq_from_resolvent(3, samples, k, source, 1.0);
  REQUIRE(reduction.scaled.size() == 3);
  const double e50 = std::abs(reduction.scaled[0] - 1.0);
  const double e100 = std::abs(reduction.scaled[1] - 1.0);
  const double e200 = std::abs(reduction.scaled[2] - 1.0);
  CHECK(e200 < 0.02);
  CHECK(e50 / e100 >= 1.6);
  CHECK(e50 / e100 <= 2.4);
  CHECK(e100 / e200 >= 1.6);
  CHECK(e100 / e200 <= 2.4);
  CHECK(reduction.s == 200.0);
  CHECK(reduction.psi_sq == reduction.scaled[2]);
  CHECK(reduction.defect == doctest::Approx(std::abs(reduction.scaled[2] - reduction.scaled[1])));

  const auto printed = psi_sq_from_resolvent(3, samples, k, source, 1.0, ReductionScaling::as_printed);
  CHECK(printed.scaled[0] / printed.scaled[2] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::abs(printed.psi_sq - 1.0) > 0.9);
}

TEST_CASE("resolvent reduction recovers |psi+|^2 next to a 2D disc") {
  const auto& solution = fixtures::disc_2d();
  const Vec k = solution.context.k;
  const Vec source{1.5, 0.5, 0.0};
  const auto field = solve_resolvent_field(solution.op, source);
  const std::vector<double> radii{250.0, 500.0, 1000.0};
  const auto reduction = psi_sq_from_resolvent(2, sample_backward_ray(field, k, radii), k, source, 1.0);
  const double reference = std::norm(evaluate_psi(solution, field.source));
  CHECK(std::abs(reduction.psi_sq - reference) < 0.05 * reference);
  CHECK(std::abs(reduction.scaled[2] - reference) < std::abs(reduction.scaled[0] - reference) + 1e-3 * reference);
}

TEST_CASE("far-field link of R+ settles as s grows") {
  const auto& solution = fixtures::disc_2d();
  const Vec source{-0.2, 0.4, 0.0};
  const auto field = solve_resolvent_field(solution.op, source);
  const Vec direction{-1.0, 0.0, 0.0};
  const auto c = farfield_constant(2, 1.0);
  auto link = [&](double s) {
    const Complex R = evaluate_resolvent(field, s * direction);
    return R * std::sqrt(s) * std::exp(-kI * s) * std::pow(2.0 * kPi, 2) / c.c;
  };
  const Complex a = link(100.0);
  const Complex b = link(200.0);
  const Complex d = link(400.0);
  const double rate = std::abs(b - a) / std::abs(d - b);
  CHECK(rate > 1.5);
  CHECK(rate < 3.0);
  CHECK(std::abs(std::abs(d) - std::abs(evaluate_psi(solution, field.source))) <
        0.05 * std::abs(evaluate_psi(solution, field.source)));
}

TEST_CASE("reduction input validation") {
  const std::vector<RadialSample> one{{10.0, 1.0}};
  const Vec k{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(psi_sq_from_resolvent(2, one, k, {0.0, 0.0, 0.0}, 1.0), ValidationError);
  const std::vector<RadialSample> close{{1.5, 1.0}, {10.0, 1.0}};
  CHECK_THROWS_AS(psi_sq_from_resolvent(2, close, k, {0.0, 0.0, 0.0}, 1.0), GeometryError);
}
