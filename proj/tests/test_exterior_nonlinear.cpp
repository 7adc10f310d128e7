#include <cmath>

#include "channelwave/exterior_nonlinear.hpp"
#include "doctest.h"

using namespace channelwave;

namespace {

InitialDataPair bump(double amplitude, double center = 1.0, double width = 1.0, double kappa = 0.0) {
  InitialDataPair p;
  p.d = 3;
  const double h = 1.0 / 64;
  p.rgrid = {h, h, static_cast<std::size_t>((center + width) / h) + 4};
  p.u0.assign(p.rgrid.length, 0.0);
  p.u1.assign(p.rgrid.length, 0.0);
  for (std::size_t i = 0; i < p.rgrid.length; ++i) {
    const double r = p.rgrid.position(i);
    if (r <= center || r >= center + width) continue;
    const double s = std::sin(kPi * (r - center) / width);
    p.u1[i] = amplitude * s * s;
    p.u0[i] = amplitude * kappa * s * s * s * s;
  }
  return p;
}

ExteriorProblem problem(const InitialDataPair& data, int sign = -1) { return {LinearEvolution(data), 0.0, sign, 1.0, 1.0}; }

double unit_free_norm() {
  PicardOptions probe;
  probe.max_iter = 1;
  return picard_solve(problem(bump(1.0)), probe).trace.free_y_norm;
}

}  // namespace

TEST_SUITE("exterior_nonlinear") {
  TEST_CASE("d'Alembert evolution matches the profile evaluator") {
    const auto g = SampledProfile::sample(
        [](double s) { return std::abs(s - 0.5) < 1.0 ? std::pow(std::cos(0.5 * kPi * (s - 0.5)), 2) * std::cos(2.0 * s) : 0.0; },
        {1.0 / 128, -3.0, 769});
    const RadialFreeWave w(g, 3);
    const LinearEvolution L(initial_data(w, {1.0 / 128, 1.0 / 128, 600}));
    for (double r : {0.6, 1.3, 2.2}) {
      for (double t : {-0.4, 0.0, 0.5}) CHECK(L(r, t) == doctest::Approx(w.value(r, t)).epsilon(1e-4).scale(1.0));
    }
    CHECK_THROWS_AS(LinearEvolution(initial_data(RadialFreeWave(g, 5), {0.1, 0.1, 10})), Error);
  }

  TEST_CASE("zero data converges to zero at once") {
    const auto res = picard_solve(problem(bump(0.0)));
    CHECK(res.trace.converged);
    CHECK(res.trace.iterations == 1);
    for (double v : res.solution.values()) CHECK(v == 0.0);
  }

  TEST_CASE("tiny data contracts fast") {
    const double amp = 1e-2 / unit_free_norm();
    const auto res = picard_solve(problem(bump(amp)));
    CHECK(res.trace.free_y_norm == doctest::Approx(1e-2).epsilon(1e-9));
    CHECK(res.trace.converged);
    for (double c : res.trace.contraction) CHECK(c < 0.5);
    for (double b : res.trace.nonlinear_bound) CHECK(b <= 1.0);
  }

  TEST_CASE("nonlinear bound holds on every iterate near the threshold") {
    const double amp = 0.9 * default_delta(3) / unit_free_norm();
    PicardOptions opt;
    opt.delta = default_delta(3);
    const auto res = picard_solve(problem(bump(amp)), opt);
    CHECK(res.trace.converged);
    CHECK(res.trace.iterations <= 12);
    for (double b : res.trace.nonlinear_bound) CHECK(b <= 1.0);
  }

  TEST_CASE("smallness threshold is enforced") {
    PicardOptions opt;
    opt.delta = 0.5;
    const double amp = 1.0 / unit_free_norm();
    try {
      picard_solve(problem(bump(amp)), opt);
      FAIL("expected NotSmallData");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotSmallData);
    }
  }

  TEST_CASE("Lipschitz ratios") {
    const double unit = 1.0 / unit_free_norm();
    const auto a = problem(bump(2.0 * unit, 1.0, 1.0, 0.2));
    CHECK(lipschitz_check(a, problem(bump(0.0))) <= 2.2);

    const double full = lipschitz_check(a, problem(bump(1.8 * unit, 1.0, 1.0, 0.2)));
    const double half = lipschitz_check(a, problem(bump(1.9 * unit, 1.0, 1.0, 0.2)));
    CHECK(full <= 2.2);
    CHECK(half == doctest::Approx(full).epsilon(0.10));

    const auto focusing = problem(bump(2.0 * unit, 1.0, 1.0, 0.2), 1);
    CHECK(lipschitz_check(focusing, problem(bump(1.8 * unit, 1.0, 1.0, 0.2), 1)) <= 2.2);
    CHECK_THROWS_AS(lipschitz_check(a, a), Error);
  }

  TEST_CASE("radius for global smallness") {
    CHECK(radius_for_global(LinearEvolution(bump(0.0)), 0.1) == 0.0);
    InitialDataPair p = bump(1.0);
    double energy = 0.0;
    for (std::size_t i = 0; i < p.rgrid.length; ++i) {
      const double r = p.rgrid.position(i);
      energy += 0.5 * p.u1[i] * p.u1[i] * 4.0 * kPi * r * r * p.rgrid.spacing;
    }
    for (auto& v : p.u1) v /= std::sqrt(energy);
    const LinearEvolution L(p);
    double last = kInf;
    for (double target : {0.05, 0.1, 0.2, 0.4}) {
      const double R = radius_for_global(L, target);
      CHECK(R <= last);
      last = R;
    }
    CHECK(radius_for_global(L, 0.1) == 2.0);
    CHECK(radius_for_global(L, 0.2) == 1.0);
  }

  TEST_CASE("exterior solution vanishes inside the cone") {
    const auto res = picard_solve(problem(bump(0.1)));
    CHECK(res.solution(0.5, 0.7) == 0.0);
    CHECK(res.solution(2.0, 1.5) == 0.0);
    CHECK(res.solution(1.5, 0.2) != 0.0);
  }
}
