#include <cmath>

#include "channelwave/fd_oracle.hpp"
#include "channelwave/propagator.hpp"
#include "doctest.h"

using namespace channelwave;

namespace {

double bump(double r) { return r > 1.5 && r < 3.5 ? std::pow(std::sin(0.5 * kPi * (r - 1.5)), 4) : 0.0; }

// r u(r, t) = (1/2) [(r+t) f(r+t) + (r-t) f(|r-t|)] for u0 = f, u1 = 0 in d = 3
double dalembert(double r, double t) {
  const double p = r + t, q = r - t;
  return 0.5 * (p * bump(std::abs(p)) + q * bump(std::abs(q))) / r;
}

double d3_error(int nr, double T) {
  FdGrid g{6.0, nr, 3.0 / nr, 0, 3};
  g.nt = static_cast<int>(std::lround(T / g.dt));
  const auto sol = fd_solve(bump, [](double) { return 0.0; }, nullptr, g, g.nt);
  return relative_l2_error(sol.field, 1, dalembert, 3);
}

}  // namespace

TEST_SUITE("fd_oracle") {
  TEST_CASE("zero data stays zero") {
    const FdGrid g{4.0, 64, 4.0 / 128, 40, 5};
    const auto sol = fd_solve([](double) { return 0.0; }, [](double) { return 0.0; }, nullptr, g, 1);
    for (int n = 0; n <= sol.field.nt(); ++n) {
      for (double v : sol.field.row(n)) CHECK(v == 0.0);
    }
  }

  TEST_CASE("d = 3 against d'Alembert") {
    CHECK(d3_error(512, 1.5) <= 1e-3);
    const auto conv = convergence_order([](int level) { return d3_error(64 << level, 1.5); }, 4);
    CHECK_FALSE(conv.flagged);
    CHECK(conv.order >= 1.8);
    CHECK(conv.order <= 2.2);
  }

  TEST_CASE("discrete energy is conserved") {
    FdGrid g{6.0, 256, 3.0 / 256, 300, 5};
    const auto sol = fd_solve(bump, [](double r) { return std::cos(r) * bump(r); }, nullptr, g, 50);
    for (double e : sol.energy) CHECK(e == doctest::Approx(sol.energy.front()).epsilon(1e-12));
  }

  TEST_CASE("non-monotone errors are flagged") {
    const double errs[] = {0.1, 0.2, 0.05};
    const auto res = convergence_order(std::span<const double>(errs));
    CHECK(res.flagged);
    CHECK(std::isnan(res.order));
    const double single[] = {0.1};
    CHECK(convergence_order(std::span<const double>(single)).flagged);
  }

  TEST_CASE("inhomogeneous d = 5 converges") {
    const int d = 5;
    const double T = 1.0;
    const ForcingGrid fg{0.0, 1.0 / 256, 6 * 256 + 1, 0.0, 1.0 / 1024, 1025};
    const auto F = ForcingField::sample([](double r, double t) { return bump(r) * std::sin(3.0 * t); }, fg, d);
    const DuhamelOperator D(F, d);
    auto error = [&](int level) {
      const int nr = 64 << level;
      FdGrid g{6.0, nr, 3.0 / nr, 0, d};
      g.nt = static_cast<int>(std::lround(T / g.dt));
      const auto sol = fd_solve([](double) { return 0.0; }, [](double) { return 0.0; }, &F, g, g.nt);
      return relative_l2_error(sol.field, 1, [&](double r, double t) { return D(r, t); }, d);
    };
    const auto conv = convergence_order(error, 3);
    CHECK_FALSE(conv.flagged);
    CHECK(conv.order >= 1.6);
    CHECK(conv.order <= 2.2);
  }

  TEST_CASE("grid validation") {
    CHECK_THROWS_AS(validate_grid({6.0, 32, 0.01, 10, 3}), Error);
    CHECK_THROWS_AS(validate_grid({6.0, 128, 0.1, 10, 3}), Error);
    CHECK_THROWS_AS(validate_grid({6.0, 128, 0.01, 10, 4}), Error);
    CHECK_NOTHROW(validate_grid({6.0, 128, 6.0 / 256, 10, 3}));
  }
}
