#include <cmath>
#include <random>

#include "channelwave/fd_oracle.hpp"
#include "channelwave/propagator.hpp"
#include "doctest.h"

using namespace channelwave;

namespace {

double sin2(double x) { return std::sin(x) * std::sin(x); }

SampledProfile radial_bump(double a, double b, double h, double rmax) {
  return SampledProfile::sample([&](double r) { return r > a && r < b ? std::pow(std::sin(kPi * (r - a) / (b - a)), 4) : 0.0; },
                                {h, 0.0, static_cast<std::size_t>(rmax / h) + 1});
}

}  // namespace

TEST_SUITE("inhomogeneous_propagator") {
  TEST_CASE("kernel shapes") {
    const auto k3 = build_kernel(3);
    CHECK(k3.exponent == 0);
    CHECK(k3.am.size() == 1);
    CHECK(k3.product(0.4, 0.3, 1.1) == 1.0);
    const auto k5 = build_kernel(5);
    CHECK(k5.am.size() == 2);
    CHECK_THROWS_AS(build_kernel(11), Error);
    CHECK_THROWS_AS(build_kernel(4), Error);
  }

  TEST_CASE("kernel symmetry and expansion") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.1, 3.0);
    for (int d : {5, 7, 9}) {
      const auto& k = kernel_for(d);
      for (int i = 0; i < 20; ++i) {
        const double rho = U(rng), t = U(rng), r = U(rng);
        CHECK(k.product(rho, t, r) == doctest::Approx(k.product(r, t, rho)).epsilon(1e-12));
        CHECK(k.expanded(rho, t, r) == doctest::Approx(k.product(rho, t, r)).epsilon(1e-9).scale(1.0));
      }
    }
  }

  TEST_CASE("d = 3 closed form") {
    const double h = 1.0 / 4096;
    const auto u1 = SampledProfile::sample([](double s) { return s > 1.0 && s < 2.0 ? sin2(kPi * (s - 1.0)) / s : 0.0; },
                                           {h, 0.0, 3 * 4096 + 1});
    const auto F = [](double x) {
      x = std::clamp(x, 1.0, 2.0);
      return 0.5 * (x - 1.0) - std::sin(2.0 * kPi * (x - 1.0)) / (4.0 * kPi);
    };
    for (double r : {0.5, 1.3, 2.2}) {
      for (double t : {0.2, 0.9, 1.7}) {
        const double exact = (F(r + t) - F(std::abs(r - t))) / (2.0 * r);
        CHECK(half_wave(u1, 3, r, t) == doctest::Approx(exact).epsilon(1e-6).scale(1.0));
      }
    }
  }

  TEST_CASE("t = 0 and odd symmetry in t") {
    const auto u1 = radial_bump(1.0, 2.0, 1.0 / 128, 3.0);
    for (int d : {3, 5, 7}) {
      CHECK(half_wave(u1, d, 1.5, 0.0) == 0.0);
      for (double t : {0.3, 1.1}) CHECK(half_wave(u1, d, 1.4, -t) == doctest::Approx(-half_wave(u1, d, 1.4, t)));
    }
  }

  TEST_CASE("half wave small-time limit") {
    const auto u1 = radial_bump(1.0, 3.0, 1.0 / 256, 4.0);
    for (int d : {3, 5, 7, 9}) CHECK(half_wave(u1, d, 2.0, 1e-4) / 1e-4 == doctest::Approx(u1(2.0)).epsilon(1e-5));
  }

  TEST_CASE("HalfWave matches half_wave") {
    const auto u1 = radial_bump(0.5, 1.5, 1.0 / 128, 2.0);
    for (int d : {3, 5}) {
      const HalfWave S(u1, d);
      for (double r : {0.2, 0.9, 2.1}) CHECK(S(r, 0.7) == doctest::Approx(half_wave(u1, d, r, 0.7)).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("d = 5 half wave against the finite-difference oracle") {
    const int d = 5;
    const auto u1 = radial_bump(1.5, 3.5, 1.0 / 256, 6.0);
    const double T = 1.5;
    FdGrid g{6.0, 512, 6.0 / 1024, 0, d};
    g.nt = static_cast<int>(std::lround(T / g.dt));
    const auto sol = fd_solve([](double) { return 0.0; }, [&](double r) { return u1(r); }, nullptr, g, g.nt);
    const HalfWave S(u1, d);
    CHECK(relative_l2_error(sol.field, 1, [&](double r, double t) { return S(r, t); }, d) <= 1e-3);
  }

  TEST_CASE("Duhamel of zero forcing") {
    const ForcingGrid g{0.0, 0.1, 30, 0.0, 0.1, 20};
    const ForcingField F(g, std::vector<double>(600, 0.0), 3);
    CHECK(F.is_zero());
    CHECK(duhamel(F, 3, 1.0, 1.5) == 0.0);
  }

  TEST_CASE("separable forcing is a superposition of half waves") {
    const double h = 1.0 / 64;
    const auto b = radial_bump(1.0, 2.0, h, 3.0);
    const ForcingGrid g{0.0, h, b.size(), 0.0, 1.0 / 32, 49};
    auto a = [](double tau) { return std::cos(2.0 * tau) + 0.5; };
    std::vector<double> samples(g.nr * g.nt);
    for (std::size_t j = 0; j < g.nt; ++j) {
      for (std::size_t i = 0; i < g.nr; ++i) samples[j * g.nr + i] = a(g.t(j)) * b.samples()[i];
    }
    const ForcingField F(g, samples, 3);
    const DuhamelOperator D(F, 3);
    const std::size_t n = 40;
    const double t = g.t(n);
    for (double r : {0.7, 1.5, 2.6}) {
      double expected = 0.0;
      for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        expected += w * g.t_spacing * a(g.t(j)) * half_wave(b, 3, r, t - g.t(j));
      }
      CHECK(D(r, t) == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
    }
  }

  TEST_CASE("Duhamel against the finite-difference oracle, d = 3") {
    const int d = 3;
    const double T = 1.5;
    const ForcingGrid g{0.0, 1.0 / 256, 6 * 256 + 1, 0.0, 1.0 / 512, 769};
    const auto F = ForcingField::sample(
        [](double r, double t) { return r > 1.0 && r < 3.0 ? std::pow(std::sin(0.5 * kPi * (r - 1.0)), 4) * std::sin(2.0 * t) : 0.0; },
        g, d);
    FdGrid fg{6.0, 512, 6.0 / 1024, 0, d};
    fg.nt = static_cast<int>(std::lround(T / fg.dt));
    const auto sol = fd_solve([](double) { return 0.0; }, [](double) { return 0.0; }, &F, fg, fg.nt);
    const DuhamelOperator D(F, d);
    CHECK(relative_l2_error(sol.field, 1, [&](double r, double t) { return D(r, t); }, d) <= 3e-3);
  }

  TEST_CASE("forcing outside its channel is rejected") {
    const ForcingGrid g{0.0, 0.05, 80, -1.0, 0.05, 41};
    std::vector<double> s(g.nr * g.nt, 0.0);
    s[20 * g.nr + 5] = 1.0;  // r = 0.25, t = 0: inside |t| + 1 <= r fails
    CHECK_THROWS_AS(ForcingField(g, s, 3, 0), Error);
    CHECK_NOTHROW(ForcingField(g, s, 3));
  }

  TEST_CASE("pointwise bound on shells") {
    const double h = 1.0 / 128;
    CHECK(pointwise_bound_ratio(SampledProfile::zero({h, 0.9, 140}), 1.0, 2.0, 3, 2.0, {}) == 0.0);
    auto shell = [&](double a, double b, double hh) {
      return SampledProfile::sample([&](double r) { return r > a && r < b ? sin2(kPi * (r - a) / (b - a)) * (1.0 + 0.3 * r) : 0.0; },
                                    {hh, a - hh, static_cast<std::size_t>((b - a) / hh) + 3});
    };
    auto samples = [](double scale, int n) {
      std::vector<std::pair<double, double>> pts;
      for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= n; ++k) {
          const double t = 4.0 * scale * i / n;
          pts.emplace_back(t + 4.0 * scale * k / n, t);
        }
      }
      return pts;
    };
    const auto u1 = shell(1.0, 2.0, h);
    const double coarse = pointwise_bound_ratio(u1, 1.0, 2.0, 3, 2.0, samples(1.0, 32));
    const double fine = pointwise_bound_ratio(u1, 1.0, 2.0, 3, 2.0, samples(1.0, 64));
    CHECK(std::isfinite(coarse));
    CHECK(fine == doctest::Approx(coarse).epsilon(0.10));

    const auto u2 = u1.dilated(2.0);
    for (int d : {3, 5}) {
      CHECK(pointwise_bound_ratio(u2, 2.0, 4.0, d, 2.0, samples(2.0, 32)) ==
            doctest::Approx(pointwise_bound_ratio(u1, 1.0, 2.0, d, 2.0, samples(1.0, 32))).epsilon(1e-2));
    }
    CHECK_THROWS_AS(pointwise_bound_ratio(u1, 1.0, 2.5, 3, 2.0, samples(1.0, 4)), Error);
  }

  TEST_CASE("radial L^q norm of a constant ball") {
    const auto f = SampledProfile::sample([](double r) { return r < 1.0 ? 1.0 : 0.0; }, {1.0 / 4096, 0.0, 8193});
    // unit ball volume in R^3, up to the ramp of the interpolant
    CHECK(std::pow(radial_lq_norm(f, 3, 2.0), 2) == doctest::Approx(4.0 * kPi / 3.0).epsilon(2e-3));
  }
}
