#include <cmath>

#include "channelwave/radial_wavefield.hpp"
#include "doctest.h"

using namespace channelwave;

namespace {

SampledProfile gaussian_profile(double h) {
  return SampledProfile::sample([](double s) { return std::exp(-s * s) * std::cos(5.0 * s + 0.3); },
                                {h, -4.0, static_cast<std::size_t>(8.0 / h) + 1});
}

SampledProfile smooth_bump(double a, double b, double h) {
  return SampledProfile::sample(
      [&](double s) { return s > a && s < b ? std::pow(std::sin(kPi * (s - a) / (b - a)), 4) : 0.0; },
      {h, a - 1.0, static_cast<std::size_t>((b - a + 2.0) / h) + 1});
}

}  // namespace

TEST_SUITE("radial_wavefield") {
  TEST_CASE("Legendre coefficients") {
    CHECK(legendre_poly(3).degree() == 0);
    CHECK(legendre_poly(3)(0.37) == 1.0);
    const auto p5 = legendre_poly(5);
    CHECK(p5.coeffs()[0] == 0.0);
    CHECK(p5.coeffs()[1] == 1.0);
    const auto p7 = legendre_poly(7);
    CHECK(p7.coeffs()[0] == doctest::Approx(-0.5));
    CHECK(p7.coeffs()[1] == 0.0);
    CHECK(p7.coeffs()[2] == doctest::Approx(1.5));
    for (int d = 3; d <= 13; d += 2) CHECK(legendre_poly(d)(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(legendre_poly(4), Error);
    CHECK_THROWS_AS(legendre_poly(15), Error);
  }

  TEST_CASE("zero profile gives the zero wave") {
    const RadialFreeWave w(SampledProfile::zero({0.1, -2.0, 41}), 5);
    CHECK(w.value(1.0, 0.5) == 0.0);
    CHECK(w.time_derivative(1.0, 0.5) == 0.0);
    const auto data = initial_data(w, {0.05, 0.05, 40});
    for (double v : data.u0) CHECK(v == 0.0);
    CHECK(radial_sobolev_norm(data, 1.0) == 0.0);
    CHECK(radiation_limit_defect(w, 10.0) == 0.0);
  }

  TEST_CASE("indicator profile, d = 3") {
    const double h = 1.0 / 1024;
    const auto g = SampledProfile::sample([](double s) { return std::abs(s) <= 1.0 ? 1.0 : 0.0; },
                                          {h, -2.0, 4097});
    // the interpolant adds a ramp of width h on each side
    CHECK(evaluate_free_wave(RadialFreeWave(g, 3), 2.0, 0.0) == doctest::Approx(1.0 + 0.5 * h).epsilon(1e-12));
  }

  TEST_CASE("analytic time derivative matches a centered difference") {
    for (int d : {3, 5, 7}) {
      const RadialFreeWave w(remove_low_moments(gaussian_profile(1.0 / 128), d), d);
      for (double r : {0.3, 1.1, 2.5}) {
        for (double t : {-0.7, 0.0, 0.4}) {
          const double e = 1e-6;
          const double fd = (w.value(r, t + e) - w.value(r, t - e)) / (2 * e);
          CHECK(w.time_derivative(r, t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("d = 3 initial velocity is (G(r) - G(-r)) / r") {
    const auto g = gaussian_profile(1.0 / 256);
    const RadialFreeWave w(g, 3);
    const auto data = initial_data(w, {0.01, 0.01, 300});
    for (std::size_t i = 0; i < data.rgrid.length; i += 17) {
      const double r = data.rgrid.position(i);
      CHECK(data.u1[i] == doctest::Approx((g(r) - g(-r)) / r).epsilon(1e-9));
    }
  }

  TEST_CASE("odd profile in d = 3 has no data beyond its support") {
    const auto g = SampledProfile::sample(
        [](double s) { return std::abs(s) < 1.0 ? s * std::pow(std::cos(0.5 * kPi * s), 2) : 0.0; },
        {1.0 / 64, -2.0, 257});
    const RadialFreeWave w(g, 3);
    for (double r : {1.2, 1.5, 1.9}) {
      CHECK(w.value(r, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
      CHECK(w.time_derivative(r, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
  }

  TEST_CASE("gradient norm cross-check, beta = 1, d = 3") {
    const RadialGrid grid{1.0 / 256, 1.0 / 256, 1200};
    std::vector<double> f(grid.length);
    double direct = 0.0;
    for (std::size_t i = 0; i < grid.length; ++i) {
      const double r = grid.position(i);
      f[i] = r > 1.0 && r < 3.0 ? std::pow(std::sin(0.5 * kPi * (r - 1.0)), 4) : 0.0;
      if (r > 1.0 && r < 3.0) {
        const double s = std::sin(0.5 * kPi * (r - 1.0));
        const double df = 4.0 * s * s * s * std::cos(0.5 * kPi * (r - 1.0)) * 0.5 * kPi;
        direct += df * df * r * r * grid.spacing;
      }
    }
    direct *= sphere_area(2);
    CHECK(std::pow(radial_homogeneous_norm(f, grid, 3, 1.0), 2) == doctest::Approx(direct).epsilon(1e-3));
  }

  TEST_CASE("homogeneous norm is scale invariant") {
    const double beta = 1.2;
    const int d = 3;
    const RadialGrid grid{1.0 / 128, 1.0 / 128, 500};
    InitialDataPair a{{}, {}, d, grid};
    for (std::size_t i = 0; i < grid.length; ++i) {
      const double r = grid.position(i);
      const double s = r > 1.0 && r < 3.0 ? std::pow(std::sin(0.5 * kPi * (r - 1.0)), 4) : 0.0;
      a.u0.push_back(s);
      a.u1.push_back(s * std::cos(3.0 * r));
    }
    InitialDataPair b = a;
    b.rgrid = {2.0 * grid.spacing, 2.0 * grid.origin, grid.length};
    for (auto& v : b.u0) v *= std::pow(2.0, -0.5 * d + beta);
    for (auto& v : b.u1) v *= std::pow(2.0, -0.5 * d - 1.0 + beta);
    CHECK(radial_sobolev_norm(b, beta) == doctest::Approx(radial_sobolev_norm(a, beta)).epsilon(1e-6));
  }

  TEST_CASE("isometry defect") {
    const RadialFreeWave w3(remove_low_moments(gaussian_profile(1.0 / 128), 3), 3);
    CHECK(isometry_defect(w3, 1.0) <= 1e-2);
    const RadialFreeWave w5(remove_low_moments(gaussian_profile(1.0 / 128), 5), 5);
    CHECK(isometry_defect(w5, 0.75) <= 2e-2);

    const auto g = SampledProfile::sample([](double s) { return std::exp(-s * s) * std::cos(5.0 * s + 0.3); },
                                          {1.0 / 32, -4.0, 257});
    const double coarse = isometry_defect(RadialFreeWave(remove_low_moments(g, 3), 3), 1.0);
    const double fine = isometry_defect(RadialFreeWave(remove_low_moments(gaussian_profile(1.0 / 64), 3), 3), 1.0);
    CHECK(fine < coarse);
  }

  TEST_CASE("radiation field") {
    const auto g = smooth_bump(-0.5, 1.0, 1.0 / 128);
    const RadialFreeWave w3(g, 3);
    for (double T : {4.0, 8.0, 16.0}) CHECK(radiation_limit_defect(w3, T) <= 1e-12);
    const RadialFreeWave w5(remove_low_moments(g, 5), 5);
    const double a = radiation_limit_defect(w5, 4.0);
    const double b = radiation_limit_defect(w5, 8.0);
    const double c = radiation_limit_defect(w5, 16.0);
    CHECK(b < a);
    CHECK(c < b);
    CHECK(16.0 * c == doctest::Approx(4.0 * a).epsilon(0.1));
    CHECK_THROWS_AS(radiation_limit_defect(w5, 0.5), Error);
  }

  TEST_CASE("low moments removed") {
    const auto g = remove_low_moments(gaussian_profile(1.0 / 64), 7);
    for (int m = 0; m <= 2; ++m) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += std::pow(g.position(i), m) * g.samples()[i] * g.spacing();
      CHECK(std::abs(acc) <= 1e-12);
    }
  }

  TEST_CASE("spherical Bessel closed forms") {
    for (double x : {0.01, 0.7, 3.0, 25.0}) {
      CHECK(spherical_bessel(0, x) == doctest::Approx(std::sin(x) / x).epsilon(1e-12));
      CHECK(spherical_bessel(1, x) == doctest::Approx(std::sin(x) / (x * x) - std::cos(x) / x).epsilon(1e-9));
      CHECK(spherical_bessel(3, x) == doctest::Approx(std::sph_bessel(3u, x)).epsilon(1e-9).scale(1e-12));
    }
  }
}
