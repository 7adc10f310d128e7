#include <cmath>
#include <random>

#include "channelwave/channel_norms.hpp"
#include "channelwave/radial_wavefield.hpp"
#include "doctest.h"

using namespace channelwave;

namespace {

RadialFreeWave test_wave(int d, double c, double w) {
  const auto g = SampledProfile::sample(
      [&](double s) { return std::abs(s - c) < w ? std::pow(std::cos(0.5 * kPi * (s - c) / w), 2) * std::cos(3.0 * s) : 0.0; },
      {1.0 / 64, -4.0, 513});
  return RadialFreeWave(remove_low_moments(g, d), d);
}

RadialField field_of(const RadialFreeWave& w) {
  return {[&w](double r, double t) { return w.value(r, t); }};
}

}  // namespace

TEST_SUITE("channel_norms") {
  TEST_CASE("exponent identities") {
    CHECK(validate_exponents({3, 1.0, 5.0, 10.0, 1.0, 2.0}));
    CHECK_FALSE(validate_exponents({3, 1.0, 4.0, 10.0, 1.0, 2.0}));
    const double p = 7.0 / 3.0;
    ExponentSet e{5, 1.0, p, q_for(5, 1.0, p), 1.0, 0.0};
    e.qt = 5.0 / (2.5 - 1.0 + 2.0 - 1.0);
    CHECK(validate_exponents(e));
    CHECK(e.q == doctest::Approx(5.0 / (1.5 - 3.0 / 7.0)));
    CHECK_FALSE(validate_exponents({3, 1.5, 5.0, 10.0, 1.0, 2.0}));
    CHECK_THROWS_AS(q_for(3, 1.4, 1.0), Error);
  }

  TEST_CASE("zero field") {
    const RadialField zero{[](double, double) { return 0.0; }};
    CHECK(channel_norm(zero, 0, 5.0, 10.0, 3) == 0.0);
    const auto v = channel_vector(zero, 5.0, 10.0, 3, -2, 2);
    for (double x : v.values) CHECK(x == 0.0);
    CHECK(y_norm(zero, 3, -2, 2) == 0.0);
    CHECK(z_norm(zero, 3, -2, 2) == 0.0);
  }

  TEST_CASE("constant field on a slab") {
    const RadialField one{[](double, double) { return 1.0; }};
    const double T = 1.7;
    for (int j : {-1, 0, 2}) {
      const double A = std::ldexp(1.0, j), B = 2.0 * A;
      const double exact = sphere_area(2) / 12.0 * (std::pow(T + B, 4) - std::pow(B, 4) - std::pow(T + A, 4) + std::pow(A, 4));
      CHECK(std::pow(channel_norm(one, j, 2.0, 2.0, 3, {0.0, T}), 2) == doctest::Approx(exact).epsilon(1e-6));
    }
  }

  TEST_CASE("rescaling shifts the channel index") {
    const auto w = test_wave(3, 0.3, 0.8);
    const double p = 5.0, q = 10.0;
    const double factor = std::pow(2.0, -(1.0 / p + 3.0 / q));
    const RadialField u = field_of(w);
    const RadialField v{[&](double r, double t) { return factor * w.value(0.5 * r, 0.5 * t); }};
    for (int j = -3; j <= 2; ++j) {
      CHECK(channel_norm(v, j + 1, p, q, 3) == doctest::Approx(channel_norm(u, j, p, q, 3)).epsilon(1e-8));
    }
  }

  TEST_CASE("finite speed empties the outer channels") {
    const auto w = test_wave(3, 0.0, 1.0);
    const auto v = channel_vector(field_of(w), 5.0, 10.0, 3, -2, 4);
    CHECK(v.at(-1) > 0.0);
    CHECK(v.at(0) <= 1e-12 * v.at(-1));
    CHECK(v.at(4) <= 1e-12 * v.at(-1));
    CHECK(v.aggregate == doctest::Approx(lr_aggregate(v, 2.0)));
  }

  TEST_CASE("tail extrapolation tracks a widened channel range") {
    const auto w = test_wave(3, 0.2, 0.9);
    const ExponentSet e{};
    auto total = [](const ChannelNormVector& v) {
      return std::sqrt(v.aggregate * v.aggregate + v.tail_low * v.tail_low + v.tail_high * v.tail_high);
    };
    const auto narrow = channel_vector(field_of(w), e, -8, 2);
    const auto wide = channel_vector(field_of(w), e, -12, 6);
    const auto deep = channel_vector(field_of(w), e, -16, 2);
    CHECK(narrow.aggregate < wide.aggregate);
    CHECK(wide.aggregate < deep.aggregate);
    CHECK(deep.tail_low < wide.tail_low);
    CHECK(total(narrow) == doctest::Approx(total(deep)).epsilon(0.03));
    CHECK(total(wide) == doctest::Approx(total(deep)).epsilon(2e-3));
  }

  TEST_CASE("c sequence") {
    const ExponentSet e{};
    CHECK(c_sequence(0, e) == 1.0);
    CHECK(c_sequence(2, e) == doctest::Approx(0.5));
    CHECK(c_sequence(-2, e) == doctest::Approx(0.87055056329612412));
  }

  TEST_CASE("Y exponents") {
    CHECK(y_exponents(3) == std::pair<double, double>{5.0, 10.0});
    CHECK(y_exponents(5).first == doctest::Approx(7.0 / 3.0));
  }

  TEST_CASE("aggregate dominates the global exterior norm") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const int d = i % 2 == 0 ? 3 : 5;
      const auto w = test_wave(d, U(rng) - 0.5, 0.5 + U(rng));
      const auto [p, q] = y_exponents(d);
      const auto cmp = exterior_norm(field_of(w), p, q, d, -6, 3);
      double l2 = 0.0, lmax = 0.0, lmin = 0.0;
      const double hi = std::max(p, q), lo = std::min(p, q);
      for (double c : cmp.channels) {
        l2 += c * c;
        lmax += std::pow(c, hi);
        lmin += std::pow(c, lo);
      }
      CHECK(cmp.global <= std::sqrt(l2) * (1.0 + 1e-12));
      CHECK(std::pow(lmax, 1.0 / hi) <= cmp.global * (1.0 + 1e-12));
      CHECK(cmp.global <= std::pow(lmin, 1.0 / lo) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("bad exponents") {
    const RadialField one{[](double, double) { return 1.0; }};
    CHECK_THROWS_AS(channel_norm(one, 0, 0.5, 2.0, 3, {0.0, 1.0}), Error);
    CHECK_THROWS_AS(channel_norm(one, 0, 2.0, kInf, 3, {0.0, 1.0}), Error);
  }
}
