#include <cmath>

#include "channelwave/experiments.hpp"
#include "doctest.h"

using namespace channelwave;

TEST_SUITE("experiments") {
  TEST_CASE("matching exponents") {
    CHECK(matching_exponents(3, 1.0).p == 5.0);
    CHECK(matching_exponents(3, 1.0).q == doctest::Approx(10.0));
    CHECK(matching_exponents(3, 1.0).qt == doctest::Approx(2.0));
    CHECK(matching_exponents(3, 0.75).q == doctest::Approx(6.0));
    CHECK(matching_exponents(3, 1.25).q == doctest::Approx(24.0));
    CHECK(validate_exponents(matching_exponents(5, 1.0)));
  }

  TEST_CASE("summary statistics") {
    const double v[] = {3.0, std::nan(""), 1.0, 2.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.count == 4);
    CHECK(s.max == 4.0);
    CHECK(s.min == 1.0);
    CHECK(s.mean == 2.5);
    CHECK(s.q50 == 2.5);
    const double none[] = {std::nan("")};
    CHECK(summarize(none).count == 0);
  }

  TEST_CASE("instance generator is deterministic") {
    auto a = instance_rng(7, 3), b = instance_rng(7, 3), c = instance_rng(7, 4);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    EnsembleSpec spec;
    spec.count = 4;
    CHECK(make_instance(spec, 2).hash == make_instance(spec, 2).hash);
    CHECK(make_instance(spec, 2).hash != make_instance(spec, 3).hash);
  }

  TEST_CASE("profile families") {
    CHECK(parse_family("band-limited") == ProfileFamily::BandLimited);
    CHECK(to_string(ProfileFamily::DyadicBump) == "dyadic-bump");
    CHECK_THROWS_AS(parse_family("gaussian"), Error);
    CHECK_THROWS_AS(dyadic_bump({1.0, -8.0, 17}, 0, 1.0), Error);
    const auto g = dyadic_bump(profile_grid(0, 0, 32), 0, 1.0, true);
    CHECK(g(-1.5) == doctest::Approx(1.0));
    CHECK(g(1.5) == 0.0);
  }

  TEST_CASE("zero profile gives zero channels and no fit") {
    const auto zero = SampledProfile::zero(profile_grid(0, 0, 16));
    const auto rep = single_channel_decay(ExponentSet{}, 0, -4, 4, 16, &zero);
    CHECK(rep.fits.empty());
    for (const auto& row : rep.rows) CHECK(row.lhs == 0.0);
  }

  TEST_CASE("single channel slopes, beta = 1") {
    const auto rep = single_channel_decay(matching_exponents(3, 1.0), 0, -8, 8, 64, nullptr, experiment_quadrature());
    CHECK(std::abs(rep.fit("outer").slope + 0.5) <= 0.1);
    CHECK(std::abs(rep.fit("inner").slope - 0.1) <= 0.05);
  }

  TEST_CASE("forcing decay") {
    const auto e = matching_exponents(3, 1.0);
    const auto at_k = forcing_decay(e, 0, 0, 0, 32, experiment_quadrature());
    CHECK(at_k.rows.at(0).ratio == doctest::Approx(0.0403614834).epsilon(1e-6));
    const auto rep = forcing_decay(e, 0, -8, -1, 32, experiment_quadrature());
    CHECK(std::abs(rep.fit("inner").slope - 0.1) <= 0.15);
    CHECK_THROWS_AS(forcing_decay(e, 0, -2, 1), Error);
  }

  TEST_CASE("forcing outside the time window contributes nothing") {
    const auto F = channel_forcing(0, 1.0, 3, 16);
    CHECK(channel_norm(forcing_field(F), 0, 1.0, 2.0, 3, {5.0, 6.0}) == 0.0);
  }

  TEST_CASE("main ratio decomposes into its parts") {
    const auto e = matching_exponents(3, 1.0);
    const auto q = experiment_quadrature();
    const auto g = dyadic_bump(profile_grid(0, 0, 32), 0, 1.0);
    const auto data_only = main_inequality_ratio(&g, {}, e, -6, 6, {}, q);
    const auto rep = single_channel_decay(e, 0, -6, 6, 32, &g, q);
    double acc = 0.0;
    for (const auto& row : rep.rows) acc += row.lhs * row.lhs;
    CHECK(data_only.lhs == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
    CHECK(data_only.forcing_norm == 0.0);
    CHECK(data_only.data_norm == doctest::Approx(std::sqrt(2.0 * sphere_area(2)) * rep.rows[0].rhs));

    const std::vector<ForcingField> F{channel_forcing(0, 1.0, 3, 16)};
    const auto force_only = main_inequality_ratio(nullptr, F, e, -4, 0, {}, q);
    const auto frep = forcing_decay(e, 0, -4, 0, 16, q);
    double facc = 0.0;
    for (const auto& row : frep.rows) facc += row.lhs * row.lhs;
    CHECK(force_only.lhs == doctest::Approx(std::sqrt(facc)).epsilon(1e-12));
    CHECK(force_only.forcing_norm == doctest::Approx(frep.metric("forcing_norm")));

    CHECK_THROWS_AS(main_inequality_ratio(nullptr, {}, e, -2, 2), Error);
    const auto zero = SampledProfile::zero(profile_grid(0, 0, 16));
    try {
      main_inequality_ratio(&zero, {}, e, -2, 2);
      FAIL("expected an undefined ratio");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::UndefinedRatio);
    }
  }

  TEST_CASE("ensemble rows and beta sweep") {
    for (double beta : {0.75, 1.25}) {
      EnsembleSpec spec;
      spec.count = 4;
      spec.e = matching_exponents(3, beta);
      const auto rep = run_ensemble(spec);
      CHECK(rep.rows.size() == 4);
      CHECK(std::isfinite(rep.metric("max")));
      CHECK(rep.metric("max") > 0.0);
    }
    EnsembleSpec small;
    small.count = 10;
    CHECK_THROWS_AS(estimate_constant(small), Error);
  }

  TEST_CASE("decomposition constants") {
    CHECK(decomposition_constant(3, 10, 1.0 / 64, 0.0, false) == doctest::Approx(1.0).epsilon(1e-4));
    const double s = decomposition_constant(3, 10, 1.0 / 64, 0.25, true);
    CHECK(std::isfinite(s));
    CHECK(s > 0.0);
    CHECK(cutoff_sup(3, 10, 1.0 / 64, 0.0) <= 1.0 + 1e-9);
  }

  TEST_CASE("report lookups") {
    ExperimentReport rep;
    rep.metrics = {{"a", 1.0}};
    CHECK(rep.metric("a") == 1.0);
    CHECK_THROWS_AS(rep.metric("b"), Error);
    CHECK_THROWS_AS(rep.fit("outer"), Error);
  }
}
