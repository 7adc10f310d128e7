#include <cmath>
#include <filesystem>

#include "channelwave/profile_io.hpp"
#include "doctest.h"

using namespace channelwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "channelwave-io-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("profile_io") {
  TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-kInf) == "-inf");
    CHECK(format_double(2.0) == "2");
  }

  TEST_CASE("profile round trip") {
    const auto g = SampledProfile::sample([](double s) { return std::sin(3.0 * s) / (1.0 + s * s); }, {0.01, -2.0, 401});
    const auto path = scratch("profile.csv");
    write_profile(g, path);
    CHECK(fs::exists(sidecar_path(path)));
    const auto back = read_profile(path);
    CHECK(back.size() == g.size());
    CHECK(back.spacing() == g.spacing());
    CHECK(back.origin() == g.origin());
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(back.samples()[n] == g.samples()[n]);
  }

  TEST_CASE("malformed profiles are rejected") {
    const auto path = scratch("bad.csv");
    write_profile(SampledProfile::sample([](double s) { return s; }, {0.5, 0.0, 3}), path);
    write_text(path, "x,value\n0,0\n0.5,0.5\n1,1\n");
    CHECK_THROWS_AS(read_profile(path), Error);
    write_text(path, "s,value\n0,0\n0.7,0.5\n1,1\n");
    CHECK_THROWS_AS(read_profile(path), Error);
    write_text(path, "s,value\n0,0\n0.5,0.5\n");
    CHECK_THROWS_AS(read_profile(path), Error);
    write_text(path, "s,value\n0,0\n0.5,abc\n1,1\n");
    CHECK_THROWS_AS(read_profile(path), Error);
    CHECK_THROWS_AS(read_profile(scratch("missing.csv")), Error);
  }

  TEST_CASE("forcing round trip keeps the channel tag") {
    const auto f = channel_forcing(0, 1.5, 3, 8);
    const auto path = scratch("forcing.csv");
    write_forcing(f, path);
    const auto back = read_forcing(path, 3);
    REQUIRE(back.channel().has_value());
    CHECK(*back.channel() == 0);
    const ForcingGrid& g = f.grid();
    CHECK(back.grid().nr == g.nr);
    CHECK(back.grid().nt == g.nt);
    for (std::size_t j = 0; j < g.nt; ++j) {
      const auto a = f.slice(j), b = back.slice(j);
      for (std::size_t i = 0; i < g.nr; ++i) CHECK(a[i] == b[i]);
    }
    write_text(path, "r,t,value\n0,0,1\n");
    CHECK_THROWS_AS(read_forcing(path, 3), Error);
  }

  TEST_CASE("report serialization") {
    ExperimentReport rep;
    rep.name = "demo";
    rep.rows.push_back({0, "a", "h0", 1.0, 2.0, 0.5, {{"j", 1.0}}});
    rep.rows.push_back({1, "b", "h1", 3.0, 4.0, 0.75, {{"k", 2.0}, {"j", 3.0}}});
    rep.metrics = {{"max", 0.75}, {"bad", std::nan("")}};
    rep.stats = summarize(std::vector<double>{0.5, 0.75});
    const auto csv = rows_csv(rep);
    CHECK(csv == "index,group,input_hash,lhs,rhs,ratio,j,k\n0,a,h0,1,2,0.5,1,\n1,b,h1,3,4,0.75,3,2\n");
    const auto js = summary_json(rep, R"({"seed": 3, "d": [3, 5]})");
    CHECK(js.find("\"experiment\": \"demo\"") != std::string::npos);
    CHECK(js.find("\"seed\": 3") != std::string::npos);
    CHECK(js.find("\"bad\": \"nan\"") != std::string::npos);
    CHECK_THROWS_AS(summary_json(rep, "{not json"), Error);
    CHECK(figure_dat({"f", {"x", "y"}, {{1.0, 2.0}, {0.5, -1.0}}}) == "# x y\n1 2\n0.5 -1\n");
  }

  TEST_CASE("channel vector and data pair files") {
    ChannelNormVector v;
    v.jmin = -1;
    v.jmax = 1;
    v.values = {0.5, 1.0, 0.25};
    v.aggregate = std::sqrt(0.25 + 1.0 + 0.0625);
    const auto path = scratch("channels.csv");
    write_channel_vector(v, path);
    CHECK(read_text(path) == "j,norm\n-1,0.5\n0,1\n1,0.25\n");
    CHECK(read_text(sidecar_path(path)).find("\"jmin\": -1") != std::string::npos);

    InitialDataPair p;
    p.rgrid = {0.5, 0.5, 2};
    p.u0 = {1.0, 2.0};
    p.u1 = {0.0, -1.0};
    CHECK(data_pair_csv(p) == "r,u0,u1\n0.5,1,0\n1,2,-1\n");
    const double r[] = {1.0, 2.0}, t[] = {0.0};
    CHECK(field_csv([](double a, double b) { return a + b; }, r, t) == "r,t,value\n1,0,1\n2,0,2\n");
  }
}
