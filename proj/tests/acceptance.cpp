#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "channelwave/channel_norms.hpp"
#include "channelwave/radial_wavefield.hpp"
#include "reports.hpp"

using namespace channelwave;
using namespace channelwave::cli;

namespace {

struct Tally {
  int failed = 0;

  void line(int id, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }

  void outcome(int id, const std::string& what, const Outcome& o, const std::string& prefix = "") {
    bool pass = true;
    std::string detail;
    for (const Assertion& a : o.assertions) {
      if (a.criterion.rfind(prefix, 0) != 0) continue;
      pass = pass && a.pass;
      if (!a.pass || detail.empty()) detail = a.criterion + " " + a.detail;
    }
    line(id, what, pass && !detail.empty(), detail.empty() ? "no matching checks" : detail);
  }
};

Outcome run_command(Command c, const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  RunConfig rc;
  rc.command = c;
  rc.overrides = overrides;
  return execute(c, resolve_config(rc));
}

Outcome merge(Outcome a, const Outcome& b) {
  a.assertions.insert(a.assertions.end(), b.assertions.begin(), b.assertions.end());
  return a;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void rescaling_and_ordering(Tally& t) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_shift = 0.0, worst_order = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = i % 2 == 0 ? 3 : 5;
    const double c = U(rng) - 0.5, w = 0.5 + U(rng);
    const auto g = SampledProfile::sample(
        [&](double s) { return std::abs(s - c) < w ? std::pow(std::cos(0.5 * kPi * (s - c) / w), 2) * std::cos(3.0 * s) : 0.0; },
        {1.0 / 64, -4.0, 513});
    const RadialFreeWave wave(remove_low_moments(g, d), d);
    const auto [p, q] = y_exponents(d);
    const double factor = std::pow(2.0, -(1.0 / p + d / q));
    const RadialField u{[&](double r, double tt) { return wave.value(r, tt); }};
    const RadialField v{[&](double r, double tt) { return factor * wave.value(0.5 * r, 0.5 * tt); }};
    for (int j = -2; j <= 1; ++j) {
      const double a = channel_norm(u, j, p, q, d), b = channel_norm(v, j + 1, p, q, d);
      if (a > 0.0) worst_shift = std::max(worst_shift, std::abs(a - b) / a);
    }
    const auto cmp = exterior_norm(u, p, q, d, -6, 3);
    double l2 = 0.0;
    for (double x : cmp.channels) l2 += x * x;
    worst_order = std::max(worst_order, cmp.global / std::sqrt(l2));
  }
  t.line(9, "rescaling index shift", worst_shift <= 1e-8, "max relative defect " + num(worst_shift));
  t.line(9, "l2 aggregate dominates exterior norm", worst_order <= 1.0 + 1e-12,
         "max global / aggregate " + num(worst_order));
}

}  // namespace

int main() {
  Tally t;
  try {
    t.outcome(1, "fd oracle d=3,5", merge(run_command(Command::OracleValidate),
                                            run_command(Command::OracleValidate, {{"d", "5"}})));
    t.outcome(2, "isometry defect", run_command(Command::Isometry));
    Outcome slopes;
    for (const char* beta : {"0.75", "1", "1.25"}) slopes = merge(slopes, run_command(Command::FreeDecay, {{"beta", beta}}));
    t.outcome(3, "single-channel slopes", slopes);
    t.outcome(4, "forcing decay slope", run_command(Command::ForcingDecay));
    t.outcome(5, "main constant stability", run_command(Command::MainConstant));
    const Outcome lemmas = run_command(Command::LemmaSweeps);
    Outcome decomposition;
    for (const char* prefix : {"sharp", "smooth", "cutoff"}) {
      for (const Assertion& a : lemmas.assertions) {
        if (a.criterion.rfind(prefix, 0) == 0) decomposition.assertions.push_back(a);
      }
    }
    t.outcome(6, "decomposition sums and cutoff uniformity", decomposition);
    t.outcome(7, "interval scale slope", lemmas, "scale");
    t.outcome(8, "shell pointwise bound", lemmas, "shell");
    rescaling_and_ordering(t);
    t.outcome(10, "picard contraction", run_command(Command::Picard));
  } catch (const std::exception& e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s\n", t.failed == 0 ? "all criteria passed" : (std::to_string(t.failed) + " criteria failed").c_str());
  return t.failed == 0 ? 0 : 1;
}
