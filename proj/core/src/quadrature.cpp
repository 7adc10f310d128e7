#include "channelwave/quadrature.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <mutex>

#include "channelwave/common.hpp"

namespace channelwave {
namespace {

template <int N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule rule;
  // boost stores the non-negative half; for odd N the first entry is the origin.
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    rule.nodes.push_back(-x[i]);
    rule.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

constexpr std::array<int, 14> kSupported = {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 16, 20, 24, 32};

GaussRule build(int n) {
  switch (n) {
    case 1: return GaussRule{{0.0}, {2.0}};
    case 2: return make_rule<2>();
    case 3: return make_rule<3>();
    case 4: return make_rule<4>();
    case 5: return make_rule<5>();
    case 6: return make_rule<6>();
    case 7: return make_rule<7>();
    case 8: return make_rule<8>();
    case 10: return make_rule<10>();
    case 12: return make_rule<12>();
    case 16: return make_rule<16>();
    case 20: return make_rule<20>();
    case 24: return make_rule<24>();
    default: return make_rule<32>();
  }
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  static std::array<GaussRule, kSupported.size()> table;
  static std::once_flag once;
  std::call_once(once, [] {
    for (std::size_t i = 0; i < kSupported.size(); ++i) table[i] = build(kSupported[i]);
  });
  for (std::size_t i = 0; i < kSupported.size(); ++i) {
    if (kSupported[i] >= points) return table[i];
  }
  return table.back();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorKind::InsufficientRange, "fit_line needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientRange, "fit_line: degenerate abscissae");
  LineFit fit;
  fit.points = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      sse += e * e;
    }
    const double se = std::sqrt(sse / (n - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(n - 2));
    fit.slope_half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  }
  return fit;
}

}  // namespace channelwave
