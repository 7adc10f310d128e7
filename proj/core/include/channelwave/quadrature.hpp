#pragma once

#include <span>
#include <vector>

namespace channelwave {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Supported point counts: 1-8, 10, 12, 16, 20, 24, 32. Others round up to the next supported count.
const GaussRule& gauss_legendre(int points);

/// Integrate f over [a, b] with the given rule.
template <class F>
double integrate(const GaussRule& rule, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

/// Ordinary least-squares line fit y = intercept + slope * x with a two-sided
/// 95% confidence half-width on the slope from the residual scatter.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_half_width = 0.0;
  int points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace channelwave
