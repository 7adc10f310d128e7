#include "channelwave/channel_norms.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "channelwave/parallel.hpp"
#include "channelwave/quadrature.hpp"

namespace channelwave {
namespace {

struct Node {
  double x;
  double w;
};

void require_exponents(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorKind::Domain, "channel norm exponents must lie in [1, inf)");
  }
}

void append_panel(std::vector<Node>& out, double a, double b, int panels, const GaussRule& rule) {
  if (!(b > a)) return;
  const double step = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + step * k;
    const double half = 0.5 * step;
    const double mid = lo + half;
    for (int i = 0; i < rule.size(); ++i) out.push_back({mid + half * rule.nodes[i], half * rule.weights[i]});
  }
}

// Time nodes: |t| <= 2^j in inner panels, then dyadic octaves up to 2^{top}
// (or to the window edge if that is farther), clipped to the window.
std::vector<Node> time_nodes(int j, int top, Interval window, const ChannelQuadrature& quad) {
  const GaussRule& rule = gauss_legendre(quad.t_nodes);
  const double base = std::ldexp(1.0, j);
  const double edge = std::max(std::abs(window.lo), std::abs(window.hi));
  const double reach = std::isfinite(edge) ? std::max(edge, base) : std::ldexp(1.0, top);
  std::vector<std::pair<double, double>> panels;
  const double step = 2.0 * base / quad.inner_panels;
  for (int k = 0; k < quad.inner_panels; ++k) panels.emplace_back(-base + step * k, -base + step * (k + 1));
  for (double lo = base; lo < reach; lo *= 2.0) {
    const double hi = 2.0 * lo;
    const double w = (hi - lo) / quad.octave_panels;
    for (int k = 0; k < quad.octave_panels; ++k) {
      panels.emplace_back(lo + w * k, lo + w * (k + 1));
      panels.emplace_back(-lo - w * (k + 1), -lo - w * k);
    }
  }
  std::sort(panels.begin(), panels.end());
  std::vector<Node> nodes;
  for (const auto& [a, b] : panels) append_panel(nodes, std::max(a, window.lo), std::min(b, window.hi), 1, rule);
  return nodes;
}

// sigma_{d-1} int_{Omega_j(t)} |u|^q r^{d-1} dr.
double shell_integral(const RadialField& u, int j, double t, double q, int d, const ChannelQuadrature& quad) {
  if (!u.time_support.contains(t)) return 0.0;
  const double y0 = std::max(std::ldexp(1.0, j), u.y_min);
  const double y1 = std::min(std::ldexp(1.0, j + 1), u.y_max);
  if (!(y1 > y0)) return 0.0;
  thread_local std::vector<Node> ys;
  ys.clear();
  append_panel(ys, y0, y1, quad.y_panels, gauss_legendre(quad.y_nodes));
  const double at = std::abs(t);
  double acc = 0.0;
  for (const auto& node : ys) {
    const double r = at + node.x;
    const double v = u.eval(r, t);
    if (v != 0.0) acc += node.w * std::pow(std::abs(v), q) * std::pow(r, d - 1);
  }
  return sphere_area(d - 1) * acc;
}

bool channel_vanishes(const RadialField& u, int j) {
  return u.y_min >= std::ldexp(1.0, j + 1) || u.y_max <= std::ldexp(1.0, j) || u.time_support.empty();
}

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

}  // namespace

bool validate_exponents(const ExponentSet& e) noexcept {
  if (e.d < 3 || e.d % 2 == 0) return false;
  if (!(e.beta > 0.5 && e.beta < 1.5)) return false;
  for (double x : {e.p, e.q, e.pt, e.qt}) {
    if (!(x >= 1.0) || !std::isfinite(x)) return false;
  }
  const double dd = e.d;
  if (std::abs(1.0 / e.p + dd / e.q - (0.5 * dd - e.beta)) > 1e-12) return false;
  if (std::abs(1.0 / e.pt + dd / e.qt - (0.5 * dd - e.beta + 2.0)) > 1e-12) return false;
  return true;
}

double q_for(int d, double beta, double p) {
  const double rest = 0.5 * d - beta - 1.0 / p;
  if (!(rest > 0.0)) throw Error(ErrorKind::Domain, "no finite q for these exponents");
  return d / rest;
}

double channel_norm(const RadialField& u, int j, double p, double q, int d, Interval window,
                    const ChannelQuadrature& quad) {
  require_exponents(p, q);
  require_odd_dimension(d, 3, 13);
  if (window.empty() || channel_vanishes(u, j)) return 0.0;
  const Interval span = intersect(window, u.time_support);
  if (span.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& node : time_nodes(j, j + quad.octaves, span, quad)) {
    const double a = shell_integral(u, j, node.x, q, d, quad);
    if (a > 0.0) acc += node.w * std::pow(a, p / q);
  }
  return std::pow(acc, 1.0 / p);
}

ChannelNormVector channel_vector(const RadialField& u, double p, double q, int d, int jmin, int jmax,
                                 Interval window, const ChannelQuadrature& quad) {
  require_exponents(p, q);
  ChannelNormVector v;
  v.jmin = jmin;
  v.jmax = jmax;
  v.p = p;
  v.q = q;
  if (jmax < jmin) return v;
  v.values.assign(static_cast<std::size_t>(jmax - jmin + 1), 0.0);
  parallel_for(v.values.size(), [&](std::size_t i) {
    v.values[i] = channel_norm(u, jmin + static_cast<int>(i), p, q, d, window, quad);
  });
  v.aggregate = lr_aggregate(v, 2.0);

  auto tail = [](double inner, double outer) {
    if (!(inner > 0.0) || !(outer > 0.0) || outer >= inner) return 0.0;
    const double rho = outer / inner;
    return outer * rho / std::sqrt(1.0 - rho * rho);
  };
  if (v.values.size() >= 2) {
    v.tail_low = tail(v.values[1], v.values[0]);
    v.tail_high = tail(v.values[v.values.size() - 2], v.values.back());
  }
  return v;
}

ChannelNormVector channel_vector(const RadialField& u, const ExponentSet& e, int jmin, int jmax, Interval window,
                                 const ChannelQuadrature& quad) {
  return channel_vector(u, e.p, e.q, e.d, jmin, jmax, window, quad);
}

double lr_aggregate(const ChannelNormVector& v, double r) {
  double acc = 0.0;
  for (double x : v.values) acc += std::pow(x, r);
  return std::pow(acc, 1.0 / r);
}

double c_sequence(int n, const ExponentSet& e) {
  if (n >= -1) return std::exp2((0.5 - e.beta) * n);
  return std::exp2(n / e.q);
}

std::pair<double, double> y_exponents(int d) {
  require_odd_dimension(d, 3, 13);
  const double p = (d + 2.0) / (d - 2.0);
  return {p, 2.0 * p};
}

double y_norm(const RadialField& u, int d, int jmin, int jmax, Interval window, const ChannelQuadrature& quad) {
  const auto [p, q] = y_exponents(d);
  return channel_vector(u, p, q, d, jmin, jmax, window, quad).aggregate;
}

double z_norm(const RadialField& f, int d, int jmin, int jmax, Interval window, const ChannelQuadrature& quad) {
  return channel_vector(f, 1.0, 2.0, d, jmin, jmax, window, quad).aggregate;
}

ExteriorComparison exterior_norm(const RadialField& u, double p, double q, int d, int jmin, int jmax,
                                 Interval window, const ChannelQuadrature& quad) {
  require_exponents(p, q);
  require_odd_dimension(d, 3, 13);
  ExteriorComparison out;
  if (jmax < jmin) return out;
  const std::size_t count = static_cast<std::size_t>(jmax - jmin + 1);
  out.channels.assign(count, 0.0);
  const Interval span = intersect(window, u.time_support);
  if (span.empty()) return out;
  const auto nodes = time_nodes(jmin, jmax + quad.octaves, span, quad);
  std::vector<double> shells(nodes.size() * count, 0.0);
  parallel_for(nodes.size(), [&](std::size_t n) {
    for (std::size_t c = 0; c < count; ++c) {
      const int j = jmin + static_cast<int>(c);
      if (!channel_vanishes(u, j)) shells[n * count + c] = shell_integral(u, j, nodes[n].x, q, d, quad);
    }
  });
  double global = 0.0;
  std::vector<double> per(count, 0.0);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    double sum = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
      const double a = shells[n * count + c];
      sum += a;
      if (a > 0.0) per[c] += nodes[n].w * std::pow(a, p / q);
    }
    if (sum > 0.0) global += nodes[n].w * std::pow(sum, p / q);
  }
  for (std::size_t c = 0; c < count; ++c) out.channels[c] = std::pow(per[c], 1.0 / p);
  out.global = std::pow(global, 1.0 / p);
  return out;
}

}  // namespace channelwave
