#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "channelwave/common.hpp"

namespace channelwave {

/// (d, beta, p, q, p~, q~) with 1/p + d/q = d/2 - beta and 1/p~ + d/q~ = d/2 - beta + 2.
struct ExponentSet {
  int d = 3;
  double beta = 1.0;
  double p = 5.0;
  double q = 10.0;
  double pt = 1.0;
  double qt = 2.0;
};

/// Both identities to 1e-12, d odd >= 3, beta in (1/2, 3/2), exponents in [1, inf).
bool validate_exponents(const ExponentSet& e) noexcept;

/// q solving 1/p + d/q = d/2 - beta.
double q_for(int d, double beta, double p);

/// Radial field u(r, t) with optional support hints in y = r - |t| and t.
/// Points with y outside [y_min, y_max] or t outside time_support are taken as 0.
struct RadialField {
  std::function<double(double, double)> eval;
  double y_min = 0.0;
  double y_max = kInf;
  Interval time_support{};
};

struct ChannelQuadrature {
  int y_panels = 2;
  int y_nodes = 16;
  int t_nodes = 16;
  /// Panels over |t| <= 2^j.
  int inner_panels = 8;
  /// Panels per time octave [2^{j+i}, 2^{j+i+1}].
  int octave_panels = 4;
  /// Octaves beyond 2^j on each side when the window is unbounded.
  int octaves = 16;
};

/// Omega_j = {|t| + 2^j <= r < |t| + 2^{j+1}}, integrated in (t, y = r - |t|).
/// ( int_window ( sigma_{d-1} int_{Omega_j(t)} |u|^q r^{d-1} dr )^{p/q} dt )^{1/p}.
double channel_norm(const RadialField& u, int j, double p, double q, int d, Interval window = {},
                    const ChannelQuadrature& quad = {});

struct ChannelNormVector {
  int jmin = 0;
  int jmax = -1;
  double p = 0.0;
  double q = 0.0;
  std::vector<double> values;
  /// l^2 norm of values.
  double aggregate = 0.0;
  /// l^2 mass beyond each end, extrapolated from the ratio of the two end channels.
  double tail_low = 0.0;
  double tail_high = 0.0;

  double at(int j) const { return values.at(static_cast<std::size_t>(j - jmin)); }
};

ChannelNormVector channel_vector(const RadialField& u, double p, double q, int d, int jmin, int jmax,
                                 Interval window = {}, const ChannelQuadrature& quad = {});
ChannelNormVector channel_vector(const RadialField& u, const ExponentSet& e, int jmin, int jmax,
                                 Interval window = {}, const ChannelQuadrature& quad = {});

/// l^r norm of the entries.
double lr_aggregate(const ChannelNormVector& v, double r);

/// c_n = 2^{(1/2 - beta) n} for n >= -1, 2^{n/q} for n <= -2.
double c_sequence(int n, const ExponentSet& e);

/// ((d+2)/(d-2), 2(d+2)/(d-2)).
std::pair<double, double> y_exponents(int d);

double y_norm(const RadialField& u, int d, int jmin, int jmax, Interval window = {},
              const ChannelQuadrature& quad = {});
double z_norm(const RadialField& f, int d, int jmin, int jmax, Interval window = {},
              const ChannelQuadrature& quad = {});

/// Channel norms and the global L^p L^q norm over the union of Omega_j,
/// j in [jmin, jmax], all on one shared set of (t, y) nodes.
struct ExteriorComparison {
  std::vector<double> channels;
  double global = 0.0;
};

ExteriorComparison exterior_norm(const RadialField& u, double p, double q, int d, int jmin, int jmax,
                                 Interval window = {}, const ChannelQuadrature& quad = {});

}  // namespace channelwave
