#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "channelwave/common.hpp"

namespace channelwave {

/// Uniform grid s_n = origin + n * spacing, n = 0 .. length-1.
struct GridSpec {
  double spacing = 1.0;
  double origin = 0.0;
  std::size_t length = 0;

  double position(std::size_t n) const noexcept { return origin + spacing * static_cast<double>(n); }
  double last() const noexcept { return position(length == 0 ? 0 : length - 1); }
};

/// Compactly supported 1D radiation profile on a uniform grid. Between samples
/// the profile is the piecewise-linear interpolant; outside the grid it is 0.
/// Both end samples are zero.
class SampledProfile {
 public:
  SampledProfile(std::vector<double> samples, double spacing, double origin);

  static SampledProfile zero(const GridSpec& grid);

  /// Samples f on the grid, then forces both end samples to zero.
  static SampledProfile sample(const std::function<double(double)>& f, const GridSpec& grid);

  std::span<const double> samples() const noexcept { return samples_; }
  double spacing() const noexcept { return spacing_; }
  double origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return samples_.size(); }
  GridSpec grid() const noexcept { return {spacing_, origin_, samples_.size()}; }
  double position(std::size_t n) const noexcept { return origin_ + spacing_ * static_cast<double>(n); }

  /// Linear interpolation; 0 outside the grid.
  double operator()(double s) const noexcept;

  bool is_zero() const noexcept;
  /// Closed hull of the interpolant's support, i.e. one cell beyond the first
  /// and last nonzero samples. Returns an empty interval for the zero profile.
  Interval support() const noexcept;
  double sup_abs() const noexcept;
  /// max |g_{n+1} - g_n| / spacing.
  double sup_abs_derivative() const noexcept;
  /// Trapezoid L^2 norm (ends are zero so this equals the rectangle rule).
  double l2_norm() const noexcept;

  SampledProfile operator+(const SampledProfile& other) const;
  SampledProfile scaled(double factor) const;
  /// Same samples on a grid with spacing*lambda and origin*lambda: g(s / lambda).
  SampledProfile dilated(double lambda) const;
  /// g(-s) on the mirrored grid.
  SampledProfile reflected() const;

 private:
  std::vector<double> samples_;
  double spacing_;
  double origin_;
};

/// Order of a homogeneous Sobolev norm on the line, gamma in (-1/2, 1/2).
class SobolevOrder {
 public:
  explicit SobolevOrder(double gamma);
  static SobolevOrder from_beta(double beta) { return SobolevOrder(beta - 1.0); }

  double gamma() const noexcept { return gamma_; }
  double beta() const noexcept { return gamma_ + 1.0; }

 private:
  double gamma_;
};

/// (int |xi|^{2 gamma} |g^(xi)|^2 dxi)^{1/2} with the unitary Fourier transform,
/// computed from a zero-padded (factor >= 8) discrete transform. Each frequency
/// bin carries the exact average of |xi|^{2 gamma} over the bin.
double hnorm(const SampledProfile& g, SobolevOrder order);

/// chi_J g on the same grid; J's endpoints snap to the nearest grid points.
SampledProfile sharp_cutoff(const SampledProfile& g, Interval J);

struct DyadicPiece {
  int k;
  SampledProfile piece;
};

/// J_k = [-2^{k+1}, -2^k] u [2^k, 2^{k+1}]. Sample s goes to k = floor(log2 |s|);
/// the sample within half a cell of s = 0 goes nowhere. Only pieces with a
/// nonzero sample are returned, ordered by k, each trimmed to its support.
std::vector<DyadicPiece> dyadic_decompose(const SampledProfile& g);

/// Index of the dyadic shell holding |s| (floor(log2 |s|)), exact at powers of two.
int dyadic_index(double s);

/// Piecewise-linear bump: 1 on [2^k, 2^{k+1}], ramps on [2^{k-1}, 2^k] and [2^{k+1}, 3*2^k].
double smooth_bump_value(int k, double x) noexcept;
/// Samples smooth_bump_value on the grid. Throws Resolution when fewer than 8
/// samples fall across [2^{k-1}, 3*2^k].
SampledProfile smooth_bump(int k, const GridSpec& grid);

/// hnorm(g) over the interval bound |J|^{1/2-gamma} sup|g| for gamma <= 0,
/// |J|^{1/2-gamma}(sup|g| + |J| sup|g'|) for gamma > 0. The zero profile gives 0.
double hgamma_lemma_ratio(const SampledProfile& g, Interval J, SobolevOrder order);

}  // namespace channelwave
