#pragma once

#include <span>
#include <vector>

#include "channelwave/profile_space.hpp"

namespace channelwave {

/// P_{(d-3)/2} normalized so that P(1) = 1, with exact monomial coefficients
/// from Rodrigues' formula (1 / (2^n n!)) d^n/dz^n (z^2 - 1)^n.
class LegendreKernel {
 public:
  LegendreKernel(int dimension, std::vector<double> coeffs);

  int dimension() const noexcept { return dimension_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator()(double z) const noexcept;
  double derivative(double z) const noexcept;

 private:
  int dimension_;
  std::vector<double> coeffs_;
};

/// Odd d in [3, 13].
LegendreKernel legendre_poly(int d);

/// Radial free wave built from its radiation profile G_-:
///   u(r, t) = r^{-(d-1)/2} int_{t-r}^{t+r} G_-(s) P_{(d-3)/2}((s - t) / r) ds.
/// The integral is exact for the piecewise-linear interpolant of G_-.
class RadialFreeWave {
 public:
  RadialFreeWave(SampledProfile profile, int d);

  const SampledProfile& profile() const noexcept { return profile_; }
  int dimension() const noexcept { return d_; }
  const LegendreKernel& kernel() const noexcept { return kernel_; }

  double value(double r, double t) const;
  /// Analytic time derivative of value().
  double time_derivative(double r, double t) const;

 private:
  // int_{lo}^{hi} G(s) Q((s - t) / r) ds for the polynomial with coefficients poly.
  double kernel_integral(std::span<const double> poly, double r, double t, double lo, double hi) const;
  double direct_integral(std::span<const double> poly, double r, double t, double lo, double hi) const;
  double moment_prefix(int l, double s) const;

  SampledProfile profile_;
  int d_;
  LegendreKernel kernel_;
  std::vector<double> kernel_derivative_;
  Interval support_;
  double center_;
  // prefix_[l][n] = int_{s_0}^{s_n} G(s) (s - center)^l ds
  std::vector<std::vector<double>> prefix_;
};

double evaluate_free_wave(const RadialFreeWave& w, double r, double t);

/// Uniform positive radial grid r_i = origin + i * spacing.
struct RadialGrid {
  double spacing = 1.0;
  double origin = 1.0;
  std::size_t length = 0;

  double position(std::size_t i) const noexcept { return origin + spacing * static_cast<double>(i); }
};

struct InitialDataPair {
  std::vector<double> u0;
  std::vector<double> u1;
  int d = 3;
  RadialGrid rgrid;
};

/// (u(., 0), d_t u(., 0)) on the grid; u1 uses the differentiated formula.
InitialDataPair initial_data(const RadialFreeWave& w, const RadialGrid& rgrid);

/// ||(u0, u1)||_{H^beta x H^{beta-1}(R^d)} through the radial Fourier transform
/// with closed-form spherical Bessel kernels. Samples are taken as zero beyond
/// the grid.
double radial_sobolev_norm(const InitialDataPair& data, double beta);

/// ||f||_{H^s(R^d)} for one radial function sampled on the grid.
double radial_homogeneous_norm(std::span<const double> f, const RadialGrid& rgrid, int d, double s);

/// Spherical Bessel j_n(x), n in [0, 6], from the sin/cos closed forms (series near 0).
double spherical_bessel(int n, double x) noexcept;

/// | ||(u0,u1)||^2 - 2 sigma_{d-1} hnorm(G_-, beta-1)^2 | / ||(u0,u1)||^2 with the
/// data sampled on a grid matched to the profile's spacing and support.
double isometry_defect(const RadialFreeWave& w, double beta);

/// ||r^{(d-1)/2} d_t u(r, -T) - G_-(r - T)||_{L^2_r} / ||G_-||_{L^2} over an
/// r-window covering the translated support.
double radiation_limit_defect(const RadialFreeWave& w, double T);

/// Subtracts envelope * polynomial so that int G s^i ds = 0 for i <= (d-3)/2;
/// then the initial data of the wave vanish for r beyond the support.
SampledProfile remove_low_moments(const SampledProfile& g, int d);

}  // namespace channelwave
