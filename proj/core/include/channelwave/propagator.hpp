#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "channelwave/profile_space.hpp"

namespace channelwave {

/// One monomial coef * a^i * b^j * p^k * q^l with a = p^2 - rho^2,
/// b = rho^2 - q^2, p = r + t, q = r - t.
struct KernelMonomial {
  double coef = 0.0;
  std::array<int, 4> powers{};
};

/// Spherical-means kernel for S(t)(0, g) in odd d:
///   S(t)(0,g)(r) = normalization * r^{2-d} * sum_m am[m] t^{te[m]} int_{|r-t|}^{r+t} rho g(rho) d_t^m Q^n drho,
/// Q = ((r+t)^2 - rho^2)(rho^2 - (r-t)^2) = (rho+t+r)(rho+t-r)(r+rho-t)(r+t-rho), n = (d-3)/2.
struct SymmetricKernel {
  int d = 3;
  int exponent = 0;
  /// t_deriv[m] is d_t^m Q^n as a sum of monomials.
  std::vector<std::vector<KernelMonomial>> t_deriv;
  /// A_{d,m} and the matching power of t from expanding (t^{-1} d_t)^n.
  std::vector<double> am;
  std::vector<int> t_power;
  /// sigma_{d-2} / (sigma_{d-1} 4^n (d-2)!!).
  double normalization = 1.0;

  /// d_t^m Q^n from the stored expansion.
  double derivative(int m, double rho, double t, double r) const noexcept;
  /// Q^n from the stored expansion.
  double expanded(double rho, double t, double r) const noexcept { return derivative(0, rho, t, r); }
  /// Q^n from the product form.
  double product(double rho, double t, double r) const noexcept;
};

/// Odd d in [3, 9].
SymmetricKernel build_kernel(int d);
/// Cached, shared instance of build_kernel(d).
const SymmetricKernel& kernel_for(int d);

/// r-samples of a radial function on r_i = origin + i * spacing, origin >= 0.
/// Linear between samples, zero outside [origin, last].
struct RadialSamples {
  std::span<const double> values;
  double origin = 0.0;
  double spacing = 1.0;
};

/// S(t)(0, g)(r) for a sampled radial g. Exact zero outside the influence region.
double half_wave_samples(const SymmetricKernel& kernel, RadialSamples g, double r, double t);

/// S(t)(0, u1)(r); u1 is a profile on a nonnegative r-grid.
double half_wave(const SampledProfile& u1, int d, double r, double t);

/// Half-wave propagator bound to one u1; d = 3 uses prefix sums.
class HalfWave {
 public:
  HalfWave(SampledProfile u1, int d);

  double operator()(double r, double t) const;
  const SampledProfile& data() const noexcept { return u1_; }
  int dimension() const noexcept { return d_; }

 private:
  SampledProfile u1_;
  int d_;
  const SymmetricKernel* kernel_;
  std::vector<double> prefix_;
};

/// Uniform (r, t) grid: r_i = r_origin + i dr, t_j = t_origin + j dt.
struct ForcingGrid {
  double r_origin = 0.0;
  double r_spacing = 1.0;
  std::size_t nr = 0;
  double t_origin = 0.0;
  double t_spacing = 1.0;
  std::size_t nt = 0;

  double r(std::size_t i) const noexcept { return r_origin + r_spacing * static_cast<double>(i); }
  double t(std::size_t j) const noexcept { return t_origin + t_spacing * static_cast<double>(j); }
};

/// Forcing F(r, t) sampled on a grid, row-major in t (samples[j * nr + i]).
/// Bilinear between samples, zero outside the grid. A channel-tagged field
/// must vanish outside Omega_k up to one r-cell.
class ForcingField {
 public:
  ForcingField(ForcingGrid grid, std::vector<double> samples, int d, std::optional<int> k = std::nullopt);

  /// Samples f; with a channel tag, samples outside Omega_k are set to zero.
  static ForcingField sample(const std::function<double(double, double)>& f, const ForcingGrid& grid, int d,
                             std::optional<int> k = std::nullopt);

  const ForcingGrid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const double> slice(std::size_t j) const noexcept {
    return std::span<const double>(samples_).subspan(j * grid_.nr, grid_.nr);
  }
  int dimension() const noexcept { return d_; }
  std::optional<int> channel() const noexcept { return k_; }
  bool is_zero() const noexcept;
  double operator()(double r, double t) const noexcept;

 private:
  ForcingGrid grid_;
  std::vector<double> samples_;
  int d_;
  std::optional<int> k_;
};

/// u(r, t) = int_0^t S(t - tau)(0, F(tau))(r) dtau, the zero-data solution of
/// u_tt - Laplace u = F. Trapezoid in tau on the forcing grid, with linear
/// interpolation of F at the ends of [0, t]; signed for t < 0.
class DuhamelOperator {
 public:
  DuhamelOperator(const ForcingField& forcing, int d);

  double operator()(double r, double t) const;

 private:
  double slice_value(std::size_t j, double r, double s) const;
  double mixed_value(std::size_t j, double lam, double r, double s) const;

  const ForcingField* forcing_;
  int d_;
  const SymmetricKernel* kernel_;
  // d = 3: prefix_[j][i] = int_{r_0}^{r_i} rho F(rho, t_j) drho
  std::vector<std::vector<double>> prefix_;
};

double duhamel(const ForcingField& forcing, int d, double r, double t);

/// Pointwise shell bound: max over (r, t) samples of
/// |S(t)(0,u1)(r)| r^{(d-1)/2} / (a^{(d-1)(1/2-1/qt)} (b-a)^{1-1/qt} ||u1||_{L^qt(R^d)}).
/// u1 is supported in the shell a < r < b with b / a <= 2.
double pointwise_bound_ratio(const SampledProfile& u1, double a, double b, int d, double qt,
                             std::span<const std::pair<double, double>> samples);

/// ||f||_{L^q(R^d)} for a radial profile on a nonnegative r-grid, including sigma_{d-1} r^{d-1}.
double radial_lq_norm(const SampledProfile& f, int d, double q);

}  // namespace channelwave
