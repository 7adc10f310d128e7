#pragma once

#include <optional>
#include <vector>

#include "channelwave/channel_norms.hpp"
#include "channelwave/propagator.hpp"
#include "channelwave/radial_wavefield.hpp"

namespace channelwave {

/// Free evolution S(t)(u0, u1) on the exterior cone r > |t|. Sampled data use
/// the d = 3 d'Alembert form r u = (1/2)[(r+t)u0(r+t) + (r-t)u0(r-t)] + (1/2) int s u1(s) ds;
/// a profile-backed wave works in any odd d.
class LinearEvolution {
 public:
  explicit LinearEvolution(const InitialDataPair& data);
  explicit LinearEvolution(RadialFreeWave wave);

  double operator()(double r, double t) const;
  int dimension() const noexcept { return d_; }
  /// Radius beyond which the data vanish.
  double reach() const noexcept { return reach_; }
  bool is_zero() const noexcept { return zero_; }

 private:
  double u0_at(double r) const noexcept;

  int d_ = 3;
  double reach_ = 0.0;
  bool zero_ = true;
  std::optional<RadialFreeWave> wave_;
  std::vector<double> u0_;
  std::vector<double> u1_;
  RadialGrid grid_{};
  std::vector<double> prefix_;
};

struct ExteriorProblem {
  LinearEvolution linear;
  double R = 0.0;
  /// F(u) = sign |u|^{4/(d-2)} u; sign = -1 is defocusing for u_tt - Laplace u = F(u).
  int sign = -1;
  /// Bounded window [-T, T].
  double T = 1.0;
  double C_F = 1.0;

  int dimension() const noexcept { return linear.dimension(); }
};

struct PicardOptions {
  int max_iter = 12;
  /// Stop when the Y-norm of successive differences drops below tol_factor * delta.
  double tol_factor = 1e-4;
  /// Smallness threshold for ||chi_R S_L(data)||_Y.
  double delta = 0.0;
  /// Nodes per unit length in r and t.
  int resolution = 24;
  /// Outer radius of the grid; 0 picks reach + T.
  double r_extent = 0.0;
};

/// Calibrated smallness threshold for d = 3: the free-part Y-norm at which the
/// measured contraction factor reaches 1/2 on the bump calibration family.
double default_delta(int d);

/// Sampled solution on the exterior grid, zero off Omega_R cap [-T, T].
class ExteriorSolution {
 public:
  ExteriorSolution(ForcingGrid grid, std::vector<double> values, double R, double T);

  double operator()(double r, double t) const noexcept;
  const ForcingGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double R() const noexcept { return R_; }
  double T() const noexcept { return T_; }
  RadialField as_field() const;

 private:
  ForcingGrid grid_;
  std::vector<double> values_;
  double R_;
  double T_;
};

struct PicardTrace {
  std::vector<double> y_norms;
  std::vector<double> diff_norms;
  /// diff_norms[n] / diff_norms[n-1].
  std::vector<double> contraction;
  /// z_norm(F(u^n)) / y_norm(u^n)^{(d+2)/(d-2)} per iterate.
  std::vector<double> nonlinear_bound;
  double free_y_norm = 0.0;
  double tol = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct PicardResult {
  ExteriorSolution solution;
  ExteriorSolution free_part;
  PicardTrace trace;
};

/// Channel window used for Y and Z norms of exterior fields.
struct ChannelWindow {
  int jmin = 0;
  int jmax = 0;
};
ChannelWindow exterior_channels(const ExteriorProblem& prob, const PicardOptions& opt);

/// Iterates u <- S_L(data) + Duhamel(chi_R F(u)) on Omega_R cap [-T, T].
/// Throws NotSmallData when the free part's Y-norm exceeds opt.delta (when delta > 0).
PicardResult picard_solve(const ExteriorProblem& prob, const PicardOptions& opt = {});

/// One application of the fixed-point map to a sampled field.
ExteriorSolution picard_map(const ExteriorProblem& prob, const ExteriorSolution& free_part,
                            const ExteriorSolution& u);

double y_norm(const ExteriorSolution& u, int d, const ChannelWindow& w);
double z_norm_of_nonlinearity(const ExteriorSolution& u, const ExteriorProblem& prob, const ChannelWindow& w);

/// Difference of two solutions sampled on the same grid.
ExteriorSolution difference(const ExteriorSolution& a, const ExteriorSolution& b);

/// ||u - v||_Y / ||chi_R S_L(data_A - data_B)||_Y for two problems sharing R and T.
double lipschitz_check(const ExteriorProblem& a, const ExteriorProblem& b, const PicardOptions& opt = {});

/// Smallest R in {0} u {2^i : i_lo <= i <= i_hi} with ||chi_R S_L(data)||_{Y(R)} < target.
double radius_for_global(const LinearEvolution& linear, double target, int i_lo = -8, int i_hi = 16);

}  // namespace channelwave
