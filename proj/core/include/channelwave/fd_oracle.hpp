#pragma once

#include <functional>
#include <span>
#include <vector>

#include "channelwave/channel_norms.hpp"
#include "channelwave/propagator.hpp"

namespace channelwave {

/// Nodes r_i = i * rmax / nr, i = 0..nr (u = 0 at rmax); times t_n = n * dt, n = 0..nt.
struct FdGrid {
  double rmax = 1.0;
  int nr = 64;
  double dt = 0.0;
  int nt = 0;
  int d = 3;

  double dr() const noexcept { return rmax / nr; }
};

/// Throws Configuration on a CFL violation (dt > dr / 2) or nr < 64.
void validate_grid(const FdGrid& grid);

/// Uniformly sampled u(r, t), bilinear between nodes, zero outside.
class GridField {
 public:
  GridField(double dr, int nr, double dt, int nt, std::vector<double> values);

  double operator()(double r, double t) const noexcept;
  /// Row of samples at stored time index n.
  std::span<const double> row(int n) const noexcept;
  double r(int i) const noexcept { return dr_ * i; }
  double t(int n) const noexcept { return dt_ * n; }
  int nr() const noexcept { return nr_; }
  int nt() const noexcept { return nt_; }
  RadialField as_field() const;

 private:
  double dr_;
  int nr_;
  double dt_;
  int nt_;
  std::vector<double> values_;
};

struct FdSolution {
  GridField field;
  /// Staggered discrete energy after each step (homogeneous part of the scheme).
  std::vector<double> energy;
};

/// Leapfrog for u_tt = u_rr + (d-1)/r u_r + F with a conservative finite-volume
/// radial operator (exact shell volumes, axis cell 2d(u_1 - u_0)/dr^2).
/// Every store_every-th time level is kept.
FdSolution fd_solve(const std::function<double(double)>& u0, const std::function<double(double)>& u1,
                    const ForcingField* forcing, const FdGrid& grid, int store_every = 1);

/// Relative L^2(r^{d-1} dr) error of stored row n against exact(r, t_n).
double relative_l2_error(const GridField& field, int n, const std::function<double(double, double)>& exact, int d);

struct ConvergenceResult {
  std::vector<double> errors;
  double order = 0.0;
  /// Set when the errors do not decrease monotonically; order is then NaN.
  bool flagged = false;
};

/// Order log2(e_{n-1} / e_n) from errors on successively halved grids.
ConvergenceResult convergence_order(std::span<const double> errors);

/// Runs error(level) for level = 0..levels-1 (each halving dr and dt) and fits the order.
ConvergenceResult convergence_order(const std::function<double(int)>& error, int levels = 3);

}  // namespace channelwave
