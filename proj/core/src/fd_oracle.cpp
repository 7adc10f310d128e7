#include "channelwave/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace channelwave {

void validate_grid(const FdGrid& grid) {
  require_odd_dimension(grid.d, 3, 13);
  if (grid.nr < 64) throw Error(ErrorKind::Configuration, "finite-difference grid needs nr >= 64");
  if (!(grid.rmax > 0.0) || !(grid.dt > 0.0) || grid.nt < 0) {
    throw Error(ErrorKind::Configuration, "finite-difference grid must have rmax > 0, dt > 0, nt >= 0");
  }
  if (grid.dt > 0.5 * grid.dr() * (1.0 + 1e-12)) throw Error(ErrorKind::Configuration, "CFL violated: dt > dr / 2");
}

GridField::GridField(double dr, int nr, double dt, int nt, std::vector<double> values)
    : dr_(dr), nr_(nr), dt_(dt), nt_(nt), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(nr_ + 1) * static_cast<std::size_t>(nt_ + 1)) {
    throw Error(ErrorKind::InvalidInput, "grid field sample count mismatch");
  }
}

std::span<const double> GridField::row(int n) const noexcept {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(n) * (nr_ + 1), nr_ + 1);
}

double GridField::operator()(double r, double t) const noexcept {
  const double u = r / dr_;
  const double w = t / dt_;
  if (u < 0.0 || w < 0.0 || u > nr_ || w > nt_) return 0.0;
  const int i = std::min(static_cast<int>(u), nr_ - 1);
  const int n = std::min(static_cast<int>(w), std::max(nt_ - 1, 0));
  const double a = u - i;
  if (nt_ == 0) return (1.0 - a) * row(0)[i] + a * row(0)[i + 1];
  const double b = w - n;
  const auto lo = row(n);
  const auto hi = row(n + 1);
  return (1.0 - b) * ((1.0 - a) * lo[i] + a * lo[i + 1]) + b * ((1.0 - a) * hi[i] + a * hi[i + 1]);
}

RadialField GridField::as_field() const {
  RadialField f;
  f.eval = [*this](double r, double t) { return (*this)(r, t); };
  f.time_support = {0.0, dt_ * nt_};
  return f;
}

FdSolution fd_solve(const std::function<double(double)>& u0, const std::function<double(double)>& u1,
                    const ForcingField* forcing, const FdGrid& grid, int store_every) {
  validate_grid(grid);
  if (store_every < 1) throw Error(ErrorKind::Configuration, "store_every must be positive");
  const int n = grid.nr;
  const int d = grid.d;
  const double dr = grid.dr();
  const double dt = grid.dt;

  // face[i] = r_{i+1/2}^{d-1} / dr, vol[i] = cell volume / sigma_{d-1}
  std::vector<double> face(n), vol(n + 1);
  for (int i = 0; i < n; ++i) face[i] = std::pow((i + 0.5) * dr, d - 1) / dr;
  vol[0] = std::pow(0.5 * dr, d) / d;
  for (int i = 1; i <= n; ++i) vol[i] = (std::pow((i + 0.5) * dr, d) - std::pow((i - 0.5) * dr, d)) / d;

  auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
    out[0] = face[0] * (u[1] - u[0]) / vol[0];
    for (int i = 1; i < n; ++i) out[i] = (face[i] * (u[i + 1] - u[i]) - face[i - 1] * (u[i] - u[i - 1])) / vol[i];
    out[n] = 0.0;
  };
  auto add_forcing = [&](std::vector<double>& out, double t) {
    if (forcing == nullptr) return;
    for (int i = 0; i < n; ++i) out[i] += (*forcing)(i * dr, t);
  };
  auto energy = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double kinetic = 0.0;
    double potential = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = (b[i] - a[i]) / dt;
      kinetic += vol[i] * v * v;
      potential += face[i] * (a[i + 1] - a[i]) * (b[i + 1] - b[i]);
    }
    return 0.5 * (kinetic + potential);
  };

  std::vector<double> prev(n + 1), cur(n + 1), next(n + 1), lap(n + 1);
  for (int i = 0; i < n; ++i) prev[i] = u0(i * dr);
  prev[n] = 0.0;

  const int stored = grid.nt / store_every;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(stored + 1) * (n + 1));
  out.insert(out.end(), prev.begin(), prev.end());
  std::vector<double> energies;

  if (grid.nt >= 1) {
    apply(prev, lap);
    add_forcing(lap, 0.0);
    for (int i = 0; i < n; ++i) cur[i] = prev[i] + dt * u1(i * dr) + 0.5 * dt * dt * lap[i];
    cur[n] = 0.0;
    energies.push_back(energy(prev, cur));
    if (store_every == 1) out.insert(out.end(), cur.begin(), cur.end());
  }
  for (int step = 2; step <= grid.nt; ++step) {
    apply(cur, lap);
    add_forcing(lap, (step - 1) * dt);
    for (int i = 0; i < n; ++i) next[i] = 2.0 * cur[i] - prev[i] + dt * dt * lap[i];
    next[n] = 0.0;
    energies.push_back(energy(cur, next));
    std::swap(prev, cur);
    std::swap(cur, next);
    if (step % store_every == 0) out.insert(out.end(), cur.begin(), cur.end());
  }
  return {GridField(dr, n, dt * store_every, stored, std::move(out)), std::move(energies)};
}

double relative_l2_error(const GridField& field, int n, const std::function<double(double, double)>& exact, int d) {
  const auto row = field.row(n);
  const double t = field.t(n);
  double err = 0.0;
  double ref = 0.0;
  for (int i = 1; i <= field.nr(); ++i) {
    const double r = field.r(i);
    const double w = std::pow(r, d - 1);
    const double e = exact(r, t);
    err += w * (row[i] - e) * (row[i] - e);
    ref += w * e * e;
  }
  if (!(ref > 0.0)) return std::sqrt(err);
  return std::sqrt(err / ref);
}

ConvergenceResult convergence_order(std::span<const double> errors) {
  ConvergenceResult res;
  res.errors.assign(errors.begin(), errors.end());
  if (errors.size() < 2) {
    res.flagged = true;
    res.order = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(errors[i] < errors[i - 1]) || !(errors[i] > 0.0)) res.flagged = true;
  }
  res.order = res.flagged ? std::numeric_limits<double>::quiet_NaN()
                          : std::log2(errors[errors.size() - 2] / errors.back());
  return res;
}

ConvergenceResult convergence_order(const std::function<double(int)>& error, int levels) {
  std::vector<double> errors;
  for (int level = 0; level < levels; ++level) errors.push_back(error(level));
  return convergence_order(errors);
}

}  // namespace channelwave
