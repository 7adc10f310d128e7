#include "channelwave/exterior_nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "channelwave/experiments.hpp"
#include "channelwave/parallel.hpp"
#include "channelwave/quadrature.hpp"

namespace channelwave {
namespace {

double nonlinearity(double u, int d, int sign) {
  return sign * std::pow(std::abs(u), 4.0 / (d - 2)) * u;
}

ForcingGrid exterior_grid(const ExteriorProblem& prob, const PicardOptions& opt) {
  if (opt.resolution < 4) throw Error(ErrorKind::Configuration, "exterior grid resolution must be >= 4");
  if (!(prob.T > 0.0) || prob.R < 0.0) throw Error(ErrorKind::Configuration, "exterior problem needs T > 0, R >= 0");
  const double extent = opt.r_extent > 0.0 ? opt.r_extent : prob.linear.reach() + prob.T + 2.0 / opt.resolution;
  const auto nr = static_cast<std::size_t>(std::ceil(extent * opt.resolution)) + 1;
  const auto nt = static_cast<std::size_t>(std::ceil(2.0 * prob.T * opt.resolution)) + 1;
  return {0.0, extent / static_cast<double>(nr - 1), nr, -prob.T, 2.0 * prob.T / static_cast<double>(nt - 1), nt};
}

bool in_exterior(double r, double t, double R) { return r > 0.0 && r > R + std::abs(t); }

ExteriorSolution sample_exterior(const ForcingGrid& grid, double R, double T,
                                 const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.nr * grid.nt, 0.0);
  parallel_for(grid.nt, [&](std::size_t j) {
    const double t = grid.t(j);
    for (std::size_t i = 0; i < grid.nr; ++i) {
      const double r = grid.r(i);
      if (in_exterior(r, t, R)) v[j * grid.nr + i] = f(r, t);
    }
  });
  return ExteriorSolution(grid, std::move(v), R, T);
}

}  // namespace

LinearEvolution::LinearEvolution(const InitialDataPair& data)
    : d_(data.d), u0_(data.u0), u1_(data.u1), grid_(data.rgrid) {
  if (data.d != 3) throw Error(ErrorKind::Domain, "sampled data evolve by d'Alembert only in d = 3; pass a profile");
  if (!(grid_.spacing > 0.0) || !(grid_.origin > 0.0)) throw Error(ErrorKind::Domain, "radial grid must be positive");
  if (u0_.size() != grid_.length || u1_.size() != grid_.length) {
    throw Error(ErrorKind::InvalidInput, "data length does not match the radial grid");
  }
  for (std::size_t i = 0; i < grid_.length; ++i) {
    if (!std::isfinite(u0_[i]) || !std::isfinite(u1_[i])) throw Error(ErrorKind::InvalidInput, "non-finite data");
    if (u0_[i] != 0.0 || u1_[i] != 0.0) {
      zero_ = false;
      reach_ = grid_.position(i) + grid_.spacing;
    }
  }
  prefix_.assign(grid_.length, 0.0);
  const GaussRule& rule = gauss_legendre(2);
  for (std::size_t i = 0; i + 1 < grid_.length; ++i) {
    const double a = grid_.position(i);
    const double g0 = u1_[i];
    const double g1 = u1_[i + 1];
    prefix_[i + 1] = prefix_[i] + integrate(rule, a, a + grid_.spacing, [&](double s) {
                       const double lam = (s - a) / grid_.spacing;
                       return s * ((1.0 - lam) * g0 + lam * g1);
                     });
  }
}

LinearEvolution::LinearEvolution(RadialFreeWave wave) : d_(wave.dimension()) {
  const Interval supp = wave.profile().support();
  zero_ = wave.profile().is_zero();
  reach_ = zero_ ? 0.0 : std::max(std::abs(supp.lo), std::abs(supp.hi));
  wave_.emplace(std::move(wave));
}

double LinearEvolution::u0_at(double x) const noexcept {
  const double u = (x - grid_.origin) / grid_.spacing;
  if (u < 0.0 || u > static_cast<double>(grid_.length - 1)) return 0.0;
  const auto n = std::min(static_cast<std::size_t>(u), grid_.length - 2);
  const double lam = u - static_cast<double>(n);
  return (1.0 - lam) * u0_[n] + lam * u0_[n + 1];
}

double LinearEvolution::operator()(double r, double t) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "linear evolution evaluated at r <= 0");
  if (zero_) return 0.0;
  if (wave_) return wave_->value(r, t);
  // W(x) = int_0^x s u1(s) ds
  auto W = [&](double x) {
    const double u = (x - grid_.origin) / grid_.spacing;
    if (u <= 0.0) return 0.0;
    if (u >= static_cast<double>(grid_.length - 1)) return prefix_.back();
    const auto n = static_cast<std::size_t>(u);
    const double a = grid_.position(n);
    const double g0 = u1_[n];
    const double g1 = u1_[n + 1];
    return prefix_[n] + integrate(gauss_legendre(2), a, x, [&](double s) {
             const double lam = (s - a) / grid_.spacing;
             return s * ((1.0 - lam) * g0 + lam * g1);
           });
  };
  const double p = r + t;
  const double q = r - t;
  const auto v = [&](double s) { return s * u0_at(std::abs(s)); };
  return (v(p) + v(q) + W(std::abs(p)) - W(std::abs(q))) / (2.0 * r);
}

double default_delta(int d) {
  require_odd_dimension(d, 3, 3);
  return 3.9;
}

ExteriorSolution::ExteriorSolution(ForcingGrid grid, std::vector<double> values, double R, double T)
    : grid_(grid), values_(std::move(values)), R_(R), T_(T) {
  if (values_.size() != grid_.nr * grid_.nt) throw Error(ErrorKind::InvalidInput, "solution sample count mismatch");
}

double ExteriorSolution::operator()(double r, double t) const noexcept {
  if (!in_exterior(r, t, R_) || std::abs(t) > T_) return 0.0;
  const double u = (r - grid_.r_origin) / grid_.r_spacing;
  const double w = (t - grid_.t_origin) / grid_.t_spacing;
  if (u < 0.0 || w < 0.0 || u > static_cast<double>(grid_.nr - 1) || w > static_cast<double>(grid_.nt - 1)) {
    return 0.0;
  }
  const auto i = std::min(static_cast<std::size_t>(u), grid_.nr - 2);
  const auto j = std::min(static_cast<std::size_t>(w), grid_.nt - 2);
  const double a = u - static_cast<double>(i);
  const double b = w - static_cast<double>(j);
  const auto at = [&](std::size_t jj, std::size_t ii) { return values_[jj * grid_.nr + ii]; };
  return (1.0 - b) * ((1.0 - a) * at(j, i) + a * at(j, i + 1)) + b * ((1.0 - a) * at(j + 1, i) + a * at(j + 1, i + 1));
}

RadialField ExteriorSolution::as_field() const {
  RadialField f;
  f.eval = [this](double r, double t) { return (*this)(r, t); };
  f.y_min = R_;
  f.time_support = {-T_, T_};
  return f;
}

ChannelWindow exterior_channels(const ExteriorProblem& prob, const PicardOptions& opt) {
  const ForcingGrid g = exterior_grid(prob, opt);
  const double extent = g.r(g.nr - 1);
  const double floor_y = std::max(prob.R, 2.0 * g.r_spacing);
  return {static_cast<int>(std::floor(std::log2(floor_y))), static_cast<int>(std::ceil(std::log2(extent)))};
}

double y_norm(const ExteriorSolution& u, int d, const ChannelWindow& w) {
  return y_norm(u.as_field(), d, w.jmin, w.jmax, {}, experiment_quadrature());
}

double z_norm_of_nonlinearity(const ExteriorSolution& u, const ExteriorProblem& prob, const ChannelWindow& w) {
  RadialField f = u.as_field();
  const int d = prob.dimension();
  f.eval = [&u, d, sign = prob.sign](double r, double t) { return nonlinearity(u(r, t), d, sign); };
  return z_norm(f, d, w.jmin, w.jmax, {}, experiment_quadrature());
}

ExteriorSolution difference(const ExteriorSolution& a, const ExteriorSolution& b) {
  if (a.values().size() != b.values().size()) throw Error(ErrorKind::InvalidInput, "solutions live on different grids");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  return ExteriorSolution(a.grid(), std::move(v), a.R(), a.T());
}

ExteriorSolution picard_map(const ExteriorProblem& prob, const ExteriorSolution& free_part,
                            const ExteriorSolution& u) {
  const ForcingGrid& grid = u.grid();
  const int d = prob.dimension();
  std::vector<double> f(u.values().size(), 0.0);
  for (std::size_t j = 0; j < grid.nt; ++j) {
    for (std::size_t i = 0; i < grid.nr; ++i) {
      const std::size_t n = j * grid.nr + i;
      if (in_exterior(grid.r(i), grid.t(j), prob.R)) f[n] = nonlinearity(u.values()[n], d, prob.sign);
    }
  }
  const ForcingField forcing(grid, std::move(f), d);
  const DuhamelOperator duhamel_op(forcing, d);
  std::vector<double> v(u.values().size(), 0.0);
  parallel_for(grid.nt, [&](std::size_t j) {
    const double t = grid.t(j);
    for (std::size_t i = 0; i < grid.nr; ++i) {
      const double r = grid.r(i);
      const std::size_t n = j * grid.nr + i;
      if (in_exterior(r, t, prob.R)) v[n] = free_part.values()[n] + duhamel_op(r, t);
    }
  });
  return ExteriorSolution(grid, std::move(v), prob.R, prob.T);
}

PicardResult picard_solve(const ExteriorProblem& prob, const PicardOptions& opt) {
  if (prob.sign != 1 && prob.sign != -1) throw Error(ErrorKind::Configuration, "sign must be +1 or -1");
  if (opt.max_iter < 1) throw Error(ErrorKind::Configuration, "max_iter must be positive");
  const ForcingGrid grid = exterior_grid(prob, opt);
  const ChannelWindow window = exterior_channels(prob, opt);
  const int d = prob.dimension();
  const double power = (d + 2.0) / (d - 2.0);

  ExteriorSolution free_part =
      sample_exterior(grid, prob.R, prob.T, [&](double r, double t) { return prob.linear(r, t); });
  PicardTrace trace;
  trace.free_y_norm = y_norm(free_part, d, window);
  if (opt.delta > 0.0 && trace.free_y_norm > opt.delta) {
    throw Error(ErrorKind::NotSmallData, "free part Y-norm exceeds the smallness threshold");
  }
  trace.tol = opt.tol_factor * (opt.delta > 0.0 ? opt.delta : trace.free_y_norm);

  ExteriorSolution u = free_part;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double yu = y_norm(u, d, window);
    const double zf = z_norm_of_nonlinearity(u, prob, window);
    trace.nonlinear_bound.push_back(yu > 0.0 ? zf / std::pow(yu, power) : 0.0);

    ExteriorSolution next = picard_map(prob, free_part, u);
    const double diff = y_norm(difference(next, u), d, window);
    trace.y_norms.push_back(y_norm(next, d, window));
    if (!trace.diff_norms.empty() && trace.diff_norms.back() > 0.0) {
      trace.contraction.push_back(diff / trace.diff_norms.back());
    }
    trace.diff_norms.push_back(diff);
    trace.iterations = it;
    u = std::move(next);
    if (diff <= trace.tol) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(u), std::move(free_part), std::move(trace)};
}

double lipschitz_check(const ExteriorProblem& a, const ExteriorProblem& b, const PicardOptions& opt) {
  if (a.R != b.R || a.T != b.T || a.dimension() != b.dimension()) {
    throw Error(ErrorKind::Precondition, "problems must share R, T and d");
  }
  PicardOptions shared = opt;
  if (shared.r_extent <= 0.0) {
    shared.r_extent = std::max(a.linear.reach(), b.linear.reach()) + a.T + 2.0 / opt.resolution;
  }
  const PicardResult ra = picard_solve(a, shared);
  const PicardResult rb = picard_solve(b, shared);
  const ChannelWindow window = exterior_channels(a, shared);
  const double base = y_norm(difference(ra.free_part, rb.free_part), a.dimension(), window);
  if (!(base > 0.0)) throw Error(ErrorKind::UndefinedRatio, "identical data");
  return y_norm(difference(ra.solution, rb.solution), a.dimension(), window) / base;
}

double radius_for_global(const LinearEvolution& linear, double target, int i_lo, int i_hi) {
  if (!(target > 0.0)) throw Error(ErrorKind::Configuration, "target smallness must be positive");
  if (linear.is_zero()) return 0.0;
  const int d = linear.dimension();
  const int jmax = static_cast<int>(std::ceil(std::log2(linear.reach()))) + 1;
  const int jmin = i_lo - 4;
  auto norm_at = [&](double R) {
    RadialField f{[&linear](double r, double t) { return linear(r, t); }, R};
    return y_norm(f, d, jmin, std::max(jmax, jmin), {}, experiment_quadrature());
  };
  if (norm_at(0.0) < target) return 0.0;
  for (int i = i_lo; i <= i_hi; ++i) {
    const double R = std::ldexp(1.0, i);
    if (norm_at(R) < target) return R;
  }
  throw Error(ErrorKind::Range, "no dyadic radius reaches the target smallness");
}

}  // namespace channelwave
