#include "channelwave/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "channelwave/quadrature.hpp"

namespace channelwave {
namespace {

double ipow(double x, int e) noexcept {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= x;
  return acc;
}

double monomial_value(const KernelMonomial& m, double a, double b, double p, double q) noexcept {
  return m.coef * ipow(a, m.powers[0]) * ipow(b, m.powers[1]) * ipow(p, m.powers[2]) * ipow(q, m.powers[3]);
}

std::vector<KernelMonomial> differentiate(const std::vector<KernelMonomial>& terms) {
  std::map<std::array<int, 4>, double> acc;
  for (const auto& term : terms) {
    const auto [i, j, k, l] = term.powers;
    if (i > 0) acc[{i - 1, j, k + 1, l}] += 2.0 * i * term.coef;
    if (j > 0) acc[{i, j - 1, k, l + 1}] += 2.0 * j * term.coef;
    if (k > 0) acc[{i, j, k - 1, l}] += k * term.coef;
    if (l > 0) acc[{i, j, k, l - 1}] -= l * term.coef;
  }
  std::vector<KernelMonomial> out;
  for (const auto& [powers, coef] : acc) {
    if (coef != 0.0) out.push_back({coef, powers});
  }
  return out;
}

// Value of the piecewise-linear interpolant of g at x, zero outside the grid.
double sample_at(RadialSamples g, double x) noexcept {
  const double u = (x - g.origin) / g.spacing;
  if (u < 0.0 || u > static_cast<double>(g.values.size() - 1)) return 0.0;
  const auto n = std::min(static_cast<std::size_t>(u), g.values.size() - 2);
  const double lam = u - static_cast<double>(n);
  return (1.0 - lam) * g.values[n] + lam * g.values[n + 1];
}

// prefix[i] = int_{r_0}^{r_i} rho g(rho) drho, exact for the interpolant.
std::vector<double> rho_prefix(RadialSamples g) {
  const GaussRule& rule = gauss_legendre(2);
  std::vector<double> prefix(g.values.size(), 0.0);
  for (std::size_t i = 0; i + 1 < g.values.size(); ++i) {
    const double a = g.origin + g.spacing * static_cast<double>(i);
    const double g0 = g.values[i];
    const double g1 = g.values[i + 1];
    double cell = 0.0;
    if (g0 != 0.0 || g1 != 0.0) {
      cell = integrate(rule, a, a + g.spacing, [&](double rho) {
        const double lam = (rho - a) / g.spacing;
        return rho * ((1.0 - lam) * g0 + lam * g1);
      });
    }
    prefix[i + 1] = prefix[i] + cell;
  }
  return prefix;
}

double rho_prefix_at(const std::vector<double>& prefix, RadialSamples g, double x) {
  const double u = (x - g.origin) / g.spacing;
  if (u <= 0.0) return 0.0;
  if (u >= static_cast<double>(g.values.size() - 1)) return prefix.back();
  const auto n = static_cast<std::size_t>(u);
  const double a = g.origin + g.spacing * static_cast<double>(n);
  const double g0 = g.values[n];
  const double g1 = g.values[n + 1];
  if (x <= a || (g0 == 0.0 && g1 == 0.0)) return prefix[n];
  return prefix[n] + integrate(gauss_legendre(2), a, x, [&](double rho) {
           const double lam = (rho - a) / g.spacing;
           return rho * ((1.0 - lam) * g0 + lam * g1);
         });
}

double d3_half_wave(const std::vector<double>& prefix, RadialSamples g, double r, double t) {
  if (t == 0.0) return 0.0;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double s = std::abs(t);
  const double last = g.origin + g.spacing * static_cast<double>(g.values.size() - 1);
  const double lo = std::max(std::abs(r - s), g.origin);
  const double hi = std::min(r + s, last);
  if (!(hi > lo)) return 0.0;
  return sign * (rho_prefix_at(prefix, g, hi) - rho_prefix_at(prefix, g, lo)) / (2.0 * r);
}

RadialSamples as_radial(const SampledProfile& p) {
  if (p.origin() < 0.0) throw Error(ErrorKind::InvalidInput, "radial profile must live on r >= 0");
  return {p.samples(), p.origin(), p.spacing()};
}

}  // namespace

double SymmetricKernel::derivative(int m, double rho, double t, double r) const noexcept {
  const double p = r + t;
  const double q = r - t;
  const double a = (p - rho) * (p + rho);
  const double b = (rho - q) * (rho + q);
  double acc = 0.0;
  for (const auto& term : t_deriv[m]) acc += monomial_value(term, a, b, p, q);
  return acc;
}

double SymmetricKernel::product(double rho, double t, double r) const noexcept {
  return ipow((rho + t + r) * (rho + t - r) * (r + rho - t) * (r + t - rho), exponent);
}

SymmetricKernel build_kernel(int d) {
  require_odd_dimension(d, 3, 9);
  SymmetricKernel k;
  k.d = d;
  k.exponent = (d - 3) / 2;
  const int n = k.exponent;

  k.t_deriv.push_back({KernelMonomial{1.0, {n, n, 0, 0}}});
  for (int m = 1; m <= n; ++m) k.t_deriv.push_back(differentiate(k.t_deriv.back()));

  // (t^{-1} d_t) applied n times to the integral: c t^e D^m -> c e t^{e-2} D^m + c t^{e-1} D^{m+1}
  struct Term {
    double c;
    int e;
    int m;
  };
  std::vector<Term> terms{{1.0, 0, 0}};
  for (int step = 0; step < n; ++step) {
    std::vector<Term> next;
    for (const auto& term : terms) {
      if (term.e != 0) next.push_back({term.c * term.e, term.e - 2, term.m});
      next.push_back({term.c, term.e - 1, term.m + 1});
    }
    terms = std::move(next);
  }
  k.am.assign(n + 1, 0.0);
  k.t_power.assign(n + 1, 0);
  for (int m = 0; m <= n; ++m) k.t_power[m] = m - 2 * n;
  for (const auto& term : terms) k.am[term.m] += term.c;

  double double_factorial = 1.0;
  for (int i = d - 2; i > 1; i -= 2) double_factorial *= i;
  k.normalization = sphere_area(d - 2) / (sphere_area(d - 1) * ipow(4.0, n) * double_factorial);
  return k;
}

const SymmetricKernel& kernel_for(int d) {
  require_odd_dimension(d, 3, 9);
  static std::once_flag flags[4];
  static SymmetricKernel kernels[4];
  const int slot = (d - 3) / 2;
  std::call_once(flags[slot], [&] { kernels[slot] = build_kernel(d); });
  return kernels[slot];
}

double half_wave_samples(const SymmetricKernel& kernel, RadialSamples g, double r, double t) {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "half wave evaluated at r <= 0");
  if (t == 0.0 || g.values.size() < 2) return 0.0;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double s = std::abs(t);
  const double last = g.origin + g.spacing * static_cast<double>(g.values.size() - 1);
  const double lo = std::max(std::abs(r - s), g.origin);
  const double hi = std::min(r + s, last);
  if (!(hi > lo)) return 0.0;

  const int n = kernel.exponent;
  std::vector<double> tcoef(n + 1);
  for (int m = 0; m <= n; ++m) tcoef[m] = kernel.am[m] * std::pow(s, kernel.t_power[m]);

  const GaussRule& rule = gauss_legendre(8);
  const long count = static_cast<long>(g.values.size());
  const long first = std::clamp(static_cast<long>(std::floor((lo - g.origin) / g.spacing)), 0L, count - 2);
  const long stop = std::clamp(static_cast<long>(std::ceil((hi - g.origin) / g.spacing)), 1L, count - 1);
  double acc = 0.0;
  for (long i = first; i < stop; ++i) {
    const double a = g.origin + g.spacing * static_cast<double>(i);
    const double x0 = std::max(lo, a);
    const double x1 = std::min(hi, a + g.spacing);
    const double g0 = g.values[i];
    const double g1 = g.values[i + 1];
    if (!(x1 > x0) || (g0 == 0.0 && g1 == 0.0)) continue;
    acc += integrate(rule, x0, x1, [&](double rho) {
      const double lam = (rho - a) / g.spacing;
      double poly = 0.0;
      for (int m = 0; m <= n; ++m) poly += tcoef[m] * kernel.derivative(m, rho, s, r);
      return rho * ((1.0 - lam) * g0 + lam * g1) * poly;
    });
  }
  return sign * kernel.normalization * std::pow(r, 2 - kernel.d) * acc;
}

double half_wave(const SampledProfile& u1, int d, double r, double t) {
  return half_wave_samples(kernel_for(d), as_radial(u1), r, t);
}

HalfWave::HalfWave(SampledProfile u1, int d) : u1_(std::move(u1)), d_(d), kernel_(&kernel_for(d)) {
  const RadialSamples g = as_radial(u1_);
  if (d_ == 3) prefix_ = rho_prefix(g);
}

double HalfWave::operator()(double r, double t) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "half wave evaluated at r <= 0");
  const RadialSamples g = as_radial(u1_);
  if (d_ == 3) return d3_half_wave(prefix_, g, r, t);
  return half_wave_samples(*kernel_, g, r, t);
}

ForcingField::ForcingField(ForcingGrid grid, std::vector<double> samples, int d, std::optional<int> k)
    : grid_(grid), samples_(std::move(samples)), d_(d), k_(k) {
  require_odd_dimension(d_, 3, 13);
  if (!(grid_.r_spacing > 0.0) || !(grid_.t_spacing > 0.0) || grid_.r_origin < 0.0 || grid_.nr < 2 ||
      grid_.nt < 2) {
    throw Error(ErrorKind::InvalidInput, "forcing grid must be positive with at least 2x2 nodes");
  }
  if (samples_.size() != grid_.nr * grid_.nt) throw Error(ErrorKind::InvalidInput, "forcing sample count mismatch");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "forcing has non-finite samples");
  }
  if (k_) {
    const double lo = std::ldexp(1.0, *k_);
    const double slack = grid_.r_spacing * (1.0 + 1e-9);
    for (std::size_t j = 0; j < grid_.nt; ++j) {
      const double at = std::abs(grid_.t(j));
      for (std::size_t i = 0; i < grid_.nr; ++i) {
        if (samples_[j * grid_.nr + i] == 0.0) continue;
        const double r = grid_.r(i);
        if (r < at + lo - slack || r > at + 2.0 * lo + slack) {
          throw Error(ErrorKind::Window, "channel-tagged forcing is nonzero outside its channel");
        }
      }
    }
  }
}

ForcingField ForcingField::sample(const std::function<double(double, double)>& f, const ForcingGrid& grid, int d,
                                  std::optional<int> k) {
  std::vector<double> v(grid.nr * grid.nt, 0.0);
  for (std::size_t j = 0; j < grid.nt; ++j) {
    const double t = grid.t(j);
    for (std::size_t i = 0; i < grid.nr; ++i) {
      const double r = grid.r(i);
      if (k) {
        const double lo = std::abs(t) + std::ldexp(1.0, *k);
        if (r < lo || r >= lo + std::ldexp(1.0, *k)) continue;
      }
      v[j * grid.nr + i] = f(r, t);
    }
  }
  return ForcingField(grid, std::move(v), d, k);
}

bool ForcingField::is_zero() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v == 0.0; });
}

double ForcingField::operator()(double r, double t) const noexcept {
  const double u = (r - grid_.r_origin) / grid_.r_spacing;
  const double w = (t - grid_.t_origin) / grid_.t_spacing;
  if (u < 0.0 || w < 0.0 || u > static_cast<double>(grid_.nr - 1) || w > static_cast<double>(grid_.nt - 1)) {
    return 0.0;
  }
  const auto i = std::min(static_cast<std::size_t>(u), grid_.nr - 2);
  const auto j = std::min(static_cast<std::size_t>(w), grid_.nt - 2);
  const double a = u - static_cast<double>(i);
  const double b = w - static_cast<double>(j);
  const auto at = [&](std::size_t jj, std::size_t ii) { return samples_[jj * grid_.nr + ii]; };
  return (1.0 - b) * ((1.0 - a) * at(j, i) + a * at(j, i + 1)) + b * ((1.0 - a) * at(j + 1, i) + a * at(j + 1, i + 1));
}

DuhamelOperator::DuhamelOperator(const ForcingField& forcing, int d)
    : forcing_(&forcing), d_(d), kernel_(&kernel_for(d)) {
  if (d_ == 3) {
    const auto& g = forcing.grid();
    prefix_.reserve(g.nt);
    for (std::size_t j = 0; j < g.nt; ++j) prefix_.push_back(rho_prefix({forcing.slice(j), g.r_origin, g.r_spacing}));
  }
}

double DuhamelOperator::slice_value(std::size_t j, double r, double s) const {
  const auto& g = forcing_->grid();
  const RadialSamples slice{forcing_->slice(j), g.r_origin, g.r_spacing};
  if (d_ == 3) return d3_half_wave(prefix_[j], slice, r, s);
  return half_wave_samples(*kernel_, slice, r, s);
}

double DuhamelOperator::mixed_value(std::size_t j, double lam, double r, double s) const {
  double v = 0.0;
  if (lam < 1.0) v += (1.0 - lam) * slice_value(j, r, s);
  if (lam > 0.0) v += lam * slice_value(j + 1, r, s);
  return v;
}

double DuhamelOperator::operator()(double r, double t) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "Duhamel term evaluated at r <= 0");
  if (t == 0.0) return 0.0;
  const auto& g = forcing_->grid();
  const double t_last = g.t(g.nt - 1);
  const double a = std::max(std::min(0.0, t), g.t_origin);
  const double b = std::min(std::max(0.0, t), t_last);
  if (!(b > a)) return 0.0;

  auto integrand = [&](double tau) {
    const double w = (tau - g.t_origin) / g.t_spacing;
    auto j = static_cast<std::size_t>(std::max(0.0, std::floor(w)));
    j = std::min(j, g.nt - 2);
    const double lam = std::clamp(w - static_cast<double>(j), 0.0, 1.0);
    return mixed_value(j, lam, r, t - tau);
  };

  std::vector<double> nodes{a};
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - g.t_origin) / g.t_spacing) + 1.0));
  for (std::size_t j = first; j < g.nt && g.t(j) < b; ++j) {
    if (g.t(j) > a) nodes.push_back(g.t(j));
  }
  nodes.push_back(b);

  double acc = 0.0;
  double prev = integrand(nodes[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double cur = integrand(nodes[i]);
    acc += 0.5 * (nodes[i] - nodes[i - 1]) * (prev + cur);
    prev = cur;
  }
  return t > 0.0 ? acc : -acc;
}

double duhamel(const ForcingField& forcing, int d, double r, double t) { return DuhamelOperator(forcing, d)(r, t); }

double radial_lq_norm(const SampledProfile& f, int d, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error(ErrorKind::Domain, "L^q exponent must lie in [1, inf)");
  const RadialSamples g = as_radial(f);
  const GaussRule& rule = gauss_legendre(8);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < g.values.size(); ++i) {
    if (g.values[i] == 0.0 && g.values[i + 1] == 0.0) continue;
    const double a = f.position(i);
    acc += integrate(rule, a, a + g.spacing,
                     [&](double r) { return std::pow(std::abs(sample_at(g, r)), q) * std::pow(r, d - 1); });
  }
  return std::pow(sphere_area(d - 1) * acc, 1.0 / q);
}

double pointwise_bound_ratio(const SampledProfile& u1, double a, double b, int d, double qt,
                             std::span<const std::pair<double, double>> samples) {
  if (!(a > 0.0) || !(b > a) || b / a > 2.0) throw Error(ErrorKind::Precondition, "shell must satisfy 0 < a < b <= 2a");
  if (!(qt >= 1.0) || !std::isfinite(qt)) throw Error(ErrorKind::Domain, "q~ must lie in [1, inf)");
  if (u1.is_zero()) return 0.0;
  const HalfWave wave(u1, d);
  const double denom =
      std::pow(a, (d - 1) * (0.5 - 1.0 / qt)) * std::pow(b - a, 1.0 - 1.0 / qt) * radial_lq_norm(u1, d, qt);
  double best = 0.0;
  for (const auto& [r, t] : samples) {
    best = std::max(best, std::abs(wave(r, t)) * std::pow(r, 0.5 * (d - 1)));
  }
  return best / denom;
}

}  // namespace channelwave
