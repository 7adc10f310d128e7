#include "channelwave/radial_wavefield.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "channelwave/parallel.hpp"
#include "channelwave/quadrature.hpp"

namespace channelwave {
namespace {

double horner(std::span<const double> c, double z) noexcept {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// int of the piecewise-linear interpolant times ((s - center) / scale)^power.
double pl_moment(const SampledProfile& g, double center, double scale, int power) {
  const GaussRule& rule = gauss_legendre(4);
  const auto v = g.samples();
  double acc = 0.0;
  for (std::size_t n = 0; n + 1 < v.size(); ++n) {
    if (v[n] == 0.0 && v[n + 1] == 0.0) continue;
    const double a = g.position(n);
    const double h = g.spacing();
    acc += integrate(rule, a, a + h, [&](double s) {
      const double lam = (s - a) / h;
      return ((1.0 - lam) * v[n] + lam * v[n + 1]) * std::pow((s - center) / scale, power);
    });
  }
  return acc;
}

double bessel_series(int n, double x) {
  double lead = 1.0;
  for (int i = 1; i <= n; ++i) lead *= x / (2.0 * i + 1.0);
  const double y = -0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= y / (k * (2.0 * n + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

// j_n(x) for x > 0 given sin x and cos x.
double bessel_from_sc(int n, double x, double sx, double cx) {
  if (n == 0) return x < 1e-8 ? 1.0 - x * x / 6.0 : sx / x;
  if (x < n + 1.0) return bessel_series(n, x);
  double jm = sx / x;
  double j = sx / (x * x) - cx / x;
  for (int m = 1; m < n; ++m) {
    const double next = (2.0 * m + 1.0) / x * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

void require_rgrid(const RadialGrid& g) {
  if (!(g.spacing > 0.0) || !(g.origin > 0.0)) throw Error(ErrorKind::Domain, "radial grid must be positive");
}

void require_beta(double beta) {
  if (!(beta > 0.5 && beta < 1.5)) throw Error(ErrorKind::Domain, "beta must lie in (1/2, 3/2)");
}

}  // namespace

LegendreKernel::LegendreKernel(int dimension, std::vector<double> coeffs)
    : dimension_(dimension), coeffs_(std::move(coeffs)) {
  require_odd_dimension(dimension_, 3, 13);
  if (static_cast<int>(coeffs_.size()) != (dimension_ - 3) / 2 + 1) {
    throw Error(ErrorKind::InvalidInput, "Legendre kernel coefficient count does not match the degree");
  }
}

double LegendreKernel::operator()(double z) const noexcept { return horner(coeffs_, z); }

double LegendreKernel::derivative(double z) const noexcept {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * coeffs_[i];
  return acc;
}

LegendreKernel legendre_poly(int d) {
  require_odd_dimension(d, 3, 13);
  const int n = (d - 3) / 2;
  std::vector<double> c(n + 1, 0.0);
  double norm = 1.0;
  for (int i = 1; i <= n; ++i) norm *= 2.0 * i;
  for (int k = 0; k <= n; ++k) {
    if (2 * k < n) continue;
    double falling = 1.0;
    for (int i = 0; i < n; ++i) falling *= 2 * k - i;
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    c[2 * k - n] += sign * binomial(n, k) * falling / norm;
  }
  return LegendreKernel(d, std::move(c));
}

RadialFreeWave::RadialFreeWave(SampledProfile profile, int d)
    : profile_(std::move(profile)), d_(d), kernel_(legendre_poly(d)), support_(profile_.support()) {
  const auto c = kernel_.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) kernel_derivative_.push_back(static_cast<double>(i) * c[i]);
  center_ = support_.empty() ? 0.0 : 0.5 * (support_.lo + support_.hi);

  const int degree = kernel_.degree();
  const auto v = profile_.samples();
  const double h = profile_.spacing();
  const GaussRule& rule = gauss_legendre(4);
  prefix_.assign(degree + 1, std::vector<double>(v.size(), 0.0));
  for (int l = 0; l <= degree; ++l) {
    for (std::size_t n = 0; n + 1 < v.size(); ++n) {
      const double a = profile_.position(n);
      double cell = 0.0;
      if (v[n] != 0.0 || v[n + 1] != 0.0) {
        cell = integrate(rule, a, a + h, [&](double s) {
          const double lam = (s - a) / h;
          return ((1.0 - lam) * v[n] + lam * v[n + 1]) * std::pow(s - center_, l);
        });
      }
      prefix_[l][n + 1] = prefix_[l][n] + cell;
    }
  }
}

double RadialFreeWave::moment_prefix(int l, double s) const {
  const auto v = profile_.samples();
  const double h = profile_.spacing();
  const double x = (s - profile_.origin()) / h;
  if (x <= 0.0) return 0.0;
  if (x >= static_cast<double>(v.size() - 1)) return prefix_[l].back();
  const auto n = static_cast<std::size_t>(x);
  const double a = profile_.position(n);
  double partial = 0.0;
  if (s > a && (v[n] != 0.0 || v[n + 1] != 0.0)) {
    partial = integrate(gauss_legendre(4), a, s, [&](double y) {
      const double lam = (y - a) / h;
      return ((1.0 - lam) * v[n] + lam * v[n + 1]) * std::pow(y - center_, l);
    });
  }
  return prefix_[l][n] + partial;
}

double RadialFreeWave::direct_integral(std::span<const double> poly, double r, double t, double lo,
                                       double hi) const {
  const auto v = profile_.samples();
  const double h = profile_.spacing();
  const double s0 = profile_.origin();
  const GaussRule& rule = gauss_legendre(static_cast<int>(poly.size()) / 2 + 2);
  const long last = static_cast<long>(v.size()) - 1;
  long first = std::clamp(static_cast<long>(std::floor((lo - s0) / h)), 0L, last - 1);
  long stop = std::clamp(static_cast<long>(std::ceil((hi - s0) / h)), 1L, last);
  double acc = 0.0;
  for (long n = first; n < stop; ++n) {
    const double a = s0 + h * static_cast<double>(n);
    const double x0 = std::max(lo, a);
    const double x1 = std::min(hi, a + h);
    if (!(x1 > x0)) continue;
    const double g0 = v[n];
    const double g1 = v[n + 1];
    if (g0 == 0.0 && g1 == 0.0) continue;
    acc += integrate(rule, x0, x1, [&](double s) {
      const double lam = (s - a) / h;
      return ((1.0 - lam) * g0 + lam * g1) * horner(poly, (s - t) / r);
    });
  }
  return acc;
}

double RadialFreeWave::kernel_integral(std::span<const double> poly, double r, double t, double lo,
                                       double hi) const {
  if (poly.empty() || !(hi > lo)) return 0.0;
  const int degree = static_cast<int>(poly.size()) - 1;
  const double cells = (hi - lo) / profile_.spacing();
  const double reach = (std::abs(t - center_) + 0.5 * support_.length()) / r;
  if (cells < 32.0 || std::pow(reach, degree) > 1e4) return direct_integral(poly, r, t, lo, hi);

  // P((x - tau) / r) expanded in powers of x = s - center.
  const double tau = t - center_;
  double acc = 0.0;
  for (int l = 0; l <= degree; ++l) {
    double a = 0.0;
    for (int i = l; i <= degree; ++i) {
      a += poly[i] * std::pow(r, -i) * binomial(i, l) * std::pow(-tau, i - l);
    }
    acc += a * (moment_prefix(l, hi) - moment_prefix(l, lo));
  }
  return acc;
}

double RadialFreeWave::value(double r, double t) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "free wave evaluated at r <= 0");
  if (support_.empty()) return 0.0;
  const double lo = std::max(t - r, support_.lo);
  const double hi = std::min(t + r, support_.hi);
  if (!(hi > lo)) return 0.0;
  return std::pow(r, -0.5 * (d_ - 1)) * kernel_integral(kernel_.coeffs(), r, t, lo, hi);
}

double RadialFreeWave::time_derivative(double r, double t) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "free wave evaluated at r <= 0");
  if (support_.empty()) return 0.0;
  const double parity = (kernel_.degree() % 2 == 0) ? 1.0 : -1.0;
  double acc = profile_(t + r) - parity * profile_(t - r);
  const double lo = std::max(t - r, support_.lo);
  const double hi = std::min(t + r, support_.hi);
  if (hi > lo) acc -= kernel_integral(kernel_derivative_, r, t, lo, hi) / r;
  return std::pow(r, -0.5 * (d_ - 1)) * acc;
}

double evaluate_free_wave(const RadialFreeWave& w, double r, double t) { return w.value(r, t); }

InitialDataPair initial_data(const RadialFreeWave& w, const RadialGrid& rgrid) {
  require_rgrid(rgrid);
  InitialDataPair out{std::vector<double>(rgrid.length), std::vector<double>(rgrid.length), w.dimension(), rgrid};
  parallel_for(rgrid.length, [&](std::size_t i) {
    const double r = rgrid.position(i);
    out.u0[i] = w.value(r, 0.0);
    out.u1[i] = w.time_derivative(r, 0.0);
  });
  return out;
}

double spherical_bessel(int n, double x) noexcept {
  if (x < 0.0) return ((n % 2 == 0) ? 1.0 : -1.0) * spherical_bessel(n, -x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return bessel_from_sc(n, x, std::sin(x), std::cos(x));
}

double radial_homogeneous_norm(std::span<const double> f, const RadialGrid& rgrid, int d, double s) {
  require_rgrid(rgrid);
  require_odd_dimension(d, 3, 13);
  if (f.size() != rgrid.length) throw Error(ErrorKind::InvalidInput, "sample count does not match the radial grid");
  if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) return 0.0;

  const int n = (d - 3) / 2;
  const double h = rgrid.spacing;
  const double rend = rgrid.position(rgrid.length - 1) + h;
  const double rho_max = 0.5 * kPi / h;
  const double panel = kPi / rend;

  std::vector<double> weight(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    weight[i] = h * f[i] * std::pow(rgrid.position(i), 0.5 * (d + 1));
  }
  // T(rho) = int f(r) j_n(rho r) r^{(d+1)/2} dr on the grid
  auto transform = [&](double rho) {
    const double c1 = std::cos(rho * h);
    const double s1 = std::sin(rho * h);
    double sx = 0.0;
    double cx = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = rho * rgrid.position(i);
      if (i % 64 == 0) {
        sx = std::sin(x);
        cx = std::cos(x);
      } else {
        const double ns = sx * c1 + cx * s1;
        cx = cx * c1 - sx * s1;
        sx = ns;
      }
      if (weight[i] != 0.0) acc += weight[i] * bessel_from_sc(n, x, sx, cx);
    }
    return acc;
  };

  std::vector<std::pair<double, double>> panels;
  constexpr int kGraded = 40;
  panels.emplace_back(0.0, panel * std::ldexp(1.0, -kGraded));
  for (int m = kGraded; m-- > 0;) panels.emplace_back(panel * std::ldexp(1.0, -m - 1), panel * std::ldexp(1.0, -m));
  const auto count = static_cast<std::size_t>(std::ceil(rho_max / panel));
  for (std::size_t p = 1; p < count; ++p) {
    panels.emplace_back(panel * static_cast<double>(p), panel * static_cast<double>(p + 1));
  }

  const GaussRule& rule = gauss_legendre(8);
  std::vector<double> partial(panels.size());
  parallel_for(panels.size(), [&](std::size_t p) {
    partial[p] = integrate(rule, panels[p].first, panels[p].second, [&](double rho) {
      const double tr = transform(rho);
      return std::pow(rho, 2.0 * s + 2.0) * tr * tr;
    });
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return std::sqrt(sphere_area(d - 1) * (2.0 / kPi) * total);
}

double radial_sobolev_norm(const InitialDataPair& data, double beta) {
  require_beta(beta);
  const double a = radial_homogeneous_norm(data.u0, data.rgrid, data.d, beta);
  const double b = radial_homogeneous_norm(data.u1, data.rgrid, data.d, beta - 1.0);
  return std::sqrt(a * a + b * b);
}

double isometry_defect(const RadialFreeWave& w, double beta) {
  require_beta(beta);
  const SampledProfile& g = w.profile();
  if (g.is_zero()) throw Error(ErrorKind::UndefinedRatio, "isometry defect of the zero profile");
  const Interval supp = g.support();
  const double h = g.spacing();
  const double reach = std::max(std::abs(supp.lo), std::abs(supp.hi));
  RadialGrid rgrid{h, h, static_cast<std::size_t>(std::ceil(reach / h)) + 4};
  const double lhs = std::pow(radial_sobolev_norm(initial_data(w, rgrid), beta), 2);
  if (!(lhs > 0.0)) throw Error(ErrorKind::UndefinedRatio, "initial data have zero norm");
  const double rhs = 2.0 * sphere_area(w.dimension() - 1) * std::pow(hnorm(g, SobolevOrder::from_beta(beta)), 2);
  return std::abs(lhs - rhs) / lhs;
}

double radiation_limit_defect(const RadialFreeWave& w, double T) {
  const SampledProfile& g = w.profile();
  if (g.is_zero()) return 0.0;
  const Interval supp = g.support();
  const double diam = supp.length();
  if (!(T > std::max({diam, std::abs(supp.lo), std::abs(supp.hi)}))) {
    throw Error(ErrorKind::Window, "T must exceed the support diameter and reach");
  }
  const double h = g.spacing();
  const double mu = 0.5 * (w.dimension() - 1);
  const GaussRule& rule = gauss_legendre(4);
  const double start = std::max(0.5 * h, T + supp.lo - diam);
  const double stop = T + supp.hi + diam;
  const auto cells = static_cast<std::size_t>(std::ceil((stop - start) / h));
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = start + h * static_cast<double>(c);
    err += integrate(rule, a, a + h, [&](double r) {
      const double e = std::pow(r, mu) * w.time_derivative(r, -T) - g(r - T);
      return e * e;
    });
  }
  for (std::size_t n = 0; n + 1 < g.size(); ++n) {
    const double a = g.position(n);
    ref += integrate(rule, a, a + h, [&](double s) { return g(s) * g(s); });
  }
  return std::sqrt(err / ref);
}

SampledProfile remove_low_moments(const SampledProfile& g, int d) {
  require_odd_dimension(d, 3, 13);
  if (g.is_zero()) return g;
  const int n = (d - 3) / 2;
  const Interval supp = g.support();
  const double center = 0.5 * (supp.lo + supp.hi);
  const double scale = 0.5 * supp.length();

  std::vector<SampledProfile> basis;
  for (int l = 0; l <= n; ++l) {
    basis.push_back(SampledProfile::sample(
        [&](double s) {
          if (s <= supp.lo || s >= supp.hi) return 0.0;
          const double env = std::sin(kPi * (s - supp.lo) / supp.length());
          return env * env * std::pow((s - center) / scale, l);
        },
        g.grid()));
  }
  const int m = n + 1;
  std::vector<double> a(m * m);
  std::vector<double> b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = pl_moment(g, center, scale, i);
    for (int l = 0; l < m; ++l) a[i * m + l] = pl_moment(basis[l], center, scale, i);
  }
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int row = col + 1; row < m; ++row) {
      if (std::abs(a[row * m + col]) > std::abs(a[piv * m + col])) piv = row;
    }
    for (int k = 0; k < m; ++k) std::swap(a[col * m + k], a[piv * m + k]);
    std::swap(b[col], b[piv]);
    for (int row = col + 1; row < m; ++row) {
      const double f = a[row * m + col] / a[col * m + col];
      for (int k = col; k < m; ++k) a[row * m + k] -= f * a[col * m + k];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> coef(m);
  for (int row = m; row-- > 0;) {
    double acc = b[row];
    for (int k = row + 1; k < m; ++k) acc -= a[row * m + k] * coef[k];
    coef[row] = acc / a[row * m + row];
  }
  SampledProfile out = g;
  for (int l = 0; l < m; ++l) out = out + basis[l].scaled(-coef[l]);
  return out;
}

}  // namespace channelwave
