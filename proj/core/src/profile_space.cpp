#include "channelwave/profile_space.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

namespace channelwave {
namespace {

constexpr std::size_t kPadFactor = 8;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t padded_length(std::size_t n) {
  std::size_t m = 64;
  while (m < kPadFactor * n) m <<= 1;
  return m;
}

// |G_m|^2 for m = 0 .. M/2 of the zero-padded real sequence.
std::vector<double> power_spectrum(std::span<const double> samples, std::size_t m_len) {
  struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
  };
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * m_len)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m_len / 2 + 1))));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m_len), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::fill(in.get(), in.get() + m_len, 0.0);
  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute(plan);
  std::vector<double> power(m_len / 2 + 1);
  for (std::size_t i = 0; i < power.size(); ++i) {
    power[i] = out.get()[i][0] * out.get()[i][0] + out.get()[i][1] * out.get()[i][1];
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return power;
}

// Average of |xi|^{2 gamma} over [c - w/2, c + w/2], c >= 0.
double bin_weight(double center, double width, double gamma) {
  if (gamma == 0.0) return 1.0;
  const double e = 2.0 * gamma + 1.0;
  const double half = 0.5 * width;
  if (center == 0.0) return 2.0 * std::pow(half, e) / (e * width);
  return (std::pow(center + half, e) - std::pow(center - half, e)) / (e * width);
}

void require_finite(std::span<const double> samples) {
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "profile has non-finite samples");
  }
}

}  // namespace

SampledProfile::SampledProfile(std::vector<double> samples, double spacing, double origin)
    : samples_(std::move(samples)), spacing_(spacing), origin_(origin) {
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw Error(ErrorKind::InvalidInput, "profile spacing must be positive");
  }
  if (!std::isfinite(origin_)) throw Error(ErrorKind::InvalidInput, "profile origin must be finite");
  if (samples_.size() < 2) throw Error(ErrorKind::InvalidInput, "profile needs at least two samples");
  require_finite(samples_);
  if (samples_.front() != 0.0 || samples_.back() != 0.0) {
    throw Error(ErrorKind::InvalidInput, "profile samples must vanish at both ends");
  }
}

SampledProfile SampledProfile::zero(const GridSpec& grid) {
  return SampledProfile(std::vector<double>(std::max<std::size_t>(grid.length, 2), 0.0), grid.spacing,
                        grid.origin);
}

SampledProfile SampledProfile::sample(const std::function<double(double)>& f, const GridSpec& grid) {
  std::vector<double> v(std::max<std::size_t>(grid.length, 2));
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(grid.position(n));
  v.front() = 0.0;
  v.back() = 0.0;
  return SampledProfile(std::move(v), grid.spacing, grid.origin);
}

double SampledProfile::operator()(double s) const noexcept {
  const double x = (s - origin_) / spacing_;
  if (!(x >= 0.0) || x > static_cast<double>(samples_.size() - 1)) return 0.0;
  const auto n = std::min(static_cast<std::size_t>(x), samples_.size() - 2);
  const double f = x - static_cast<double>(n);
  return samples_[n] + f * (samples_[n + 1] - samples_[n]);
}

bool SampledProfile::is_zero() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v == 0.0; });
}

Interval SampledProfile::support() const noexcept {
  std::size_t first = samples_.size(), last = 0;
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    if (samples_[n] != 0.0) {
      first = std::min(first, n);
      last = n;
    }
  }
  if (first == samples_.size()) return Interval{1.0, -1.0};
  return Interval{position(first - 1), position(last + 1)};
}

double SampledProfile::sup_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double SampledProfile::sup_abs_derivative() const noexcept {
  double m = 0.0;
  for (std::size_t n = 0; n + 1 < samples_.size(); ++n) m = std::max(m, std::abs(samples_[n + 1] - samples_[n]));
  return m / spacing_;
}

double SampledProfile::l2_norm() const noexcept {
  double acc = 0.0;
  for (double v : samples_) acc += v * v;
  return std::sqrt(acc * spacing_);
}

SampledProfile SampledProfile::operator+(const SampledProfile& other) const {
  if (std::abs(other.spacing_ - spacing_) > 1e-12 * spacing_) {
    throw Error(ErrorKind::InvalidInput, "profile sum requires equal spacing");
  }
  const double offset = (other.origin_ - origin_) / spacing_;
  const double rounded = std::round(offset);
  if (std::abs(offset - rounded) > 1e-6) throw Error(ErrorKind::InvalidInput, "profile sum requires aligned grids");
  const long shift = static_cast<long>(rounded);
  const long lo = std::min(0L, shift);
  const long hi = std::max(static_cast<long>(samples_.size()), shift + static_cast<long>(other.samples_.size()));
  std::vector<double> v(static_cast<std::size_t>(hi - lo), 0.0);
  for (std::size_t n = 0; n < samples_.size(); ++n) v[static_cast<std::size_t>(static_cast<long>(n) - lo)] += samples_[n];
  for (std::size_t n = 0; n < other.samples_.size(); ++n) {
    v[static_cast<std::size_t>(static_cast<long>(n) + shift - lo)] += other.samples_[n];
  }
  return SampledProfile(std::move(v), spacing_, origin_ + spacing_ * static_cast<double>(lo));
}

SampledProfile SampledProfile::scaled(double factor) const {
  std::vector<double> v(samples_);
  for (double& x : v) x *= factor;
  return SampledProfile(std::move(v), spacing_, origin_);
}

SampledProfile SampledProfile::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Domain, "dilation factor must be positive");
  return SampledProfile(samples_, spacing_ * lambda, origin_ * lambda);
}

SampledProfile SampledProfile::reflected() const {
  std::vector<double> v(samples_.rbegin(), samples_.rend());
  return SampledProfile(std::move(v), spacing_, -position(samples_.size() - 1));
}

SobolevOrder::SobolevOrder(double gamma) : gamma_(gamma) {
  if (!(gamma > -0.5 && gamma < 0.5)) {
    throw Error(ErrorKind::Domain, "Sobolev order gamma must lie in (-1/2, 1/2)");
  }
}

double hnorm(const SampledProfile& g, SobolevOrder order) {
  if (g.is_zero()) return 0.0;
  const std::size_t m_len = padded_length(g.size());
  const auto power = power_spectrum(g.samples(), m_len);
  const double h = g.spacing();
  const double dxi = 2.0 * kPi / (static_cast<double>(m_len) * h);
  const double gamma = order.gamma();
  double acc = bin_weight(0.0, dxi, gamma) * power[0];
  const std::size_t nyquist = m_len / 2;
  for (std::size_t m = 1; m < nyquist; ++m) {
    acc += 2.0 * bin_weight(dxi * static_cast<double>(m), dxi, gamma) * power[m];
  }
  acc += bin_weight(dxi * static_cast<double>(nyquist), dxi, gamma) * power[nyquist];
  return std::sqrt(acc * h / static_cast<double>(m_len));
}

SampledProfile sharp_cutoff(const SampledProfile& g, Interval J) {
  std::vector<double> v(g.samples().begin(), g.samples().end());
  if (J.empty()) {
    std::fill(v.begin(), v.end(), 0.0);
    return SampledProfile(std::move(v), g.spacing(), g.origin());
  }
  const double n_max = static_cast<double>(g.size() - 1);
  const double lo = std::isfinite(J.lo) ? std::round((J.lo - g.origin()) / g.spacing()) : -1.0;
  const double hi = std::isfinite(J.hi) ? std::round((J.hi - g.origin()) / g.spacing()) : n_max + 1.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const double x = static_cast<double>(n);
    if (x < lo || x > hi) v[n] = 0.0;
  }
  return SampledProfile(std::move(v), g.spacing(), g.origin());
}

int dyadic_index(double s) {
  int e = 0;
  std::frexp(std::abs(s), &e);
  return e - 1;
}

std::vector<DyadicPiece> dyadic_decompose(const SampledProfile& g) {
  const auto samples = g.samples();
  const double half_cell = 0.5 * g.spacing();
  // First and last sample index for every k present.
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> ranges;
  auto slot = [&](int k) -> std::pair<std::size_t, std::size_t>& {
    for (auto& r : ranges) {
      if (r.first == k) return r.second;
    }
    ranges.push_back({k, {samples.size(), 0}});
    return ranges.back().second;
  };
  for (std::size_t n = 0; n < samples.size(); ++n) {
    if (samples[n] == 0.0) continue;
    const double s = g.position(n);
    if (std::abs(s) < half_cell) continue;
    auto& r = slot(dyadic_index(s));
    r.first = std::min(r.first, n);
    r.second = std::max(r.second, n);
  }
  std::sort(ranges.begin(), ranges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<DyadicPiece> pieces;
  pieces.reserve(ranges.size());
  for (const auto& [k, r] : ranges) {
    const std::size_t first = r.first - 1;  // end samples are zero, so first >= 1
    const std::size_t last = r.second + 1;
    std::vector<double> v(last - first + 1, 0.0);
    for (std::size_t n = r.first; n <= r.second; ++n) {
      const double s = g.position(n);
      if (std::abs(s) >= half_cell && dyadic_index(s) == k) v[n - first] = samples[n];
    }
    pieces.push_back({k, SampledProfile(std::move(v), g.spacing(), g.position(first))});
  }
  return pieces;
}

double smooth_bump_value(int k, double x) noexcept {
  const double a = std::ldexp(1.0, k);
  if (x >= a && x <= 2.0 * a) return 1.0;
  if (x >= 0.5 * a && x < a) return x / (0.5 * a) - 1.0;
  if (x > 2.0 * a && x <= 3.0 * a) return 3.0 - x / a;
  return 0.0;
}

SampledProfile smooth_bump(int k, const GridSpec& grid) {
  const double a = std::ldexp(1.0, k);
  const double across = (3.0 * a - 0.5 * a) / grid.spacing;
  if (across < 8.0) {
    throw Error(ErrorKind::Resolution, "grid too coarse for smooth bump k=" + std::to_string(k));
  }
  return SampledProfile::sample([k](double x) { return smooth_bump_value(k, x); }, grid);
}

double hgamma_lemma_ratio(const SampledProfile& g, Interval J, SobolevOrder order) {
  if (J.empty() || !std::isfinite(J.lo) || !std::isfinite(J.hi) || J.length() <= 0.0) {
    throw Error(ErrorKind::Precondition, "lemma ratio needs a finite nondegenerate interval");
  }
  if (g.is_zero()) return 0.0;
  const double tol = g.spacing() * (1.0 + 1e-9);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double s = g.position(n);
    if (g.samples()[n] != 0.0 && (s < J.lo - tol || s > J.hi + tol)) {
      throw Error(ErrorKind::Precondition, "profile is not supported in the interval");
    }
  }
  const double len = J.length();
  const double gamma = order.gamma();
  double rhs = std::pow(len, 0.5 - gamma) * g.sup_abs();
  if (gamma > 0.0) rhs = std::pow(len, 0.5 - gamma) * (g.sup_abs() + len * g.sup_abs_derivative());
  return hnorm(g, order) / rhs;
}

}  // namespace channelwave
