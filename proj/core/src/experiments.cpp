#include "channelwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "channelwave/parallel.hpp"
#include "channelwave/quadrature.hpp"

namespace channelwave {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

void require_valid(const ExponentSet& e) {
  if (!validate_exponents(e)) throw Error(ErrorKind::Configuration, "exponent set violates the rescaling identities");
}

// Least-squares slope of log2(ratio) against n over rows whose n passes keep.
std::optional<SlopeFit> fit_regime(const std::vector<std::pair<int, double>>& points, int lo, int hi,
                                   const std::string& name, double predicted) {
  std::vector<double> x, y;
  bool any = false;
  for (const auto& [n, v] : points) {
    if (n < lo || n > hi) continue;
    any = true;
    if (v > 0.0) {
      x.push_back(n);
      y.push_back(std::log2(v));
    }
  }
  if (!any) return std::nullopt;
  if (x.size() < 4) throw Error(ErrorKind::InsufficientRange, "slope fit " + name + " has fewer than 4 points");
  const LineFit f = fit_line(x, y);
  return SlopeFit{name, f.slope, f.slope_half_width, predicted, f.points};
}

std::vector<std::pair<std::string, std::string>> exponent_provenance(const ExponentSet& e) {
  return {{"d", std::to_string(e.d)}, {"beta", fmt(e.beta)}, {"p", fmt(e.p)},   {"q", fmt(e.q)},
          {"pt", fmt(e.pt)},          {"qt", fmt(e.qt)},     {"norm_order", "L^p_t L^q_x (time outer)"}};
}

SampledProfile band_limited_raw(std::mt19937_64& rng, double spacing) {
  const double c = uniform(rng, -1.0, 1.0);
  const double sigma = uniform(rng, 0.35, 0.6);
  const double omega = uniform(rng, 2.0, 6.0);
  const double phase = uniform(rng, 0.0, 2.0 * kPi);
  const double reach = 1.0 + 6.0 * 0.6 + 2.0 * spacing;
  const double cells = std::ceil(reach / spacing);
  const GridSpec grid{spacing, -cells * spacing, static_cast<std::size_t>(2.0 * cells) + 1};
  return SampledProfile::sample(
      [&](double s) {
        const double x = s - c;
        if (std::abs(x) >= 6.0 * sigma) return 0.0;
        return std::exp(-0.5 * x * x / (sigma * sigma)) * std::cos(omega * x + phase);
      },
      grid);
}

SampledProfile multiply(const SampledProfile& g, const std::function<double(double)>& w) {
  std::vector<double> v(g.samples().begin(), g.samples().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w(g.position(i));
  v.front() = 0.0;
  v.back() = 0.0;
  return SampledProfile(std::move(v), g.spacing(), g.origin());
}

}  // namespace

std::string_view to_string(ProfileFamily f) noexcept {
  switch (f) {
    case ProfileFamily::DyadicBump: return "dyadic-bump";
    case ProfileFamily::BandLimited: return "band-limited";
    case ProfileFamily::MultiScaleSum: return "multi-scale-sum";
  }
  return "unknown";
}

ProfileFamily parse_family(std::string_view name) {
  if (name == "dyadic-bump") return ProfileFamily::DyadicBump;
  if (name == "band-limited") return ProfileFamily::BandLimited;
  if (name == "multi-scale-sum") return ProfileFamily::MultiScaleSum;
  throw Error(ErrorKind::Configuration, "unknown profile family: " + std::string(name));
}

SummaryStats summarize(std::span<const double> values) {
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) v.push_back(x);
  }
  SummaryStats s;
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.min = v.front();
  s.max = v.back();
  double acc = 0.0;
  for (double x : v) acc += x;
  s.mean = acc / static_cast<double>(v.size());
  s.q50 = quantile(0.5);
  s.q90 = quantile(0.9);
  s.q99 = quantile(0.99);
  return s;
}

double ExperimentReport::metric(std::string_view key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::InvalidInput, "report has no metric " + std::string(key));
}

const SlopeFit& ExperimentReport::fit(std::string_view fit_name) const {
  for (const auto& f : fits) {
    if (f.name == fit_name) return f;
  }
  throw Error(ErrorKind::InvalidInput, "report has no fit " + std::string(fit_name));
}

ExponentSet matching_exponents(int d, double beta) {
  require_odd_dimension(d, 3, 13);
  double p = (d + 2.0) / (d - 2.0);
  if (d == 3 && beta == 0.75) p = 4.0;
  if (d == 3 && beta == 1.25) p = 8.0;
  ExponentSet e{d, beta, p, q_for(d, beta, p), 1.0, 0.0};
  const double rest = 0.5 * d - beta + 1.0;
  if (!(rest > 0.0)) throw Error(ErrorKind::Domain, "no finite q~ for these exponents");
  e.qt = d / rest;
  require_valid(e);
  return e;
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

GridSpec profile_grid(int k_lo, int k_hi, int resolution) {
  if (resolution < 1 || k_hi < k_lo) throw Error(ErrorKind::Configuration, "invalid profile grid request");
  const double h = std::ldexp(1.0, k_lo) / resolution;
  const double cells = std::ceil(std::ldexp(1.0, k_hi + 1) / h) + 1.0;
  return {h, -cells * h, static_cast<std::size_t>(2.0 * cells) + 1};
}

SampledProfile dyadic_bump(const GridSpec& grid, int k, double amplitude, bool negative_side) {
  const double lo = std::ldexp(1.0, k);
  if (lo / grid.spacing < 8.0) throw Error(ErrorKind::Resolution, "grid too coarse for the dyadic bump");
  return SampledProfile::sample(
      [&](double s) {
        const double x = negative_side ? -s : s;
        if (x <= lo || x >= 2.0 * lo) return 0.0;
        return amplitude * sin2(kPi * (x - lo) / lo);
      },
      grid);
}

SampledProfile band_limited_profile(std::mt19937_64& rng, double spacing, int d) {
  return remove_low_moments(band_limited_raw(rng, spacing), d);
}

double channel_forcing_value(int k, double amplitude, double r, double t) noexcept {
  const double K = std::ldexp(1.0, k);
  if (std::abs(t) > K) return 0.0;
  const double y = r - std::abs(t);
  if (y < K || y >= 2.0 * K) return 0.0;
  const double c = std::cos(0.5 * kPi * t / K);
  return amplitude * sin2(kPi * (y - K) / K) * c * c;
}

ForcingField channel_forcing(int k, double amplitude, int d, int resolution) {
  const double K = std::ldexp(1.0, k);
  const double h = K / resolution;
  const ForcingGrid grid{0.0, h, static_cast<std::size_t>(3 * resolution + 2), -K, h,
                         static_cast<std::size_t>(2 * resolution + 1)};
  return ForcingField::sample([&](double r, double t) { return channel_forcing_value(k, amplitude, r, t); }, grid, d,
                              k);
}

RadialField forcing_field(const ForcingField& f) {
  RadialField out;
  out.eval = [&f](double r, double t) { return f(r, t); };
  const auto& g = f.grid();
  out.time_support = {g.t_origin, g.t(g.nt - 1)};
  if (const auto k = f.channel()) {
    out.y_min = std::ldexp(1.0, *k);
    out.y_max = std::ldexp(1.0, *k + 1);
  }
  return out;
}

ChannelQuadrature experiment_quadrature() {
  ChannelQuadrature q;
  q.y_panels = 2;
  q.y_nodes = 8;
  q.t_nodes = 12;
  q.inner_panels = 4;
  q.octave_panels = 2;
  q.octaves = 12;
  return q;
}

ExperimentReport single_channel_decay(const ExponentSet& e, int k, int j_lo, int j_hi, int resolution,
                                      const SampledProfile* profile, const ChannelQuadrature& quad) {
  require_valid(e);
  if (j_hi < j_lo) throw Error(ErrorKind::InsufficientRange, "empty channel range");
  const SampledProfile g = profile ? *profile : dyadic_bump(profile_grid(k, k, resolution), k, 1.0);
  ExperimentReport rep;
  rep.name = "single-channel-decay";
  rep.provenance = exponent_provenance(e);
  rep.provenance.emplace_back("k", std::to_string(k));
  rep.provenance.emplace_back("resolution", std::to_string(resolution));
  const std::string hash = hex64(fnv1a(std::string_view(reinterpret_cast<const char*>(g.samples().data()),
                                                        g.samples().size() * sizeof(double))));

  const double rhs = hnorm(g, SobolevOrder::from_beta(e.beta));
  const RadialFreeWave w(g, e.d);
  const RadialField field{[&w](double r, double t) { return w.value(r, t); }};
  const ChannelNormVector v = g.is_zero() ? ChannelNormVector{j_lo, j_hi, e.p, e.q,
                                                              std::vector<double>(j_hi - j_lo + 1, 0.0)}
                                          : channel_vector(field, e, j_lo, j_hi, {}, quad);
  std::vector<std::pair<int, double>> points;
  Figure fig{"single_channel", {"j_minus_k", "log2_ratio", "c_sequence"}, {}};
  for (int j = j_lo; j <= j_hi; ++j) {
    const double lhs = v.at(j);
    const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    rep.rows.push_back({static_cast<std::size_t>(j - j_lo), "channel", hash, lhs, rhs, ratio,
                        {{"j", j}, {"j_minus_k", j - k}, {"c_n", c_sequence(j - k, e)}}});
    points.emplace_back(j - k, ratio);
    if (ratio > 0.0) fig.rows.push_back({double(j - k), std::log2(ratio), c_sequence(j - k, e)});
  }
  rep.figures.push_back(std::move(fig));
  std::vector<double> ratios;
  for (const auto& r : rep.rows) ratios.push_back(r.ratio);
  rep.stats = summarize(ratios);
  rep.metrics = {{"aggregate", v.aggregate}, {"tail_low", v.tail_low}, {"tail_high", v.tail_high}};
  if (!g.is_zero()) {
    const bool both = j_lo - k <= -2 && j_hi - k >= 1;
    if (auto f = fit_regime(points, both ? 1 : 0, j_hi - k, "outer", 0.5 - e.beta)) rep.fits.push_back(*f);
    if (auto f = fit_regime(points, j_lo - k, -2, "inner", 1.0 / e.q)) rep.fits.push_back(*f);
    if (rep.fits.empty()) throw Error(ErrorKind::InsufficientRange, "no fit regime in the channel range");
  }
  return rep;
}

ExperimentReport forcing_decay(const ExponentSet& e, int k, int j_lo, int j_hi, int resolution,
                               const ChannelQuadrature& quad) {
  require_valid(e);
  if (j_hi > k) throw Error(ErrorKind::Precondition, "forcing decay is measured on channels j <= k");
  if (j_hi < j_lo) throw Error(ErrorKind::InsufficientRange, "empty channel range");
  const ForcingField F = channel_forcing(k, 1.0, e.d, resolution);
  ExperimentReport rep;
  rep.name = "forcing-decay";
  rep.provenance = exponent_provenance(e);
  rep.provenance.emplace_back("k", std::to_string(k));
  rep.provenance.emplace_back("resolution", std::to_string(resolution));
  const std::string hash = hex64(fnv1a(std::string_view(reinterpret_cast<const char*>(F.samples().data()),
                                                        F.samples().size() * sizeof(double))));

  const double rhs = channel_norm(forcing_field(F), k, e.pt, e.qt, e.d, {}, quad);
  const DuhamelOperator u(F, e.d);
  const RadialField field{[&u](double r, double t) { return u(r, t); }};
  const ChannelNormVector v = channel_vector(field, e, j_lo, j_hi, {}, quad);
  std::vector<std::pair<int, double>> points;
  Figure fig{"forcing_decay", {"j_minus_k", "log2_ratio"}, {}};
  for (int j = j_lo; j <= j_hi; ++j) {
    const double lhs = v.at(j);
    const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    rep.rows.push_back({static_cast<std::size_t>(j - j_lo), "channel", hash, lhs, rhs, ratio,
                        {{"j", j}, {"j_minus_k", j - k}}});
    points.emplace_back(j - k, ratio);
    if (ratio > 0.0) fig.rows.push_back({double(j - k), std::log2(ratio)});
  }
  rep.figures.push_back(std::move(fig));
  std::vector<double> ratios;
  for (const auto& r : rep.rows) ratios.push_back(r.ratio);
  rep.stats = summarize(ratios);
  rep.metrics = {{"forcing_norm", rhs}, {"aggregate", v.aggregate}};
  if (rhs > 0.0) {
    if (auto f = fit_regime(points, j_lo - k, std::min(-1, j_hi - k), "inner", 1.0 / e.q)) rep.fits.push_back(*f);
  }
  return rep;
}

MainRatio main_inequality_ratio(const SampledProfile* profile, std::span<const ForcingField> forcing,
                                const ExponentSet& e, int jmin, int jmax, Interval window,
                                const ChannelQuadrature& quad) {
  require_valid(e);
  std::set<int> channels;
  for (const auto& f : forcing) {
    if (!f.channel()) throw Error(ErrorKind::Precondition, "forcing pieces must be channel-tagged");
    if (!channels.insert(*f.channel()).second) throw Error(ErrorKind::Precondition, "forcing channels must differ");
  }
  MainRatio out;
  std::optional<RadialFreeWave> wave;
  if (profile && !profile->is_zero()) {
    wave.emplace(*profile, e.d);
    out.data_norm = std::sqrt(2.0 * sphere_area(e.d - 1)) * hnorm(*profile, SobolevOrder::from_beta(e.beta));
  }
  std::vector<DuhamelOperator> parts;
  double fsq = 0.0;
  for (const auto& f : forcing) {
    if (f.is_zero()) continue;
    parts.emplace_back(f, e.d);
    const double n = channel_norm(forcing_field(f), *f.channel(), e.pt, e.qt, e.d, window, quad);
    fsq += n * n;
  }
  out.forcing_norm = std::sqrt(fsq);
  const double denom = out.data_norm + out.forcing_norm;
  if (!(denom > 0.0)) throw Error(ErrorKind::UndefinedRatio, "zero data and forcing");

  const RadialField field{[&](double r, double t) {
    double v = wave ? wave->value(r, t) : 0.0;
    for (const auto& p : parts) v += p(r, t);
    return v;
  }};
  out.channels = channel_vector(field, e, jmin, jmax, window, quad);
  out.lhs = out.channels.aggregate;
  out.ratio = out.lhs / denom;
  return out;
}

Instance make_instance(const EnsembleSpec& spec, std::size_t index) {
  auto rng = instance_rng(spec.seed, index);
  const int d = spec.e.d;
  std::string desc = std::string(to_string(spec.family)) + ";d=" + std::to_string(d) +
                     ";res=" + std::to_string(spec.resolution);
  const GridSpec grid = profile_grid(spec.scale_lo, spec.scale_hi, spec.resolution);

  struct Bump {
    int k;
    double amp;
    bool negative;
  };
  auto draw_bump = [&] {
    Bump b;
    b.k = uniform_int(rng, spec.scale_lo, spec.scale_hi);
    b.amp = uniform(rng, 0.5, 1.5) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    b.negative = uniform(rng, 0.0, 1.0) < 0.5;
    return b;
  };

  std::vector<Bump> bumps;
  std::optional<SampledProfile> profile;
  switch (spec.family) {
    case ProfileFamily::DyadicBump:
      bumps.push_back(draw_bump());
      break;
    case ProfileFamily::MultiScaleSum: {
      const int m = uniform_int(rng, 3, 8);
      for (int i = 0; i < m; ++i) bumps.push_back(draw_bump());
      break;
    }
    case ProfileFamily::BandLimited:
      profile = band_limited_profile(rng, std::ldexp(1.0, spec.scale_lo) / spec.resolution, d);
      desc += ";seed=" + std::to_string(spec.seed) + ";index=" + std::to_string(index);
      break;
  }
  if (!profile) {
    SampledProfile acc = SampledProfile::zero(grid);
    for (const auto& b : bumps) {
      acc = acc + dyadic_bump(grid, b.k, b.amp, b.negative);
      desc += ";bump=" + std::to_string(b.k) + "," + fmt(b.amp) + "," + (b.negative ? "-" : "+");
    }
    profile = std::move(acc);
  }

  std::vector<ForcingField> forcing;
  if (spec.forcing && spec.family == ProfileFamily::MultiScaleSum) {
    const int pieces = uniform_int(rng, 0, 2);
    std::set<int> used;
    for (int i = 0; i < pieces; ++i) {
      const int k = uniform_int(rng, spec.scale_lo, spec.scale_hi);
      const double amp = uniform(rng, 0.5, 1.5) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      if (!used.insert(k).second) continue;
      forcing.push_back(channel_forcing(k, amp, d, spec.resolution));
      desc += ";forcing=" + std::to_string(k) + "," + fmt(amp);
    }
  }
  return {std::move(*profile), std::move(forcing), hex64(fnv1a(desc))};
}

ExperimentReport run_ensemble(const EnsembleSpec& spec) {
  require_valid(spec.e);
  if (spec.count < 1 || spec.scale_hi < spec.scale_lo || spec.resolution < 8) {
    throw Error(ErrorKind::Configuration, "ensemble needs count >= 1, a nonempty scale range and resolution >= 8");
  }
  const int jmin = spec.scale_lo - 6;
  const int jmax = spec.scale_hi + 6;
  ExperimentReport rep;
  rep.name = "main-constant";
  rep.provenance = exponent_provenance(spec.e);
  rep.provenance.emplace_back("seed", std::to_string(spec.seed));
  rep.provenance.emplace_back("count", std::to_string(spec.count));
  rep.provenance.emplace_back("family", std::string(to_string(spec.family)));
  rep.provenance.emplace_back("scale_range", std::to_string(spec.scale_lo) + ".." + std::to_string(spec.scale_hi));
  rep.provenance.emplace_back("resolution", std::to_string(spec.resolution));
  rep.provenance.emplace_back("channels", std::to_string(jmin) + ".." + std::to_string(jmax));

  rep.rows.resize(static_cast<std::size_t>(spec.count));
  parallel_for(rep.rows.size(), [&](std::size_t i) {
    const Instance inst = make_instance(spec, i);
    ReportRow row;
    row.index = i;
    row.input_hash = inst.hash;
    try {
      const MainRatio m = main_inequality_ratio(&inst.profile, inst.forcing, spec.e, jmin, jmax);
      row.group = "instance";
      row.lhs = m.lhs;
      row.rhs = m.data_norm + m.forcing_norm;
      row.ratio = m.ratio;
      row.extra = {{"data_norm", m.data_norm},
                   {"forcing_norm", m.forcing_norm},
                   {"forcing_pieces", static_cast<double>(inst.forcing.size())},
                   {"tail_low", m.channels.tail_low},
                   {"tail_high", m.channels.tail_high}};
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::UndefinedRatio) throw;
      row.group = "skipped";
      row.ratio = std::nan("");
      row.extra = {{"data_norm", 0.0}, {"forcing_norm", 0.0}, {"forcing_pieces", 0.0}, {"tail_low", 0.0},
                   {"tail_high", 0.0}};
    }
    rep.rows[i] = std::move(row);
  });

  std::vector<double> ratios;
  std::size_t skipped = 0;
  for (const auto& r : rep.rows) {
    ratios.push_back(r.ratio);
    if (r.group == "skipped") ++skipped;
  }
  rep.stats = summarize(ratios);
  rep.metrics = {{"max", rep.stats.max}, {"skipped", static_cast<double>(skipped)},
                 {"empty", rep.stats.count == 0 ? 1.0 : 0.0}};
  Figure fig{"ratios", {"index", "ratio"}, {}};
  for (const auto& r : rep.rows) fig.rows.push_back({static_cast<double>(r.index), r.ratio});
  rep.figures.push_back(std::move(fig));
  return rep;
}

ExperimentReport estimate_constant(const EnsembleSpec& spec) {
  if (spec.count < 20) throw Error(ErrorKind::Configuration, "constant estimation needs count >= 20");
  ExperimentReport base = run_ensemble(spec);
  EnsembleSpec twice = spec;
  twice.count = 2 * spec.count;
  const ExperimentReport more = run_ensemble(twice);
  EnsembleSpec finer = spec;
  finer.resolution = 2 * spec.resolution;
  const ExperimentReport fine = run_ensemble(finer);

  const double m0 = base.stats.max;
  auto rel = [&](double m) { return m0 > 0.0 ? std::abs(m - m0) / m0 : 0.0; };
  base.metrics = {{"max", m0},
                  {"max_doubled_count", more.stats.max},
                  {"max_doubled_resolution", fine.stats.max},
                  {"stability_count", rel(more.stats.max)},
                  {"stability_resolution", rel(fine.stats.max)},
                  {"skipped", base.metric("skipped")},
                  {"empty", base.metric("empty")}};
  for (auto row : more.rows) {
    row.group = "doubled-count";
    base.rows.push_back(std::move(row));
  }
  for (auto row : fine.rows) {
    row.group = "doubled-resolution";
    base.rows.push_back(std::move(row));
  }
  Figure fig{"max_vs_count", {"count", "max"}, {}};
  fig.rows.push_back({static_cast<double>(spec.count), m0});
  fig.rows.push_back({static_cast<double>(twice.count), more.stats.max});
  base.figures.push_back(std::move(fig));
  return base;
}

double decomposition_constant(std::uint64_t seed, int count, double spacing, double gamma, bool smooth) {
  const SobolevOrder order(gamma);
  std::vector<double> ratios(static_cast<std::size_t>(count), 0.0);
  parallel_for(ratios.size(), [&](std::size_t i) {
    auto rng = instance_rng(seed, i);
    const SampledProfile g = band_limited_raw(rng, spacing);
    const double whole = hnorm(g, order);
    double acc = 0.0;
    if (!smooth) {
      for (const auto& piece : dyadic_decompose(g)) acc += std::pow(hnorm(piece.piece, order), 2);
    } else {
      const Interval supp = g.support();
      const double reach = std::max(std::abs(supp.lo), std::abs(supp.hi));
      const int k_lo = static_cast<int>(std::ceil(std::log2(16.0 * spacing)));
      const int k_hi = static_cast<int>(std::ceil(std::log2(reach))) + 1;
      for (int k = k_lo; k <= k_hi; ++k) {
        const SampledProfile piece = multiply(g, [k](double s) { return smooth_bump_value(k, std::abs(s)); });
        if (!piece.is_zero()) acc += std::pow(hnorm(piece, order), 2);
      }
    }
    ratios[i] = acc / (whole * whole);
  });
  return *std::max_element(ratios.begin(), ratios.end());
}

double cutoff_sup(std::uint64_t seed, int count, double spacing, double gamma) {
  const SobolevOrder order(gamma);
  std::vector<double> ratios(static_cast<std::size_t>(count), 0.0);
  parallel_for(ratios.size(), [&](std::size_t i) {
    auto rng = instance_rng(seed, i);
    const SampledProfile g = band_limited_raw(rng, spacing);
    const double lo = uniform(rng, -2.0, 2.0);
    const Interval J{lo, lo + uniform(rng, 0.1, 3.0)};
    ratios[i] = hnorm(sharp_cutoff(g, J), order) / hnorm(g, order);
  });
  return *std::max_element(ratios.begin(), ratios.end());
}

double shell_bound_max(std::uint64_t seed, int shells, int d, double qt, int samples) {
  std::vector<double> ratios(static_cast<std::size_t>(shells), 0.0);
  parallel_for(ratios.size(), [&](std::size_t i) {
    auto rng = instance_rng(seed, i);
    const double a = std::exp2(uniform(rng, -1.0, 2.0));
    const double b = a * uniform(rng, 1.3, 2.0);
    const double amp1 = uniform(rng, 0.5, 1.5);
    const double amp2 = uniform(rng, -0.5, 0.5);
    const double h = (b - a) / 128.0;
    const GridSpec grid{h, a - h, 131};
    const SampledProfile u1 = SampledProfile::sample(
        [&](double r) {
          if (r <= a || r >= b) return 0.0;
          const double x = (r - a) / (b - a);
          return amp1 * sin2(kPi * x) + amp2 * sin2(2.0 * kPi * x);
        },
        grid);
    std::vector<std::pair<double, double>> pts;
    for (int it = 1; it <= samples; ++it) {
      const double t = 2.0 * b * it / samples;
      for (int iy = 1; iy <= samples; ++iy) pts.emplace_back(t + 2.0 * b * iy / samples, t);
    }
    ratios[i] = pointwise_bound_ratio(u1, a, b, d, qt, pts);
  });
  return *std::max_element(ratios.begin(), ratios.end());
}

ExperimentReport lemma_sweeps(const LemmaSweepOptions& options) {
  ExperimentReport rep;
  rep.name = "lemma-sweeps";
  rep.provenance = {{"seed", std::to_string(options.seed)},
                    {"count", std::to_string(options.count)},
                    {"resolution", std::to_string(options.resolution)},
                    {"shells", std::to_string(options.shells)},
                    {"shell_samples", std::to_string(options.shell_samples)},
                    {"fourier_convention", "unitary"}};

  // Interval-length sweep for a fixed C^1 shape on J = [0, L].
  const int n = 256;
  const GridSpec unit{1.0 / n, 0.0, static_cast<std::size_t>(n) + 1};
  const SampledProfile shape = SampledProfile::sample([](double s) { return sin2(kPi * s); }, unit);
  const std::vector<double> lengths{1e-2, 1e-1, 1.0, 10.0, 100.0};
  Figure scale_fig{"scale_sweep", {"log2_length", "log2_norm_g-0.25", "log2_norm_g0.25"}, {}};
  std::vector<std::vector<double>> logs(2);
  std::size_t index = 0;
  for (double L : lengths) {
    const SampledProfile g = shape.dilated(L);
    std::vector<double> fig_row{std::log2(L)};
    for (int b = 0; b < 2; ++b) {
      const double gamma = b == 0 ? -0.25 : 0.25;
      const double norm = hnorm(g, SobolevOrder(gamma));
      const double ratio = hgamma_lemma_ratio(g, {0.0, L}, SobolevOrder(gamma));
      rep.rows.push_back({index++, "scale", "", norm, norm / ratio, ratio, {{"length", L}, {"gamma", gamma}}});
      logs[b].push_back(std::log2(norm));
      fig_row.push_back(std::log2(norm));
    }
    scale_fig.rows.push_back(fig_row);
  }
  std::vector<double> x;
  for (double L : lengths) x.push_back(std::log2(L));
  for (int b = 0; b < 2; ++b) {
    const double gamma = b == 0 ? -0.25 : 0.25;
    const LineFit f = fit_line(x, logs[b]);
    rep.fits.push_back({b == 0 ? "scale_g-0.25" : "scale_g0.25", f.slope, f.slope_half_width, 0.5 - gamma, f.points});
  }
  rep.figures.push_back(std::move(scale_fig));

  const double h = 1.0 / options.resolution;
  Figure decomp_fig{"decomposition", {"gamma", "sharp_h", "sharp_h2", "smooth_h", "smooth_h2"}, {}};
  for (double gamma : {-0.25, 0.0, 0.25}) {
    const std::string tag = "_g" + fmt(gamma);
    const double s1 = decomposition_constant(options.seed, options.count, h, gamma, false);
    const double s2 = decomposition_constant(options.seed, options.count, 0.5 * h, gamma, false);
    const double m1 = decomposition_constant(options.seed, options.count, h, gamma, true);
    const double m2 = decomposition_constant(options.seed, options.count, 0.5 * h, gamma, true);
    const double c1 = cutoff_sup(options.seed, options.count, h, gamma);
    const double c2 = cutoff_sup(options.seed, 2 * options.count, h, gamma);
    const double c3 = cutoff_sup(options.seed, options.count, 0.5 * h, gamma);
    rep.metrics.emplace_back("sharp" + tag + "_h", s1);
    rep.metrics.emplace_back("sharp" + tag + "_h2", s2);
    rep.metrics.emplace_back("smooth" + tag + "_h", m1);
    rep.metrics.emplace_back("smooth" + tag + "_h2", m2);
    rep.metrics.emplace_back("cutoff" + tag + "_n", c1);
    rep.metrics.emplace_back("cutoff" + tag + "_2n", c2);
    rep.metrics.emplace_back("cutoff" + tag + "_h2", c3);
    rep.rows.push_back({index++, "sharp", "", s1, s2, s1 / s2, {{"gamma", gamma}}});
    rep.rows.push_back({index++, "smooth", "", m1, m2, m1 / m2, {{"gamma", gamma}}});
    rep.rows.push_back({index++, "cutoff", "", c1, c2, c1 / c2, {{"gamma", gamma}}});
    decomp_fig.rows.push_back({gamma, s1, s2, m1, m2});
  }
  rep.figures.push_back(std::move(decomp_fig));

  Figure shell_fig{"shell_bound", {"d", "qt", "coarse", "fine"}, {}};
  for (int d : {3, 5}) {
    for (double qt : {2.0, 4.0}) {
      const std::string tag = "_d" + std::to_string(d) + "_q" + fmt(qt);
      const double coarse = shell_bound_max(options.seed, options.shells, d, qt, options.shell_samples);
      const double fine = shell_bound_max(options.seed, options.shells, d, qt, 2 * options.shell_samples);
      rep.metrics.emplace_back("shell" + tag + "_coarse", coarse);
      rep.metrics.emplace_back("shell" + tag + "_fine", fine);
      rep.rows.push_back({index++, "shell", "", fine, coarse, fine / coarse, {{"d", d}, {"qt", qt}}});
      shell_fig.rows.push_back({double(d), qt, coarse, fine});
    }
  }
  rep.figures.push_back(std::move(shell_fig));
  std::vector<double> ratios;
  for (const auto& r : rep.rows) ratios.push_back(r.ratio);
  rep.stats = summarize(ratios);
  return rep;
}

}  // namespace channelwave
