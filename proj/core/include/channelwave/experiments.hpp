#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "channelwave/channel_norms.hpp"
#include "channelwave/profile_space.hpp"
#include "channelwave/propagator.hpp"
#include "channelwave/radial_wavefield.hpp"

namespace channelwave {

enum class ProfileFamily { DyadicBump, BandLimited, MultiScaleSum };

std::string_view to_string(ProfileFamily f) noexcept;
/// Accepts "dyadic-bump", "band-limited", "multi-scale-sum"; throws Configuration otherwise.
ProfileFamily parse_family(std::string_view name);

struct EnsembleSpec {
  std::uint64_t seed = 1;
  int count = 50;
  ProfileFamily family = ProfileFamily::MultiScaleSum;
  int scale_lo = -1;
  int scale_hi = 2;
  ExponentSet e{};
  /// Samples per unit of the finest scale 2^{scale_lo}.
  int resolution = 16;
  /// Multi-scale instances also carry 0-2 channel-localized forcing pieces.
  bool forcing = true;
};

struct SlopeFit {
  std::string name;
  double slope = 0.0;
  double half_width = 0.0;
  double predicted = 0.0;
  int points = 0;
};

struct ReportRow {
  std::size_t index = 0;
  std::string group;
  std::string input_hash;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> extra;
};

struct Figure {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct SummaryStats {
  std::size_t count = 0;
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

/// Order statistics of the finite entries (linear interpolation between ranks).
SummaryStats summarize(std::span<const double> values);

struct ExperimentReport {
  std::string name;
  std::vector<ReportRow> rows;
  std::vector<SlopeFit> fits;
  std::vector<Figure> figures;
  SummaryStats stats;
  /// Named scalar results (stability metrics, constants, sweep maxima).
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> provenance;

  /// Value of a metric; throws InvalidInput if absent.
  double metric(std::string_view key) const;
  const SlopeFit& fit(std::string_view name) const;
};

/// (p, q) paired with beta for the decay studies and (pt, qt) = (1, q~) on the
/// forcing side. beta = 1 gives p = (d+2)/(d-2); for d = 3, beta = 0.75 and
/// 1.25 use p = 4 and p = 8. Other betas keep p = (d+2)/(d-2) when that leaves q finite.
ExponentSet matching_exponents(int d, double beta);

/// Deterministic per-instance generator from (seed, index).
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

/// Grid covering [-2^{k_hi+1}, 2^{k_hi+1}] with spacing 2^{k_lo} / resolution.
GridSpec profile_grid(int k_lo, int k_hi, int resolution);

/// amplitude * sin^2 bump filling [2^k, 2^{k+1}] (or its mirror when negative_side).
SampledProfile dyadic_bump(const GridSpec& grid, int k, double amplitude, bool negative_side = false);

/// Gaussian-modulated cosine with randomized center, width and frequency, low
/// moments removed for dimension d.
SampledProfile band_limited_profile(std::mt19937_64& rng, double spacing, int d);

/// amplitude * sin^2 in y = r - |t| across Omega_k times cos^2(pi t / 2^{k+1}) on |t| <= 2^k.
double channel_forcing_value(int k, double amplitude, double r, double t) noexcept;
ForcingField channel_forcing(int k, double amplitude, int d, int resolution);
RadialField forcing_field(const ForcingField& f);

/// Quadrature used by the ensemble experiments.
ChannelQuadrature experiment_quadrature();

/// ||chi_j u|| / hnorm(G, beta - 1) over j in [j_lo, j_hi] with fits of the log2
/// ratio against j - k on j - k >= 1 (predicted 1/2 - beta) and j - k <= -2
/// (predicted 1/q). The default profile is dyadic_bump(k).
ExperimentReport single_channel_decay(const ExponentSet& e, int k, int j_lo, int j_hi, int resolution = 64,
                                      const SampledProfile* profile = nullptr,
                                      const ChannelQuadrature& quad = {});

/// ||chi_j u_k|| / ||F_k||_{L^p~ L^q~} for the zero-data solution forced by
/// channel_forcing(k); fit against j - k over j <= k - 1 (predicted 1/q).
ExperimentReport forcing_decay(const ExponentSet& e, int k, int j_lo, int j_hi, int resolution = 32,
                               const ChannelQuadrature& quad = {});

struct MainRatio {
  double lhs = 0.0;
  double data_norm = 0.0;
  double forcing_norm = 0.0;
  double ratio = 0.0;
  ChannelNormVector channels;
};

/// l^2 channel aggregate of free wave + Duhamel part over the data norm
/// sqrt(2 sigma_{d-1}) hnorm(G, beta - 1) plus the l^2 sum of ||chi_k F||_{L^p~ L^q~}.
/// Each forcing piece must be channel-tagged with a distinct k.
MainRatio main_inequality_ratio(const SampledProfile* profile, std::span<const ForcingField> forcing,
                                const ExponentSet& e, int jmin, int jmax, Interval window = {},
                                const ChannelQuadrature& quad = experiment_quadrature());

struct Instance {
  SampledProfile profile;
  std::vector<ForcingField> forcing;
  std::string hash;
};

/// Instance index of an ensemble at the given resolution.
Instance make_instance(const EnsembleSpec& spec, std::size_t index);

/// Ratios for instances [0, spec.count) with channels [scale_lo - 6, scale_hi + 6].
ExperimentReport run_ensemble(const EnsembleSpec& spec);

/// run_ensemble at (count, res), (2 count, res), (count, 2 res); metrics
/// max, stability_count, stability_resolution.
ExperimentReport estimate_constant(const EnsembleSpec& spec);

struct LemmaSweepOptions {
  std::uint64_t seed = 11;
  int count = 100;
  int resolution = 64;
  int shells = 50;
  int shell_samples = 48;
};

/// Interval-length scale sweep, sharp and smooth dyadic decompositions, cutoff
/// uniformity and the shell pointwise bound, aggregated into one report.
ExperimentReport lemma_sweeps(const LemmaSweepOptions& options = {});

/// Max over profiles of sum_k hnorm(G_k)^2 / hnorm(g)^2 at the given spacing;
/// smooth uses phi_k(|s|) g in place of the sharp pieces.
double decomposition_constant(std::uint64_t seed, int count, double spacing, double gamma, bool smooth);
/// Max over (profile, interval) of hnorm(chi_J g) / hnorm(g).
double cutoff_sup(std::uint64_t seed, int count, double spacing, double gamma);
/// Max over random shells of pointwise_bound_ratio on a samples x samples (r, t) set.
double shell_bound_max(std::uint64_t seed, int shells, int d, double qt, int samples);

}  // namespace channelwave
