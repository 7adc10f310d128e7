#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "channelwave/channel_norms.hpp"
#include "channelwave/experiments.hpp"
#include "channelwave/exterior_nonlinear.hpp"
#include "channelwave/profile_space.hpp"
#include "channelwave/propagator.hpp"
#include "channelwave/radial_wavefield.hpp"

namespace channelwave {

/// Sidecar path of a CSV file: same stem, `.json` extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// `s,value` rows plus the {spacing, origin, length} sidecar.
void write_profile(const SampledProfile& g, const std::filesystem::path& csv);
/// Throws InvalidInput on a malformed file, a length mismatch or samples off the sidecar grid.
SampledProfile read_profile(const std::filesystem::path& csv);

/// `r,t,value` rows, r fastest.
std::string field_csv(const std::function<double(double, double)>& u, std::span<const double> r,
                      std::span<const double> t);
/// `r,u0,u1` columns.
std::string data_pair_csv(const InitialDataPair& data);

/// Forcing samples as `r,t,value` with the grid (and k, when tagged) in the sidecar.
void write_forcing(const ForcingField& f, const std::filesystem::path& csv);
ForcingField read_forcing(const std::filesystem::path& csv, int d);

/// `j,norm` rows plus {aggregate, jmin, jmax, exponents: {p, q}}.
void write_channel_vector(const ChannelNormVector& v, const std::filesystem::path& csv);

std::string solution_csv(const ExteriorSolution& u);
std::string picard_trace_json(const PicardTrace& trace);

/// summary.json: name, stats, fits, metrics, provenance and the resolved config
/// (a JSON document, embedded verbatim as an object).
std::string summary_json(const ExperimentReport& report, const std::string& config_json);
/// rows.csv: index, group, input_hash, lhs, rhs, ratio, then the union of extra keys in first-seen order.
std::string rows_csv(const ExperimentReport& report);
/// gnuplot-ready table with a `#` header line.
std::string figure_dat(const Figure& figure);

/// Shortest round-trip decimal form; nan and inf spelled out.
std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace channelwave
