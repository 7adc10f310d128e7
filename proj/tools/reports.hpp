#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "channelwave/experiments.hpp"
#include "json.hpp"

namespace channelwave::cli {

enum class Command { FreeDecay, ForcingDecay, MainConstant, LemmaSweeps, Isometry, Picard, OracleValidate };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c) noexcept;

struct RunConfig {
  Command command = Command::FreeDecay;
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out_dir = "channelwave-out";
  /// CLI overrides as key = JSON value text, applied after the config file.
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// Bad config file, unknown key, wrong type: maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// Command defaults, then the config file's keys, then CLI overrides.
Json resolve_config(const RunConfig& config);
/// First 12 hex digits of the FNV-1a hash of the compact resolved config.
std::string config_hash(const Json& resolved);

struct Assertion {
  std::string criterion;
  bool pass = false;
  std::string detail;
};

struct Outcome {
  ExperimentReport report;
  std::vector<Assertion> assertions;
  bool passed() const noexcept;
};

/// Runs the experiment named by the resolved config and checks its assertions. No I/O.
Outcome execute(Command command, const Json& resolved);

/// Full pipeline: resolve, execute, write summary.json, rows.csv, fig_*.dat and
/// run.log under out_dir/<command>-<hash>, print a summary table. Returns 0, 1 or 2.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exact free wave against the finite-difference solution for a smooth bump,
/// nr = base_nr * 2^level; rows carry the relative L^2 error per level.
ExperimentReport oracle_study(int d, int levels, int base_nr, double T);

/// Isometry defect over count band-limited profiles for every (d, beta) pair.
ExperimentReport isometry_study(const std::vector<int>& dims, const std::vector<double>& betas, int count,
                                std::uint64_t seed, int resolution);

struct PicardStudyOptions {
  std::uint64_t seed = 5;
  int count = 10;
  int resolution = 24;
  double T = 1.0;
  double R = 0.0;
  /// 0 selects default_delta(3).
  double delta = 0.0;
};

/// Calibrated-threshold solve plus a perturbation family for the Lipschitz ratio.
ExperimentReport picard_study(const PicardStudyOptions& options);

}  // namespace channelwave::cli
