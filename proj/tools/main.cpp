#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "channelwave/profile_io.hpp"
#include "reports.hpp"

int main(int argc, char** argv) {
  using namespace channelwave;
  CLI::App app{"Channel-localized wave estimates: experiments and reports"};
  app.require_subcommand(1);
  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment and write its reports");

  std::string command;
  std::optional<std::string> config_path;
  std::string out_dir = "channelwave-out";
  std::optional<std::int64_t> seed;
  std::optional<int> d, count, jmin, jmax, resolution;
  std::optional<double> beta;

  run_cmd->add_option("command", command,
                      "free-decay | forcing-decay | main-constant | lemma-sweeps | isometry | picard | oracle-validate")
      ->required();
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--d", d, "Spatial dimension (odd)");
  run_cmd->add_option("--beta", beta, "Regularity beta");
  run_cmd->add_option("--count", count, "Ensemble size");
  run_cmd->add_option("--jmin", jmin, "Lowest channel index");
  run_cmd->add_option("--jmax", jmax, "Highest channel index");
  run_cmd->add_option("--resolution", resolution, "Samples per unit length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto parsed = cli::parse_command(command);
  if (!parsed) {
    std::cerr << "usage error: unknown command '" << command << "'\n";
    return 2;
  }
  cli::RunConfig cfg;
  cfg.command = *parsed;
  if (config_path) cfg.config_path = *config_path;
  cfg.out_dir = out_dir;
  if (seed) cfg.overrides.emplace_back("seed", std::to_string(*seed));
  if (d) cfg.overrides.emplace_back("d", std::to_string(*d));
  if (beta) cfg.overrides.emplace_back("beta", format_double(*beta));
  if (count) cfg.overrides.emplace_back("count", std::to_string(*count));
  if (jmin) cfg.overrides.emplace_back("jmin", std::to_string(*jmin));
  if (jmax) cfg.overrides.emplace_back("jmax", std::to_string(*jmax));
  if (resolution) cfg.overrides.emplace_back("resolution", std::to_string(*resolution));
  return cli::run(cfg, std::cout, std::cerr);
}
