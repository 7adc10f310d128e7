#include "reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "channelwave/exterior_nonlinear.hpp"
#include "channelwave/fd_oracle.hpp"
#include "channelwave/parallel.hpp"
#include "channelwave/profile_io.hpp"
#include "channelwave/radial_wavefield.hpp"

namespace channelwave::cli {
namespace {

constexpr std::pair<std::string_view, Command> kCommands[] = {
    {"free-decay", Command::FreeDecay},   {"forcing-decay", Command::ForcingDecay},
    {"main-constant", Command::MainConstant}, {"lemma-sweeps", Command::LemmaSweeps},
    {"isometry", Command::Isometry},      {"picard", Command::Picard},
    {"oracle-validate", Command::OracleValidate},
};

Json defaults(Command c) {
  Json j;
  j["command"] = std::string(to_string(c));
  switch (c) {
    case Command::FreeDecay:
      j.update(Json{{"seed", 1}, {"d", 3}, {"beta", 1.0}, {"k", 0}, {"jmin", -8}, {"jmax", 8},
                    {"resolution", 64}, {"outer_tol", 0.10}, {"inner_tol", 0.05}});
      break;
    case Command::ForcingDecay:
      j.update(Json{{"seed", 1}, {"d", 3}, {"beta", 1.0}, {"k", 0}, {"jmin", -8}, {"jmax", -1},
                    {"resolution", 32}, {"slope_tol", 0.15}});
      break;
    case Command::MainConstant:
      j.update(Json{{"seed", 1}, {"d", 3}, {"beta", 1.0}, {"count", 50}, {"resolution", 16},
                    {"family", "multi-scale-sum"}, {"scale_lo", -1}, {"scale_hi", 2}, {"forcing", true},
                    {"stability_tol", 0.10}});
      break;
    case Command::LemmaSweeps:
      j.update(Json{{"seed", 11}, {"count", 100}, {"resolution", 64}, {"shells", 50}, {"shell_samples", 48},
                    {"slope_tol", 0.1}, {"stability_factor", 2.0}, {"shell_tol", 0.10}, {"bound", 1000.0}});
      break;
    case Command::Isometry:
      j.update(Json{{"seed", 3}, {"d", {3, 5}}, {"beta", {0.75, 1.0, 1.25}}, {"count", 20}, {"resolution", 128},
                    {"defect_tol", 1e-2}});
      break;
    case Command::Picard:
      j.update(Json{{"seed", 5}, {"d", 3}, {"count", 10}, {"resolution", 24}, {"T", 1.0}, {"R", 0.0},
                    {"delta", 0.0}, {"max_iter", 12}, {"residual_factor", 2.0}, {"lipschitz_max", 2.2}});
      break;
    case Command::OracleValidate:
      j.update(Json{{"seed", 1}, {"d", 3}, {"levels", 4}, {"resolution", 64}, {"T", 1.5}, {"error_tol", 1e-3},
                    {"order_min", 1.8}});
      break;
  }
  return j;
}

bool same_kind(const Json& want, const Json& got) {
  if (want.is_number()) return got.is_number();
  if (want.is_array()) return got.is_array() && std::all_of(got.begin(), got.end(), [](const Json& x) {
                                 return x.is_number();
                               });
  return want.type() == got.type();
}

void assign(Json& cfg, const std::string& key, Json value, const std::string& origin) {
  if (key == "command") throw UsageError(origin + ": 'command' cannot be overridden");
  if (!cfg.contains(key)) throw UsageError(origin + ": key '" + key + "' does not apply to " + cfg["command"].get<std::string>());
  if (cfg[key].is_array() && value.is_number()) value = Json::array({value});
  if (!same_kind(cfg[key], value)) throw UsageError(origin + ": key '" + key + "' has the wrong type");
  if (cfg[key].is_number_integer() && !value.is_number_integer()) {
    const double v = value.get<double>();
    if (v != std::floor(v)) throw UsageError(origin + ": key '" + key + "' must be an integer");
    value = static_cast<std::int64_t>(v);
  }
  cfg[key] = std::move(value);
}

int as_int(const Json& cfg, const char* key) { return cfg.at(key).get<int>(); }
double as_double(const Json& cfg, const char* key) { return cfg.at(key).get<double>(); }
std::uint64_t as_seed(const Json& cfg) {
  const auto s = cfg.at("seed").get<std::int64_t>();
  if (s < 0) throw Error(ErrorKind::Configuration, "seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

std::string num(double x) {
  std::ostringstream ss;
  ss << std::setprecision(4) << x;
  return ss.str();
}

Assertion within(const std::string& criterion, double value, double target, double tol) {
  const bool ok = std::isfinite(value) && std::abs(value - target) <= tol;
  return {criterion, ok, num(value) + " vs " + num(target) + " +/- " + num(tol)};
}

Assertion at_most(const std::string& criterion, double value, double limit) {
  return {criterion, std::isfinite(value) && value <= limit, num(value) + " <= " + num(limit)};
}

Assertion at_least(const std::string& criterion, double value, double limit) {
  return {criterion, std::isfinite(value) && value >= limit, num(value) + " >= " + num(limit)};
}

Assertion factor_stable(const std::string& criterion, double a, double b, double factor, double bound) {
  const bool ok = std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0 && a <= bound && b <= bound &&
                  std::max(a / b, b / a) <= factor;
  return {criterion, ok, num(a) + " -> " + num(b) + " within x" + num(factor)};
}

Outcome free_decay(const Json& cfg) {
  const ExponentSet e = matching_exponents(as_int(cfg, "d"), as_double(cfg, "beta"));
  Outcome o{single_channel_decay(e, as_int(cfg, "k"), as_int(cfg, "jmin"), as_int(cfg, "jmax"),
                                 as_int(cfg, "resolution"), nullptr, experiment_quadrature()),
            {}};
  for (const auto& f : o.report.fits) {
    const double tol = f.name == "outer" ? as_double(cfg, "outer_tol") : as_double(cfg, "inner_tol");
    o.assertions.push_back(within("free-decay " + f.name + " slope", f.slope, f.predicted, tol));
  }
  if (o.assertions.empty()) o.assertions.push_back({"free-decay slope fits", false, "no regime in [jmin, jmax]"});
  return o;
}

Outcome forcing_decay_run(const Json& cfg) {
  const ExponentSet e = matching_exponents(as_int(cfg, "d"), as_double(cfg, "beta"));
  Outcome o{forcing_decay(e, as_int(cfg, "k"), as_int(cfg, "jmin"), as_int(cfg, "jmax"), as_int(cfg, "resolution"),
                          experiment_quadrature()),
            {}};
  const SlopeFit& f = o.report.fit("inner");
  o.assertions.push_back(within("forcing-decay inner slope", f.slope, f.predicted, as_double(cfg, "slope_tol")));
  return o;
}

Outcome main_constant(const Json& cfg) {
  EnsembleSpec spec;
  spec.seed = as_seed(cfg);
  spec.count = as_int(cfg, "count");
  spec.resolution = as_int(cfg, "resolution");
  spec.family = parse_family(cfg.at("family").get<std::string>());
  spec.scale_lo = as_int(cfg, "scale_lo");
  spec.scale_hi = as_int(cfg, "scale_hi");
  spec.forcing = cfg.at("forcing").get<bool>();
  spec.e = matching_exponents(as_int(cfg, "d"), as_double(cfg, "beta"));
  Outcome o{estimate_constant(spec), {}};
  const double tol = as_double(cfg, "stability_tol");
  o.assertions.push_back(at_most("main-constant count stability", o.report.metric("stability_count"), tol));
  o.assertions.push_back(at_most("main-constant resolution stability", o.report.metric("stability_resolution"), tol));
  o.assertions.push_back({"main-constant nonempty ensemble", o.report.metric("empty") == 0.0, "finite ratios present"});
  return o;
}

Outcome lemma_sweep_run(const Json& cfg) {
  LemmaSweepOptions opt;
  opt.seed = as_seed(cfg);
  opt.count = as_int(cfg, "count");
  opt.resolution = as_int(cfg, "resolution");
  opt.shells = as_int(cfg, "shells");
  opt.shell_samples = as_int(cfg, "shell_samples");
  Outcome o{lemma_sweeps(opt), {}};
  const ExperimentReport& r = o.report;
  const double factor = as_double(cfg, "stability_factor");
  const double bound = as_double(cfg, "bound");
  for (const auto& f : r.fits) o.assertions.push_back(within(f.name + " slope", f.slope, f.predicted, as_double(cfg, "slope_tol")));
  for (const char* g : {"-0.25", "0", "0.25"}) {
    const std::string t = std::string("_g") + g;
    o.assertions.push_back(factor_stable("sharp decomposition" + t, r.metric("sharp" + t + "_h"),
                                         r.metric("sharp" + t + "_h2"), factor, bound));
    o.assertions.push_back(factor_stable("smooth decomposition" + t, r.metric("smooth" + t + "_h"),
                                         r.metric("smooth" + t + "_h2"), factor, bound));
    o.assertions.push_back(factor_stable("cutoff count" + t, r.metric("cutoff" + t + "_n"),
                                         r.metric("cutoff" + t + "_2n"), factor, bound));
    o.assertions.push_back(factor_stable("cutoff resolution" + t, r.metric("cutoff" + t + "_n"),
                                         r.metric("cutoff" + t + "_h2"), factor, bound));
  }
  const double shell_tol = as_double(cfg, "shell_tol");
  for (int d : {3, 5}) {
    for (int qt : {2, 4}) {
      const std::string t = "_d" + std::to_string(d) + "_q" + std::to_string(qt);
      o.assertions.push_back(
          factor_stable("shell bound" + t, r.metric("shell" + t + "_coarse"), r.metric("shell" + t + "_fine"),
                        1.0 + shell_tol, bound));
    }
  }
  return o;
}

Outcome isometry_run(const Json& cfg) {
  std::vector<int> dims;
  std::vector<double> betas;
  for (const auto& x : cfg.at("d")) dims.push_back(x.get<int>());
  for (const auto& x : cfg.at("beta")) betas.push_back(x.get<double>());
  Outcome o{isometry_study(dims, betas, as_int(cfg, "count"), as_seed(cfg), as_int(cfg, "resolution")), {}};
  o.assertions.push_back(at_most("isometry defect", o.report.stats.max, as_double(cfg, "defect_tol")));
  return o;
}

Outcome picard_run(const Json& cfg) {
  if (as_int(cfg, "d") != 3) throw Error(ErrorKind::Domain, "picard runs in d = 3");
  PicardStudyOptions opt;
  opt.seed = as_seed(cfg);
  opt.count = as_int(cfg, "count");
  opt.resolution = as_int(cfg, "resolution");
  opt.T = as_double(cfg, "T");
  opt.R = as_double(cfg, "R");
  opt.delta = as_double(cfg, "delta");
  Outcome o{picard_study(opt), {}};
  const ExperimentReport& r = o.report;
  o.assertions.push_back({"picard calibrated convergence", r.metric("calibrated_converged") == 1.0, "converged flag"});
  o.assertions.push_back(at_most("picard iterations", r.metric("calibrated_iterations"), as_double(cfg, "max_iter")));
  o.assertions.push_back(at_most("picard residual", r.metric("max_residual_ratio"), as_double(cfg, "residual_factor")));
  o.assertions.push_back(at_most("picard lipschitz", r.metric("max_lipschitz"), as_double(cfg, "lipschitz_max")));
  return o;
}

Outcome oracle_run(const Json& cfg) {
  Outcome o{oracle_study(as_int(cfg, "d"), as_int(cfg, "levels"), as_int(cfg, "resolution"), as_double(cfg, "T")), {}};
  o.assertions.push_back(at_most("oracle error", o.report.metric("error_finest"), as_double(cfg, "error_tol")));
  o.assertions.push_back(at_least("oracle order", o.report.metric("order"), as_double(cfg, "order_min")));
  return o;
}

InitialDataPair bump_data(double center, double width, double amplitude, double kappa) {
  const double h = 1.0 / 64.0;
  const auto length = static_cast<std::size_t>(std::ceil((center + width) / h)) + 4;
  InitialDataPair p;
  p.d = 3;
  p.rgrid = {h, h, length};
  p.u0.assign(length, 0.0);
  p.u1.assign(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const double r = p.rgrid.position(i);
    if (r <= center || r >= center + width) continue;
    const double s = std::sin(kPi * (r - center) / width);
    p.u1[i] = amplitude * s * s;
    p.u0[i] = amplitude * kappa * s * s * s * s;
  }
  return p;
}

struct PicardRun {
  PicardResult result;
  double residual = 0.0;
};

PicardRun solve_with_residual(const ExteriorProblem& prob, const PicardOptions& opt) {
  PicardRun run{picard_solve(prob, opt), 0.0};
  const ChannelWindow w = exterior_channels(prob, opt);
  const ExteriorSolution next = picard_map(prob, run.result.free_part, run.result.solution);
  run.residual = y_norm(difference(next, run.result.solution), prob.dimension(), w);
  return run;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [n, c] : kCommands) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Command c) noexcept {
  for (const auto& [n, cc] : kCommands) {
    if (cc == c) return n;
  }
  return "unknown";
}

bool Outcome::passed() const noexcept {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

Json resolve_config(const RunConfig& config) {
  Json cfg = defaults(config.command);
  if (config.config_path) {
    if (!std::filesystem::exists(*config.config_path)) {
      throw UsageError("config file not found: " + config.config_path->string());
    }
    Json file;
    try {
      file = Json::parse(read_text(*config.config_path));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config is not valid JSON: " + std::string(e.what()));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (!file.is_object()) throw UsageError("config must be a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      if (it.key() == "command") {
        if (it.value() != cfg["command"]) throw UsageError("config names a different command");
        continue;
      }
      assign(cfg, it.key(), it.value(), "config");
    }
  }
  for (const auto& [key, text] : config.overrides) {
    Json value;
    try {
      value = Json::parse(text);
    } catch (const nlohmann::json::exception&) {
      throw UsageError("--" + key + ": not a number: " + text);
    }
    assign(cfg, key, value, "--" + key);
  }
  return cfg;
}

std::string config_hash(const Json& resolved) { return hex64(fnv1a(resolved.dump())).substr(0, 12); }

Outcome execute(Command command, const Json& resolved) {
  switch (command) {
    case Command::FreeDecay: return free_decay(resolved);
    case Command::ForcingDecay: return forcing_decay_run(resolved);
    case Command::MainConstant: return main_constant(resolved);
    case Command::LemmaSweeps: return lemma_sweep_run(resolved);
    case Command::Isometry: return isometry_run(resolved);
    case Command::Picard: return picard_run(resolved);
    case Command::OracleValidate: return oracle_run(resolved);
  }
  throw UsageError("unknown command");
}

ExperimentReport oracle_study(int d, int levels, int base_nr, double T) {
  if (levels < 2) throw Error(ErrorKind::Configuration, "oracle study needs at least 2 levels");
  require_odd_dimension(d, 3, 13);
  const GridSpec grid{1.0 / 256.0, 0.0, 4 * 256 + 1};
  const SampledProfile bump = SampledProfile::sample(
      [](double s) { return s > 1.5 && s < 3.5 ? std::pow(std::sin(kPi * (s - 1.5) / 2.0), 4) : 0.0; }, grid);
  const RadialFreeWave wave(remove_low_moments(bump, d), d);
  const double rmax = 6.0;

  ExperimentReport rep;
  rep.name = "oracle-validate";
  rep.provenance = {{"d", std::to_string(d)},
                    {"rmax", format_double(rmax)},
                    {"T", format_double(T)},
                    {"profile", "sin^4 bump on [1.5, 3.5], low moments removed"},
                    {"scheme", "finite-volume leapfrog, dt = dr / 2"}};
  std::vector<double> errors;
  double drift = 0.0;
  Figure fig{"convergence", {"nr", "error"}, {}};
  for (int level = 0; level < levels; ++level) {
    const int nr = base_nr << level;
    FdGrid g{rmax, nr, 0.5 * rmax / nr, 0, d};
    g.nt = static_cast<int>(std::lround(T / g.dt));
    const FdSolution sol = fd_solve([&](double r) { return r > 0.0 ? wave.value(r, 0.0) : 0.0; },
                                    [&](double r) { return r > 0.0 ? wave.time_derivative(r, 0.0) : 0.0; }, nullptr,
                                    g, std::max(g.nt, 1));
    const double err = relative_l2_error(sol.field, sol.field.nt(), [&](double r, double t) { return wave.value(r, t); }, d);
    const double e0 = sol.energy.front();
    for (double e : sol.energy) drift = std::max(drift, std::abs(e - e0) / std::abs(e0));
    errors.push_back(err);
    rep.rows.push_back({static_cast<std::size_t>(level), "level", "", err, 0.0, err, {{"nr", double(nr)}}});
    fig.rows.push_back({double(nr), err});
  }
  const ConvergenceResult conv = convergence_order(errors);
  rep.figures.push_back(std::move(fig));
  rep.stats = summarize(errors);
  rep.metrics = {{"error_finest", errors.back()},
                 {"order", conv.order},
                 {"flagged", conv.flagged ? 1.0 : 0.0},
                 {"energy_drift", drift}};
  return rep;
}

ExperimentReport isometry_study(const std::vector<int>& dims, const std::vector<double>& betas, int count,
                                std::uint64_t seed, int resolution) {
  if (count < 1 || resolution < 16 || dims.empty() || betas.empty()) {
    throw Error(ErrorKind::Configuration, "isometry study needs count >= 1, resolution >= 16, some d and beta");
  }
  ExperimentReport rep;
  rep.name = "isometry";
  rep.provenance = {{"seed", std::to_string(seed)},
                    {"count", std::to_string(count)},
                    {"resolution", std::to_string(resolution)},
                    {"family", "band-limited"},
                    {"norm", "2 sigma_{d-1} hnorm(G, beta - 1)^2"}};
  Figure fig{"defects", {"d", "beta", "max_defect"}, {}};
  std::size_t index = 0;
  for (int d : dims) {
    std::vector<RadialFreeWave> waves;
    std::vector<std::string> hashes;
    for (int i = 0; i < count; ++i) {
      auto rng = instance_rng(seed + 1000003ull * static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(i));
      const SampledProfile g = band_limited_profile(rng, 1.0 / resolution, d);
      std::string bytes(reinterpret_cast<const char*>(g.samples().data()), g.samples().size() * sizeof(double));
      hashes.push_back(hex64(fnv1a(bytes)));
      waves.emplace_back(g, d);
    }
    for (double beta : betas) {
      std::vector<double> defects(waves.size());
      parallel_for(waves.size(), [&](std::size_t i) { defects[i] = isometry_defect(waves[i], beta); });
      double worst = 0.0;
      for (std::size_t i = 0; i < defects.size(); ++i) {
        rep.rows.push_back({index++, "d" + std::to_string(d) + "_beta" + format_double(beta), hashes[i], defects[i],
                            0.0, defects[i], {{"d", double(d)}, {"beta", beta}}});
        worst = std::max(worst, defects[i]);
      }
      fig.rows.push_back({double(d), beta, worst});
    }
  }
  std::vector<double> all;
  for (const auto& r : rep.rows) all.push_back(r.ratio);
  rep.stats = summarize(all);
  rep.metrics = {{"max_defect", rep.stats.max}};
  rep.figures.push_back(std::move(fig));
  return rep;
}

ExperimentReport picard_study(const PicardStudyOptions& options) {
  if (options.count < 1) throw Error(ErrorKind::Configuration, "picard study needs count >= 1");
  const double delta = options.delta > 0.0 ? options.delta : default_delta(3);
  PicardOptions opt;
  opt.delta = delta;
  opt.resolution = options.resolution;

  auto problem = [&](const InitialDataPair& data) {
    return ExteriorProblem{LinearEvolution(data), options.R, -1, options.T, 1.0};
  };
  auto unit_norm = [&](double c, double w, double kappa) {
    PicardOptions probe = opt;
    probe.delta = 0.0;
    probe.max_iter = 1;
    return picard_solve(problem(bump_data(c, w, 1.0, kappa)), probe).trace.free_y_norm;
  };

  ExperimentReport rep;
  rep.name = "picard";
  rep.provenance = {{"seed", std::to_string(options.seed)},
                    {"count", std::to_string(options.count)},
                    {"resolution", std::to_string(options.resolution)},
                    {"T", format_double(options.T)},
                    {"R", format_double(options.R)},
                    {"delta", format_double(delta)},
                    {"nonlinearity", "-|u|^4 u, d = 3"}};

  const double c0 = 1.0;
  const double w0 = 1.0;
  const double amp0 = 0.99 * delta / unit_norm(c0, w0, 0.0);
  const PicardRun cal = solve_with_residual(problem(bump_data(c0, w0, amp0, 0.0)), opt);
  const PicardTrace& tr = cal.result.trace;
  std::size_t index = 0;
  rep.rows.push_back({index++, "calibrated", "", double(tr.iterations), double(opt.max_iter), cal.residual / tr.tol,
                      {{"free_y", tr.free_y_norm}, {"residual", cal.residual}, {"tol", tr.tol},
                       {"first_contraction", tr.contraction.empty() ? 0.0 : tr.contraction.front()}}});
  Figure trace_fig{"picard_trace", {"iteration", "diff_norm", "y_norm", "nonlinear_bound"}, {}};
  for (std::size_t n = 0; n < tr.diff_norms.size(); ++n) {
    trace_fig.rows.push_back({double(n + 1), tr.diff_norms[n], tr.y_norms[n], tr.nonlinear_bound[n]});
  }
  rep.figures.push_back(std::move(trace_fig));

  double max_residual = cal.residual / tr.tol;
  double max_lipschitz = 0.0;
  Figure lip_fig{"lipschitz", {"case", "free_y", "ratio"}, {}};
  for (int i = 0; i < options.count; ++i) {
    auto rng = instance_rng(options.seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double c = 0.5 + U(rng);
    const double w = 0.5 + U(rng);
    const double kappa = U(rng) - 0.5;
    const double frac = 0.3 + 0.6 * U(rng);
    const double eps = 0.05 + 0.25 * U(rng);
    const double shift = 0.1 * (U(rng) - 0.5);
    const double amp_a = frac * delta / unit_norm(c, w, kappa);
    const double amp_b = (1.0 - eps) * frac * delta / unit_norm(c, w, kappa + shift);
    const InitialDataPair da = bump_data(c, w, amp_a, kappa);
    const InitialDataPair db = bump_data(c, w, amp_b, kappa + shift);
    const ExteriorProblem pa = problem(da);
    const ExteriorProblem pb = problem(db);
    PicardOptions shared = opt;
    shared.r_extent = std::max(pa.linear.reach(), pb.linear.reach()) + options.T + 2.0 / options.resolution;
    const PicardRun ra = solve_with_residual(pa, shared);
    const PicardRun rb = solve_with_residual(pb, shared);
    const ChannelWindow win = exterior_channels(pa, shared);
    const double base = y_norm(difference(ra.result.free_part, rb.result.free_part), 3, win);
    const double gap = y_norm(difference(ra.result.solution, rb.result.solution), 3, win);
    const double ratio = gap / base;
    const double res = std::max(ra.residual / ra.result.trace.tol, rb.residual / rb.result.trace.tol);
    max_residual = std::max(max_residual, res);
    max_lipschitz = std::max(max_lipschitz, ratio);
    rep.rows.push_back({index++, "lipschitz", "", gap, base, ratio,
                        {{"free_y", ra.result.trace.free_y_norm}, {"residual", res},
                         {"iterations", double(std::max(ra.result.trace.iterations, rb.result.trace.iterations))},
                         {"converged", ra.result.trace.converged && rb.result.trace.converged ? 1.0 : 0.0}}});
    lip_fig.rows.push_back({double(i), ra.result.trace.free_y_norm, ratio});
  }
  rep.figures.push_back(std::move(lip_fig));
  std::vector<double> ratios;
  for (const auto& r : rep.rows) {
    if (r.group == "lipschitz") ratios.push_back(r.ratio);
  }
  rep.stats = summarize(ratios);
  rep.metrics = {{"delta", delta},
                 {"calibrated_iterations", double(tr.iterations)},
                 {"calibrated_converged", tr.converged ? 1.0 : 0.0},
                 {"calibrated_residual_ratio", cal.residual / tr.tol},
                 {"max_residual_ratio", max_residual},
                 {"max_lipschitz", max_lipschitz}};
  return rep;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Json cfg;
  try {
    cfg = resolve_config(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  const std::string hash = config_hash(cfg);
  const std::string command(to_string(config.command));
  const std::filesystem::path dir = config.out_dir / (command + "-" + hash);

  const auto start = std::chrono::system_clock::now();
  Outcome outcome;
  try {
    outcome = execute(config.command, cfg);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::system_clock::now() - start).count();

  try {
    std::filesystem::create_directories(dir);
    Json summary = Json::parse(summary_json(outcome.report, cfg.dump()));
    summary["config_hash"] = hash;
    summary["assertions"] = Json::array();
    for (const auto& a : outcome.assertions) {
      summary["assertions"].push_back({{"criterion", a.criterion}, {"pass", a.pass}, {"detail", a.detail}});
    }
    summary["passed"] = outcome.passed();
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    write_text(dir / "rows.csv", rows_csv(outcome.report));
    for (const Figure& f : outcome.report.figures) {
      write_text(dir / ("fig_" + f.name + ".dat"), "# config " + hash + "\n" + figure_dat(f));
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream log;
    log << "finished " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << "\n"
        << "command " << command << "\n"
        << "config_hash " << hash << "\n"
        << "threads " << worker_count() << "\n"
        << "elapsed_s " << elapsed << "\n"
        << "passed " << (outcome.passed() ? "yes" : "no") << "\n";
    write_text(dir / "run.log", log.str());
  } catch (const std::exception& e) {
    err << "usage error: cannot write reports: " << e.what() << "\n";
    return 2;
  }

  const ExperimentReport& r = outcome.report;
  out << command << "  config " << hash << "  -> " << dir.string() << "\n";
  out << "  rows " << r.rows.size() << "  finite " << r.stats.count << "  max " << num(r.stats.max) << "  mean "
      << num(r.stats.mean) << "  q90 " << num(r.stats.q90) << "\n";
  for (const auto& f : r.fits) {
    out << "  fit " << std::left << std::setw(14) << f.name << " slope " << num(f.slope) << " +/- " << num(f.half_width)
        << "  predicted " << num(f.predicted) << "  (" << f.points << " pts)\n";
  }
  for (const auto& [k, v] : r.metrics) out << "  " << std::left << std::setw(28) << k << num(v) << "\n";
  for (const auto& a : outcome.assertions) {
    out << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.criterion << ": " << a.detail << "\n";
  }
  if (!outcome.passed()) {
    for (const auto& a : outcome.assertions) {
      if (!a.pass) err << "assertion failed: " << a.criterion << " (" << a.detail << ")\n";
    }
    return 1;
  }
  return 0;
}

}  // namespace channelwave::cli
