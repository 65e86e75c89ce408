#include "modecap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "modecap/errors.hpp"
#include "modecap/parallel.hpp"
#include "modecap/verify.hpp"

namespace modecap {

namespace {

using nlohmann::json;

constexpr char const *kCsvHeader = "a,b,d,rho,n_min,n_max,t_eff,d1,d2,d3,dof_total";

std::string fmt12(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json num(double v)
{
  if (!std::isfinite(v))
    return nullptr;
  return std::stod(fmt12(v));
}

void check_keys(json const &obj, std::string const &where, std::set<std::string> const &allowed)
{
  if (!obj.is_object())
    throw ConfigError(where + " must be an object");
  for (auto const &[key, _] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_number(json const &obj, std::string const &where, char const *key, std::optional<double> fallback)
{
  if (!obj.contains(key)) {
    if (fallback)
      return *fallback;
    throw ConfigError(where + "." + key + " is required");
  }
  auto const &v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

long long get_integer(json const &obj, std::string const &where, char const *key, long long fallback)
{
  if (!obj.contains(key))
    return fallback;
  auto const &v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::vector<double> get_grid(json const &obj, char const *key)
{
  if (!obj.contains(key))
    throw ConfigError(std::string("sweep.") + key + " is required");
  auto const &v = obj.at(key);
  std::vector<double> out;
  if (v.is_number())
    out.push_back(v.get<double>());
  else if (v.is_array())
    for (auto const &x : v) {
      if (!x.is_number())
        throw ConfigError(std::string("sweep.") + key + " must hold numbers");
      out.push_back(x.get<double>());
    }
  else
    throw ConfigError(std::string("sweep.") + key + " must be a number or a list");
  if (out.empty())
    throw ConfigError(std::string("sweep.") + key + " must not be empty");
  return out;
}

json scenario_json(Scenario const &s)
{
  return {{"radius", num(s.radius)},
          {"mid_freq", num(s.mid_freq)},
          {"half_bandwidth", num(s.half_bandwidth)},
          {"obs_time", num(s.obs_time)},
          {"wave_speed", num(s.wave_speed)},
          {"threshold", num(s.threshold)},
          {"snr_alpha_max", num(s.snr_alpha_max)}};
}

json input_json(Scenario const &s, std::optional<NormalizedParams> const &normalized)
{
  json in{{"scenario", scenario_json(s)}};
  if (normalized)
    in["normalized"] = {{"a", num(normalized->a)},
                        {"b", num(normalized->b)},
                        {"d", num(normalized->d)},
                        {"rho", num(normalized->rho)}};
  return in;
}

void write_output(std::string const &text, std::optional<std::string> const &path, std::ostream &out)
{
  if (!path || *path == "-") {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw IoError("cannot open output file '" + *path + "'");
  file << text;
  file.close();
  if (!file)
    throw IoError("failed writing output file '" + *path + "'");
}

std::string read_file(std::string const &path)
{
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::string modes_csv(Scenario const &s)
{
  std::string text = "n,critical_freq,band_lo,band_hi,eff_bandwidth,mid_band\n";
  if (s.radius == 0.0) {
    double const lo = s.mid_freq - s.half_bandwidth, hi = s.mid_freq + s.half_bandwidth;
    return text + "0,0," + fmt12(lo) + "," + fmt12(hi) + "," + fmt12(hi - lo) + "," + fmt12(s.mid_freq) + "\n";
  }
  for (auto const &m : bandwidth_profile(s).per_mode)
    text += std::to_string(m.n) + "," + fmt12(m.critical_freq) + "," + fmt12(m.band_lo) + "," + fmt12(m.band_hi) +
            "," + fmt12(m.eff_bandwidth) + "," + fmt12(m.mid_band) + "\n";
  return text;
}

struct SweepRow
{
  NormalizedParams p;
  TruncationIndices idx;
  DofBreakdown dof;
};

std::vector<SweepRow> sweep_rows(SweepGrid const &grid)
{
  std::vector<SweepRow> rows;
  for (double a : grid.a)
    for (double b : grid.b)
      for (double d : grid.d)
        for (double rho : grid.rho)
          rows.push_back({{a, b, d, rho}, {}, {}});
  for (auto const &r : rows)
    r.p.validate();
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].idx = truncation_indices(rows[i].p);
    rows[i].dof = dof_normalized_breakdown(rows[i].p);
  });
  return rows;
}

Scenario require_scenario(RunConfig const &cfg)
{
  if (!cfg.scenario)
    throw ConfigError("a 'scenario' or 'normalized' block (or --a/--b/--d/--rho) is required");
  return *cfg.scenario;
}

} // namespace

RunConfig parse_config(std::string_view text)
{
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (json::parse_error const &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config", {"scenario", "normalized", "sweep", "simulation", "output"});
  if (root.contains("scenario") && root.contains("normalized"))
    throw ConfigError("config mixes 'scenario' (SI units) and 'normalized' blocks; give exactly one");

  RunConfig cfg;
  if (root.contains("scenario")) {
    auto const &b = root["scenario"];
    check_keys(b, "scenario",
               {"radius", "mid_freq", "half_bandwidth", "obs_time", "wave_speed", "threshold", "snr_alpha_max"});
    Scenario s;
    s.radius = get_number(b, "scenario", "radius", std::nullopt);
    s.mid_freq = get_number(b, "scenario", "mid_freq", std::nullopt);
    s.half_bandwidth = get_number(b, "scenario", "half_bandwidth", std::nullopt);
    s.obs_time = get_number(b, "scenario", "obs_time", std::nullopt);
    s.wave_speed = get_number(b, "scenario", "wave_speed", kDefaultWaveSpeed);
    s.threshold = get_number(b, "scenario", "threshold", 1.0);
    s.snr_alpha_max = get_number(b, "scenario", "snr_alpha_max", 1.0);
    cfg.scenario = s;
  }
  if (root.contains("normalized")) {
    auto const &b = root["normalized"];
    check_keys(b, "normalized", {"a", "b", "d", "rho", "mid_freq", "wave_speed"});
    NormalizedParams p;
    p.a = get_number(b, "normalized", "a", std::nullopt);
    p.b = get_number(b, "normalized", "b", std::nullopt);
    p.d = get_number(b, "normalized", "d", std::nullopt);
    p.rho = get_number(b, "normalized", "rho", 1.0);
    cfg.normalized = p;
    cfg.scenario = to_scenario(p, get_number(b, "normalized", "mid_freq", 1.0),
                               get_number(b, "normalized", "wave_speed", kDefaultWaveSpeed));
  }
  if (root.contains("sweep")) {
    auto const &b = root["sweep"];
    check_keys(b, "sweep", {"a", "b", "d", "rho"});
    cfg.sweep = SweepGrid{get_grid(b, "a"), get_grid(b, "b"), get_grid(b, "d"), get_grid(b, "rho")};
  }
  if (root.contains("simulation")) {
    auto const &b = root["simulation"];
    check_keys(b, "simulation", {"sources", "freq_points", "quadrature_degree", "seed", "trials"});
    auto &sim = cfg.simulation;
    sim.sources = static_cast<int>(get_integer(b, "simulation", "sources", sim.sources));
    sim.freq_points = static_cast<int>(get_integer(b, "simulation", "freq_points", sim.freq_points));
    sim.trials = static_cast<int>(get_integer(b, "simulation", "trials", sim.trials));
    if (b.contains("quadrature_degree") && !b["quadrature_degree"].is_null())
      sim.quadrature_degree = static_cast<int>(get_integer(b, "simulation", "quadrature_degree", 0));
    if (b.contains("seed")) {
      if (!b["seed"].is_number_unsigned())
        throw ConfigError("simulation.seed must be a non-negative integer");
      sim.seed = b["seed"].get<std::uint64_t>();
    }
  }
  if (root.contains("output")) {
    auto const &b = root["output"];
    check_keys(b, "output", {"path", "format"});
    if (b.contains("path")) {
      if (!b["path"].is_string())
        throw ConfigError("output.path must be a string");
      cfg.out_path = b["path"].get<std::string>();
    }
    if (b.contains("format")) {
      if (!b["format"].is_string() || (b["format"] != "csv" && b["format"] != "json"))
        throw ConfigError("output.format must be \"csv\" or \"json\"");
      cfg.format = b["format"].get<std::string>();
    }
  }
  return cfg;
}

std::string sweep_csv(SweepGrid const &grid)
{
  std::string text = std::string(kCsvHeader) + "\n";
  for (auto const &r : sweep_rows(grid)) {
    text += fmt12(r.p.a) + "," + fmt12(r.p.b) + "," + fmt12(r.p.d) + "," + fmt12(r.p.rho) + "," +
            std::to_string(r.idx.n_min) + "," + std::to_string(r.idx.n_max) + "," + fmt12(r.dof.t_eff) + "," +
            fmt12(r.dof.d1) + "," + fmt12(r.dof.d2) + "," + fmt12(r.dof.d3) + "," + fmt12(r.dof.total) + "\n";
  }
  return text;
}

json sweep_json(SweepGrid const &grid)
{
  json rows = json::array();
  for (auto const &r : sweep_rows(grid))
    rows.push_back({{"a", num(r.p.a)},
                    {"b", num(r.p.b)},
                    {"d", num(r.p.d)},
                    {"rho", num(r.p.rho)},
                    {"n_min", r.idx.n_min},
                    {"n_max", r.idx.n_max},
                    {"t_eff", num(r.dof.t_eff)},
                    {"d1", num(r.dof.d1)},
                    {"d2", num(r.dof.d2)},
                    {"d3", num(r.dof.d3)},
                    {"dof_total", num(r.dof.total)}});
  return {{"command", "sweep"}, {"rows", rows}};
}

json compute_report(Scenario const &s, std::optional<NormalizedParams> const &normalized)
{
  s.validate();
  json report{{"command", "compute"}, {"input", input_json(s, normalized)}};
  DofBreakdown const dof = dof_bound(s);
  json modes = json::array();
  if (s.radius > 0.0) {
    auto const profile = bandwidth_profile(s);
    report["n_min"] = profile.n_min;
    report["n_max"] = profile.n_max;
    for (auto const &m : profile.per_mode)
      modes.push_back({{"n", m.n},
                       {"critical_freq", num(m.critical_freq)},
                       {"band_lo", num(m.band_lo)},
                       {"band_hi", num(m.band_hi)},
                       {"eff_bandwidth", num(m.eff_bandwidth)},
                       {"mid_band", num(m.mid_band)}});
    report["dof_mode_sum"] = num(dof_mode_sum(s));
  } else {
    // a point region carries the single mode n = 0 over the whole band
    report["n_min"] = 0;
    report["n_max"] = 0;
    modes.push_back({{"n", 0},
                     {"critical_freq", 0},
                     {"band_lo", num(s.mid_freq - s.half_bandwidth)},
                     {"band_hi", num(s.mid_freq + s.half_bandwidth)},
                     {"eff_bandwidth", num(2.0 * s.half_bandwidth)},
                     {"mid_band", num(s.mid_freq)}});
    report["dof_mode_sum"] = num(dof.total);
  }
  report["t_eff"] = num(dof.t_eff);
  report["modes"] = modes;
  report["dof"] = {{"d1", num(dof.d1)}, {"d2", num(dof.d2)}, {"d3", num(dof.d3)}, {"total", num(dof.total)}};
  return report;
}

json simulate_report(Scenario const &s, SimulationConfig const &config,
                     std::optional<NormalizedParams> const &normalized)
{
  json report = compute_report(s, normalized);
  report["command"] = "simulate";
  SimulationReport const sim = run_simulation(s, config);
  json detections = json::array();
  for (auto const &d : sim.detections)
    detections.push_back({{"n", d.n},
                          {"critical_freq", num(d.critical_freq)},
                          {"detected_freq", num(d.detected_freq)},
                          {"passed", d.passed}});
  json properties = json::array();
  for (auto const &p : sim.properties)
    properties.push_back({{"name", p.name},
                          {"passed", p.passed},
                          {"value", num(p.value)},
                          {"tolerance", num(p.tolerance)},
                          {"detail", p.detail}});
  report["simulation"] = {{"sources", config.sources},
                          {"freq_points", config.freq_points},
                          {"seed", config.seed},
                          {"trials", config.trials},
                          {"analysis_degree", sim.analysis_degree},
                          {"field_degree", sim.field_degree},
                          {"quadrature_degree", sim.quadrature_degree},
                          {"freq_step", num(sim.freq_step)},
                          {"alpha_max_sq", num(sim.alpha_max_sq)},
                          {"sigma0_sq", num(sim.sigma0_sq)},
                          {"detections", detections},
                          {"properties", properties},
                          {"passed", sim.passed()}};
  return report;
}

int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"modecap: degrees of freedom of band-limited wavefields observed over a spherical region"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> a, b, d, rho;
  bool quick = false;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", out_path, "output path ('-' for stdout)");
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_normalized = [&](CLI::App *cmd) {
    cmd->add_option("--a", a, "radius in mid-band wavelengths");
    cmd->add_option("--b", b, "half bandwidth over mid-band frequency");
    cmd->add_option("--d", d, "observation time in mid-band periods");
    cmd->add_option("--rho", rho, "best-case SNR over threshold");
  };

  auto *compute = app.add_subcommand("compute", "DoF bound, truncation indices and per-mode table");
  add_common(compute);
  add_normalized(compute);
  auto *sweep = app.add_subcommand("sweep", "closed-form DoF over an (a, b, d, rho) grid");
  add_common(sweep);
  auto *simulate = app.add_subcommand("simulate", "brute-force wavefield check of the cutoff model");
  add_common(simulate);
  add_normalized(simulate);
  simulate->add_option("--seed", seed, "random seed");
  auto *verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--quick", quick, "skip the simulation-based detectability check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e, out, err);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e, out, err);
  } catch (CLI::ParseError const &e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (verify->parsed()) {
      auto const results = run_verify_suite({CutoffModel{}, !quick});
      std::vector<std::string> failed;
      for (auto const &r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " value=" << fmt12(r.value)
            << " tolerance=" << fmt12(r.tolerance) << " (" << r.detail << ")\n";
        if (!r.passed)
          failed.push_back(r.name);
      }
      if (failed.empty())
        return kExitOk;
      err << "failing properties:";
      for (auto const &name : failed)
        err << ' ' << name;
      err << '\n';
      return kExitFailure;
    }

    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(read_file(config_path));
    if (a || b || d || rho) {
      if (cfg.scenario)
        throw ConfigError("--a/--b/--d/--rho cannot be combined with a scenario or normalized block");
      if (!a || !b || !d)
        throw ConfigError("--a, --b and --d must be given together");
      cfg.normalized = NormalizedParams{*a, *b, *d, rho.value_or(1.0)};
      cfg.scenario = to_scenario(*cfg.normalized);
    }
    if (out_path)
      cfg.out_path = out_path;
    if (format)
      cfg.format = format;
    if (seed)
      cfg.simulation.seed = *seed;

    if (compute->parsed()) {
      Scenario const s = require_scenario(cfg);
      if (cfg.format.value_or("json") == "csv")
        write_output(modes_csv(s), cfg.out_path, out);
      else
        write_output(compute_report(s, cfg.normalized).dump(2) + "\n", cfg.out_path, out);
      return kExitOk;
    }
    if (sweep->parsed()) {
      if (!cfg.sweep)
        throw ConfigError("the sweep command needs a 'sweep' block with a, b, d and rho grids");
      if (cfg.format.value_or("csv") == "csv")
        write_output(sweep_csv(*cfg.sweep), cfg.out_path, out);
      else
        write_output(sweep_json(*cfg.sweep).dump(2) + "\n", cfg.out_path, out);
      return kExitOk;
    }
    if (simulate->parsed()) {
      Scenario const s = require_scenario(cfg);
      if (cfg.format.value_or("json") != "json")
        throw ConfigError("simulate reports are JSON only");
      json const report = simulate_report(s, cfg.simulation, cfg.normalized);
      write_output(report.dump(2) + "\n", cfg.out_path, out);
      return report["simulation"]["passed"].get<bool>() ? kExitOk : kExitFailure;
    }
  } catch (ConfigError const &e) {
    err << "config error: " << e.what() << '\n';
    return kExitParse;
  } catch (DomainError const &e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (IoError const &e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (ResolutionError const &e) {
    err << "resolution error: " << e.what() << '\n';
    return kExitResolution;
  } catch (std::exception const &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

} // namespace modecap
