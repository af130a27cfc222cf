#include "commands.hpp"

#include "darkmeter/attenuation.hpp"
#include "darkmeter/budget.hpp"
#include "darkmeter/csv.hpp"
#include "darkmeter/error.hpp"
#include "darkmeter/evidence.hpp"
#include "darkmeter/jzs.hpp"
#include "darkmeter/json_io.hpp"
#include "darkmeter/simulator.hpp"
#include "darkmeter/sweep.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace darkmeter::cli {

namespace {

struct Options
{
  std::string config;
  std::string data;
  std::string summary_stats;
  std::string out;
  std::string draws_out;
  std::string fit_out;
  std::string fit_table;
  std::string table;
  std::string f_grid;
  std::optional<std::uint64_t> seed;
  double f = 10.0;
  std::size_t chains = 4;
  std::size_t warmup = 2000;
  std::size_t draws = default_total_kept / 4;
  double mass = 0.95;
  double fit_threshold = default_fit_threshold;
  double saturation_cutoff = 1e6;
  bool weighted = false;
  int block_len = 10;
  std::int64_t interval_len = 1;
  bool keep_first = false;
  std::string closed_rate;
  std::string lab_rate;
  std::optional<double> source_sd;
  std::string delta_b;
  std::string delta_m;
  double q = 1.0;
  double rho_ratio = 0.0;
  std::string rho_sweep_out;
  double rho_min = 1e-5;
  double rho_max = 0.9;
  std::size_t rho_points = 50;
  double var_rd = 0.0;
  std::size_t n = 0;
  double upper = 0.0;
  double diameter_mm = 0.0;
  double closed_b = 0.0;
  double closed_m = 0.0;
  std::optional<double> t;
  double scale = 0.707;
  std::string side = "positive";
  std::string manifest;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out)
    throw InputError("failed writing '" + path + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ','))
    values.push_back(parse_double(cell, 0, flag));
  return values;
}

GaussianEstimate parse_estimate(const std::string& text, const std::string& flag)
{
  const auto v = parse_list(text, flag);
  if (v.size() != 2)
    throw InputError(flag + " expects 'mean,sd'", 0, flag);
  return {v[0], v[1]};
}

SeriesSummary parse_summary_stats(const std::string& text)
{
  const auto v = parse_list(text, "--summary-stats");
  if (v.size() != 3 || !(v[2] >= 2.0) || v[2] != std::floor(v[2]))
    throw InputError("--summary-stats expects 'mean,variance,n' with integer n >= 2", 0, "--summary-stats");
  return summary_from_stats(v[0], v[1], static_cast<std::size_t>(v[2]));
}

std::uint64_t resolve_seed(const Options& o, std::optional<std::uint64_t> from_config = std::nullopt)
{
  if (o.seed)
    return *o.seed;
  if (from_config)
    return *from_config;
  if (const char* env = std::getenv("DARKMETER_SEED")) {
    std::uint64_t s = 0;
    const std::string_view v(env);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw InputError("DARKMETER_SEED is not a non-negative integer", 0, "DARKMETER_SEED");
    return s;
  }
  return 1;
}

std::string to_text(double v)
{
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string to_csv_cell(double v)
{
  return std::isfinite(v) ? to_text(v) : std::string(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
}

class Manifest
{
public:
  Manifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv))
  {}

  void add_input(const std::string& path)
  {
    inputs_.push_back({{"path", path}, {"fnv1a64", file_fnv1a64(path)}});
  }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  Json& config() { return config_; }
  const Json& inputs() const { return inputs_; }

  void write(const std::string& path, double wall_seconds) const
  {
    Json doc = {
      {"command", command_},
      {"argv", argv_},
      {"config", config_},
      {"inputs", inputs_},
      {"outputs", outputs_},
      {"seed", seed_ ? Json(*seed_) : Json(nullptr)},
      {"version", version},
      {"wall_seconds", wall_seconds},
    };
    write_file(path, doc.dump(2) + "\n");
  }

private:
  std::string command_;
  std::vector<std::string> argv_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
};

ShutterProtocol protocol_from(const Options& o)
{
  ShutterProtocol p;
  p.block_len = o.block_len;
  p.interval_len = o.interval_len;
  p.discard_first = !o.keep_first;
  p.validate();
  return p;
}

McmcConfig mcmc_from(const Options& o, std::uint64_t seed)
{
  McmcConfig cfg;
  cfg.chains = o.chains;
  cfg.warmup_draws = o.warmup;
  cfg.kept_draws = o.draws;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

Json mcmc_json(const McmcConfig& cfg)
{
  return {{"chains", cfg.chains},
          {"warmup_draws", cfg.warmup_draws},
          {"kept_draws", cfg.kept_draws},
          {"target_total_kept", cfg.total_kept()},
          {"seed", cfg.seed}};
}

Json summary_json(const SeriesSummary& s)
{
  Json hourly = Json::array();
  for (const auto& h : s.hourly)
    hourly.push_back({{"hour", h.hour}, {"n", h.n}, {"mean", h.mean}, {"sd", h.sd}, {"partial", h.partial}});
  return {{"n", s.n}, {"mean", s.mean}, {"variance", s.variance}, {"hourly", hourly}};
}

// Loads differences from a count CSV, or takes published statistics.
struct AnalysisInput
{
  SeriesSummary summary;
  std::optional<DifferenceSeries> diff;
};

AnalysisInput load_analysis_input(const Options& o, Manifest& m)
{
  if (o.data.empty() == o.summary_stats.empty())
    throw InputError("exactly one of --data or --summary-stats is required");
  AnalysisInput in;
  if (!o.data.empty()) {
    std::ifstream file(o.data);
    if (!file)
      throw InputError("cannot open '" + o.data + "' for reading");
    const auto series = read_count_csv(file);
    in.diff = build_differences(series, protocol_from(o));
    in.summary = summarize(*in.diff);
    m.add_input(o.data);
  } else {
    in.summary = parse_summary_stats(o.summary_stats);
    m.config()["summary_stats"] = o.summary_stats;
  }
  return in;
}

int cmd_simulate(const Options& o, Manifest& m, std::ostream& out)
{
  const auto text = read_file(o.config);
  bool seed_given = false;
  auto cfg = sim_config_from_json_text(text, &seed_given);
  cfg.seed = resolve_seed(o, seed_given ? std::optional<std::uint64_t>(cfg.seed) : std::nullopt);
  m.add_input(o.config);
  m.set_seed(cfg.seed);
  m.config() = to_json(cfg);

  const auto series = simulate_campaign(cfg);
  std::ofstream file(o.out, std::ios::binary);
  if (!file)
    throw InputError("cannot open '" + o.out + "' for writing");
  write_count_csv(file, series);
  m.add_output(o.out);
  out << "wrote " << series.size() << " intervals to " << o.out << "\n";
  return exit_ok;
}

int cmd_analyze(const Options& o, Manifest& m, std::ostream& out, std::ostream& err)
{
  const auto seed = resolve_seed(o);
  m.set_seed(seed);
  const auto in = load_analysis_input(o, m);
  const auto prior = derive_priors(in.summary, o.f, o.f);
  const auto mcmc = mcmc_from(o, seed);
  m.config()["f"] = o.f;
  m.config()["mass"] = o.mass;
  m.config()["mcmc"] = mcmc_json(mcmc);

  const auto samples = in.diff ? sample_posterior(*in.diff, prior, mcmc)
                               : sample_posterior(in.summary, prior, mcmc);

  Json report;
  report["prior"] = to_json(prior);
  report["data"] = summary_json(in.summary);
  report["mcmc"] = mcmc_json(mcmc);
  report["diagnostics"] = to_json(samples.diagnostics);
  int code = exit_ok;
  if (samples.diagnostics.converged) {
    report["posterior"] = to_json(summarize_posterior(samples, prior, o.mass));
  } else {
    report["posterior"] = nullptr;
    err << "sampler did not converge; posterior evidence not computed\n";
    code = exit_numeric;
  }

  if (!o.draws_out.empty()) {
    std::string csv = "mu,sigma_sq\n";
    for (std::size_t i = 0; i < samples.mu_draws.size(); ++i)
      csv += to_text(samples.mu_draws[i]) + "," + to_text(samples.sigma_sq_draws[i]) + "\n";
    write_file(o.draws_out, csv);
    report["draws_file"] = o.draws_out;
    m.add_output(o.draws_out);
  }
  report["provenance"] = {{"manifest", o.out + ".manifest.json"}, {"inputs", m.inputs()}, {"version", version}};
  write_file(o.out, report.dump(2) + "\n");
  m.add_output(o.out);
  if (code == exit_ok)
    out << "pd+ = " << report["posterior"]["pd_plus"].get<double>() << ", upper limit = "
        << report["posterior"]["pos_upper"].get<double>() << " cnt/s\n";
  return code;
}

Json fit_json(const std::vector<PowerLawPoint>& points, double threshold)
{
  try {
    return to_json(powerlaw_fit(points, threshold));
  } catch (const Error& e) {
    return {{"error", e.what()}};
  }
}

int cmd_sweep(const Options& o, Manifest& m, std::ostream& out)
{
  m.config()["fit_threshold"] = o.fit_threshold;

  if (!o.fit_table.empty()) {
    std::ifstream file(o.fit_table);
    if (!file)
      throw InputError("cannot open '" + o.fit_table + "' for reading");
    const auto table = read_csv_table(file);
    m.add_input(o.fit_table);
    const auto f_col = table.column("f");
    Json fits = {{"threshold", o.fit_threshold}};
    for (const std::string name : {"rsd_pos", "rsd_full", "r"}) {
      const auto it = std::find(table.header.begin(), table.header.end(), name);
      if (it == table.header.end())
        continue;
      const auto col = static_cast<std::size_t>(it - table.header.begin());
      std::vector<PowerLawPoint> points;
      for (std::size_t r = 0; r < table.rows.size(); ++r)
        points.push_back({parse_double(table.rows[r][f_col], table.line_numbers[r], "f"),
                          parse_double(table.rows[r][col], table.line_numbers[r], name)});
      fits[name] = to_json(powerlaw_fit(points, o.fit_threshold));
    }
    if (fits.size() == 1)
      throw InputError("fit table needs a column named rsd_pos, rsd_full or r", 1);
    write_file(o.out, fits.dump(2) + "\n");
    m.add_output(o.out);
    out << "wrote power-law fit to " << o.out << "\n";
    return exit_ok;
  }

  const auto seed = resolve_seed(o);
  m.set_seed(seed);
  const auto in = load_analysis_input(o, m);
  const auto grid = o.f_grid.empty() ? default_f_grid(in.summary.n) : parse_list(o.f_grid, "--f-grid");
  const auto mcmc = mcmc_from(o, seed);
  m.config()["f_grid"] = grid;
  m.config()["mass"] = o.mass;
  m.config()["mcmc"] = mcmc_json(mcmc);

  const auto stats = in.diff ? sufficient_stats(in.diff->samples) : sufficient_stats(in.summary);
  const auto rows = sensitivity_sweep(stats, grid, mcmc, o.mass);

  std::string csv = "f,mean,sd,hdi_lo,hdi_hi,pos_upper,pd_plus,rsd_full,rsd_pos\n";
  std::vector<PowerLawPoint> pos_points;
  std::vector<PowerLawPoint> full_points;
  for (const auto& r : rows) {
    csv += to_text(r.f) + "," + to_text(r.mean) + "," + to_text(r.sd) + "," + to_text(r.hdi_full.lo) + "," +
           to_text(r.hdi_full.hi) + "," + to_text(r.hdi_pos.hi) + "," + to_text(r.pd_plus) + "," +
           to_csv_cell(r.sd_ratio_full) + "," + to_csv_cell(r.sd_ratio_pos) + "\n";
    pos_points.push_back({r.f, r.sd_ratio_pos});
    full_points.push_back({r.f, r.sd_ratio_full});
  }
  write_file(o.out, csv);
  m.add_output(o.out);

  const auto fit_path = o.fit_out.empty() ? o.out + ".fit.json" : o.fit_out;
  const Json fits = {{"threshold", o.fit_threshold},
                     {"rsd_pos", fit_json(pos_points, o.fit_threshold)},
                     {"rsd_full", fit_json(full_points, o.fit_threshold)}};
  write_file(fit_path, fits.dump(2) + "\n");
  m.add_output(fit_path);
  out << "wrote " << rows.size() << " sweep rows to " << o.out << "\n";
  return exit_ok;
}

int cmd_ea(const Options& o, Manifest& m, std::ostream& out)
{
  std::ifstream file(o.table);
  if (!file)
    throw InputError("cannot open '" + o.table + "' for reading");
  auto system = read_attenuation_csv(file);
  m.add_input(o.table);
  system.saturation_cutoff = o.saturation_cutoff;
  m.config()["saturation_cutoff"] = o.saturation_cutoff;
  m.config()["weighted"] = o.weighted;

  const auto sol = solve_ls(system, o.weighted ? Weighting::InverseVariance : Weighting::Unweighted);
  Json report = {{"solution", to_json(sol)}};

  if (!o.closed_rate.empty()) {
    const auto closed = parse_estimate(o.closed_rate, "--closed-rate");
    double source_sd = o.source_sd.value_or(sol.log10_source_error);
    if (!std::isfinite(source_sd))
      source_sd = 0.0;
    const auto a_c = attenuation(sol.log10_source, source_sd, closed);
    report["attenuation"] = to_json(a_c);
    report["attenuation"]["log10_source_sd_used"] = source_sd;
    m.config()["closed_rate"] = o.closed_rate;
    if (!o.lab_rate.empty()) {
      report["ea_estimate"] = to_json(ea_estimate(parse_estimate(o.lab_rate, "--lab-rate"), a_c));
      m.config()["lab_rate"] = o.lab_rate;
    }
  } else if (!o.lab_rate.empty()) {
    throw InputError("--lab-rate needs --closed-rate", 0, "--lab-rate");
  }
  write_file(o.out, report.dump(2) + "\n");
  m.add_output(o.out);
  out << "log10 source = " << sol.log10_source << "\n";
  return exit_ok;
}

int cmd_budget_flash(const Options& o, Manifest& m, std::ostream& out)
{
  FlashModelInput in;
  in.delta_b = parse_estimate(o.delta_b, "--delta-b");
  in.delta_m = parse_estimate(o.delta_m, "--delta-m");
  in.q = o.q;
  in.rho_ratio = o.rho_ratio;
  m.config() = {{"delta_b", o.delta_b}, {"delta_m", o.delta_m}, {"q", o.q}, {"rho_ratio", o.rho_ratio}};

  const auto est = flash_corrected(in);
  Json report = {{"light_counts", to_json(est)}, {"shift", est.mean - in.delta_b.mean}};
  if (!o.rho_sweep_out.empty()) {
    const auto grid = log_grid(o.rho_min, o.rho_max, o.rho_points);
    std::string csv = "rho_ratio,mean,sd\n";
    for (const auto& r : rho_sweep(in, grid))
      csv += to_text(r.rho_ratio) + "," + to_text(r.mean) + "," + to_text(r.sd) + "\n";
    write_file(o.rho_sweep_out, csv);
    m.add_output(o.rho_sweep_out);
    report["rho_sweep_file"] = o.rho_sweep_out;
  }
  write_file(o.out, report.dump(2) + "\n");
  m.add_output(o.out);
  out << "C_L = " << est.mean << " +- " << est.sd << " cnt/s\n";
  return exit_ok;
}

int cmd_budget_scalar(const std::string& name, double value, const Json& config, const Options& o,
                      Manifest& m, std::ostream& out)
{
  m.config() = config;
  write_file(o.out, Json{{name, value}}.dump(2) + "\n");
  m.add_output(o.out);
  out << name << " = " << value << "\n";
  return exit_ok;
}

int cmd_jzs(const Options& o, Manifest& m, std::ostream& out, std::ostream& err)
{
  TTestInput in;
  if (o.t.has_value() == !o.summary_stats.empty())
    throw InputError("exactly one of --t (with --n) or --summary-stats is required");
  if (o.t) {
    in.t = *o.t;
    in.n = o.n;
  } else {
    const auto s = parse_summary_stats(o.summary_stats);
    in.t = t_statistic(s.mean, s.variance, s.n);
    in.n = s.n;
  }
  in.scale = o.scale;
  if (o.side == "positive")
    in.side = Side::PositiveOnly;
  else if (o.side == "two-sided")
    in.side = Side::TwoSided;
  else
    throw InputError("--side must be 'positive' or 'two-sided'", 0, "--side");
  m.config() = {{"t", in.t}, {"n", in.n}, {"scale", in.scale}, {"side", o.side}};

  try {
    const auto r = jzs_bf01(in);
    const Json report = {{"t", in.t},         {"n", in.n},
                         {"scale", in.scale}, {"side", o.side},
                         {"bf01", r.bf01},    {"bf10", r.bf10},
                         {"relative_error", r.relative_error}, {"evaluations", r.evaluations}};
    write_file(o.out, report.dump(2) + "\n");
    m.add_output(o.out);
    out << "BF01 = " << std::setprecision(8) << r.bf01 << "\n";
    return exit_ok;
  } catch (const NumericError& e) {
    write_file(o.out, Json{{"error", e.what()}}.dump(2) + "\n");
    m.add_output(o.out);
    err << e.what() << "\n";
    return exit_numeric;
  }
}

void add_mcmc_flags(CLI::App* app, Options& o)
{
  app->add_option("--seed", o.seed, "RNG seed (falls back to DARKMETER_SEED)");
  app->add_option("--chains", o.chains, "MCMC chains")->check(CLI::Range(2, 64));
  app->add_option("--warmup", o.warmup, "warmup draws per chain");
  app->add_option("--draws", o.draws, "kept draws per chain");
  app->add_option("--mass", o.mass, "HDI mass")->check(CLI::Range(0.0, 1.0));
}

void add_data_flags(CLI::App* app, Options& o)
{
  app->add_option("--data", o.data, "count-series CSV (t_start_s,shutter,counts)");
  app->add_option("--summary-stats", o.summary_stats, "published statistics 'mean,variance,n'");
  app->add_option("--block-len", o.block_len, "intervals per shutter block");
  app->add_option("--interval-len", o.interval_len, "seconds per interval");
  app->add_flag("--keep-first", o.keep_first, "keep the first interval of each block");
}

} // namespace

std::string file_fnv1a64(const std::string& path)
{
  const auto bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Options o;
  CLI::App app{"darkmeter: shutter-differenced darkness measurement analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version);

  std::function<int(Manifest&)> action;
  std::string command;

  auto* sim = app.add_subcommand("simulate", "simulate a shuttered counting campaign");
  sim->add_option("--config", o.config, "SimConfig JSON")->required();
  sim->add_option("--out", o.out, "count-series CSV")->required();
  sim->add_option("--seed", o.seed, "overrides the config seed");
  sim->callback([&] {
    command = "simulate";
    action = [&](Manifest& m) { return cmd_simulate(o, m, out); };
  });

  auto* analyze = app.add_subcommand("analyze", "posterior analysis of a campaign");
  add_data_flags(analyze, o);
  add_mcmc_flags(analyze, o);
  analyze->add_option("--f", o.f, "prior broadening factor (f_mu = f_sigma)")->check(CLI::PositiveNumber);
  analyze->add_option("--out", o.out, "analysis report JSON")->required();
  analyze->add_option("--draws-out", o.draws_out, "optional CSV of draws (mu,sigma_sq)");
  analyze->callback([&] {
    command = "analyze";
    action = [&](Manifest& m) { return cmd_analyze(o, m, out, err); };
  });

  auto* sweep = app.add_subcommand("sweep", "prior-sensitivity sweep and power-law fit of r_SD(f)");
  add_data_flags(sweep, o);
  add_mcmc_flags(sweep, o);
  sweep->add_option("--f-grid", o.f_grid, "comma-separated ascending f values");
  sweep->add_option("--fit-threshold", o.fit_threshold, "fit only f >= threshold");
  sweep->add_option("--fit-table", o.fit_table, "fit an existing table (columns f and rsd_pos/rsd_full/r)");
  sweep->add_option("--out", o.out, "sweep CSV, or the fit JSON with --fit-table")->required();
  sweep->add_option("--fit-out", o.fit_out, "fit JSON (default <out>.fit.json)");
  sweep->callback([&] {
    command = "sweep";
    action = [&](Manifest& m) { return cmd_sweep(o, m, out); };
  });

  auto* ea = app.add_subcommand("ea", "LED/filter tomography and environment-attenuation estimate");
  ea->add_option("--table", o.table, "CSV led,f1..fn,log10_rate,log10_sd")->required();
  ea->add_option("--saturation-cutoff", o.saturation_cutoff, "drop rows brighter than this (cnt/s)");
  ea->add_flag("--weighted", o.weighted, "inverse-variance weighting (sensitivity check)");
  ea->add_option("--closed-rate", o.closed_rate, "closed-chamber LED rate 'mean,sd'");
  ea->add_option("--lab-rate", o.lab_rate, "lab light level 'mean,sd'");
  ea->add_option("--source-sd", o.source_sd, "override the log10 source uncertainty");
  ea->add_option("--out", o.out, "solution JSON")->required();
  ea->callback([&] {
    command = "ea";
    action = [&](Manifest& m) { return cmd_ea(o, m, out); };
  });

  auto* budget = app.add_subcommand("budget", "derived-quantity calculators");
  budget->require_subcommand(1);
  auto* flash = budget->add_subcommand("flash", "flash-reflection corrected light counts");
  flash->add_option("--delta-b", o.delta_b, "black-side posterior 'mean,sd'")->required();
  flash->add_option("--delta-m", o.delta_m, "metallic-side posterior 'mean,sd'")->required();
  flash->add_option("--q", o.q, "closed-count ratio q")->required();
  flash->add_option("--rho-ratio", o.rho_ratio, "reflectivity ratio rho_b/rho_m")->required();
  flash->add_option("--rho-sweep-out", o.rho_sweep_out, "CSV rho_ratio,mean,sd over a log grid");
  flash->add_option("--rho-min", o.rho_min);
  flash->add_option("--rho-max", o.rho_max);
  flash->add_option("--rho-points", o.rho_points);
  flash->add_option("--out", o.out, "result JSON")->required();
  flash->callback([&] {
    command = "budget flash";
    action = [&](Manifest& m) { return cmd_budget_flash(o, m, out); };
  });
  auto* length = budget->add_subcommand("hdi-length", "predicted 0.95 interval length in darkness");
  length->add_option("--var-rd", o.var_rd, "dark-rate variance per interval")->required();
  length->add_option("--n", o.n, "number of difference samples")->required();
  length->add_option("--out", o.out, "result JSON")->required();
  length->callback([&] {
    command = "budget hdi-length";
    action = [&](Manifest& m) {
      return cmd_budget_scalar("dark_hdi_length", dark_hdi_length(o.var_rd, o.n),
                               {{"var_rd", o.var_rd}, {"n", o.n}}, o, m, out);
    };
  });
  auto* retina = budget->add_subcommand("retina", "scale an upper limit to a retinal spot");
  retina->add_option("--upper", o.upper, "upper limit on the detector (cnt/s)")->required();
  retina->add_option("--diameter-mm", o.diameter_mm, "retinal spot diameter")->required();
  retina->add_option("--out", o.out, "result JSON")->required();
  retina->callback([&] {
    command = "budget retina";
    action = [&](Manifest& m) {
      return cmd_budget_scalar("retina_upper_limit", retina_scaling(o.upper, o.diameter_mm),
                               {{"upper", o.upper}, {"diameter_mm", o.diameter_mm}}, o, m, out);
    };
  });
  auto* qcmd = budget->add_subcommand("q", "closed-count ratio from the two campaigns");
  qcmd->add_option("--closed-b", o.closed_b, "mean closed rate, black side")->required();
  qcmd->add_option("--closed-m", o.closed_m, "mean closed rate, metallic side")->required();
  qcmd->add_option("--out", o.out, "result JSON")->required();
  qcmd->callback([&] {
    command = "budget q";
    action = [&](Manifest& m) {
      SeriesSummary b;
      SeriesSummary mm;
      b.mean = o.closed_b;
      mm.mean = o.closed_m;
      return cmd_budget_scalar("q", estimate_q(b, mm), {{"closed_b", o.closed_b}, {"closed_m", o.closed_m}},
                               o, m, out);
    };
  });

  auto* jzs = app.add_subcommand("jzs", "Cauchy-prior one-sample Bayes factor");
  jzs->add_option("--t", o.t, "t statistic");
  jzs->add_option("--n", o.n, "sample count");
  jzs->add_option("--summary-stats", o.summary_stats, "'mean,variance,n' instead of --t/--n");
  jzs->add_option("--scale", o.scale, "Cauchy scale")->check(CLI::PositiveNumber);
  jzs->add_option("--side", o.side, "positive | two-sided");
  jzs->add_option("--out", o.out, "result JSON")->required();
  jzs->callback([&] {
    command = "jzs";
    action = [&](Manifest& m) { return cmd_jzs(o, m, out, err); };
  });

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", o.manifest, "manifest JSON")->required();

  std::vector<std::string> argv_store{"darkmeter"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store)
    argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (replay->parsed()) {
      const auto doc = Json::parse(read_file(o.manifest));
      if (!doc.contains("argv") || !doc["argv"].is_array())
        throw InputError("manifest has no argv array", 0, "argv");
      return run(doc["argv"].get<std::vector<std::string>>(), out, err);
    }

    Manifest manifest(command, args);
    const auto start = std::chrono::steady_clock::now();
    const int code = action(manifest);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    manifest.write(o.out + ".manifest.json", wall.count());
    return code;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const InputError& e) {
    err << "error: " << e.what();
    if (e.line() > 0)
      err << " (line " << e.line() << ")";
    err << "\n";
    return exit_input;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << " (row " << e.row() << ")\n";
    return exit_input;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
}

} // namespace darkmeter::cli
