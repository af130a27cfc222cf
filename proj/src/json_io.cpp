#include "darkmeter/json_io.hpp"

#include "darkmeter/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace darkmeter {

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset)
{
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Best effort: the line where the key first appears in the source text.
std::size_t line_of_key(const std::string& text, const std::string& key)
{
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

class Reader
{
public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& path, const std::string& why) const
  {
    const auto leaf = path.substr(path.find_last_of('.') + 1);
    throw InputError("field '" + path + "': " + why, line_of_key(text_, leaf), path);
  }

  void only_keys(const Json& obj, const std::string& path, std::set<std::string> allowed) const
  {
    if (!obj.is_object())
      fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, _] : obj.items())
      if (!allowed.contains(key))
        fail(path.empty() ? key : path + "." + key, "unknown field");
  }

  double number(const Json& obj, const std::string& key, const std::string& path, double fallback) const
  {
    if (!obj.contains(key))
      return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
      fail(join(path, key), "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const Json& obj, const std::string& key, const std::string& path,
                       std::int64_t fallback) const
  {
    if (!obj.contains(key))
      return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
      fail(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const Json& obj, const std::string& key, const std::string& path, bool fallback) const
  {
    if (!obj.contains(key))
      return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean())
      fail(join(path, key), "expected true or false");
    return v.get<bool>();
  }

  static std::string join(const std::string& path, const std::string& key)
  {
    return path.empty() ? key : path + "." + key;
  }

private:
  const std::string& text_;
};

Json interval_json(const Interval& i)
{
  return Json::array({i.lo, i.hi});
}

// NaN and inf are not representable in JSON
Json number_or_null(double v)
{
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

} // namespace

SimConfig sim_config_from_json_text(const std::string& text, bool* seed_given)
{
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
  }

  const Reader rd(text);
  SimConfig cfg;
  rd.only_keys(doc, "", {"dark", "light_rate", "flash_closed_rate", "duration_hours", "protocol", "seed"});

  if (doc.contains("dark")) {
    const auto& dark = doc.at("dark");
    rd.only_keys(dark, "dark", {"base_rate", "drift", "clamp_min"});
    cfg.dark.base_rate = rd.number(dark, "base_rate", "dark", cfg.dark.base_rate);
    cfg.dark.clamp_min = rd.number(dark, "clamp_min", "dark", cfg.dark.clamp_min);
    if (dark.contains("drift")) {
      const auto& drift = dark.at("drift");
      if (!drift.is_object() || !drift.contains("kind") || !drift.at("kind").is_string())
        rd.fail("dark.drift.kind", "expected \"none\", \"random_walk\" or \"sinusoid\"");
      const auto kind = drift.at("kind").get<std::string>();
      if (kind == "none") {
        rd.only_keys(drift, "dark.drift", {"kind"});
        cfg.dark.drift = NoDrift{};
      } else if (kind == "random_walk") {
        rd.only_keys(drift, "dark.drift", {"kind", "step_sd_per_hour"});
        cfg.dark.drift = RandomWalkDrift{rd.number(drift, "step_sd_per_hour", "dark.drift", 0.0)};
      } else if (kind == "sinusoid") {
        rd.only_keys(drift, "dark.drift", {"kind", "amplitude", "period_hours"});
        cfg.dark.drift = SinusoidDrift{rd.number(drift, "amplitude", "dark.drift", 0.0),
                                       rd.number(drift, "period_hours", "dark.drift", 1.0)};
      } else {
        rd.fail("dark.drift.kind", "unknown drift kind '" + kind + "'");
      }
    }
  }
  cfg.light_rate = rd.number(doc, "light_rate", "", cfg.light_rate);
  cfg.flash_closed_rate = rd.number(doc, "flash_closed_rate", "", cfg.flash_closed_rate);
  cfg.duration_hours = rd.number(doc, "duration_hours", "", cfg.duration_hours);
  if (doc.contains("protocol")) {
    const auto& p = doc.at("protocol");
    rd.only_keys(p, "protocol", {"block_len", "interval_len", "discard_first"});
    cfg.protocol.block_len = static_cast<int>(rd.integer(p, "block_len", "protocol", cfg.protocol.block_len));
    cfg.protocol.interval_len = rd.integer(p, "interval_len", "protocol", cfg.protocol.interval_len);
    cfg.protocol.discard_first = rd.boolean(p, "discard_first", "protocol", cfg.protocol.discard_first);
  }
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned())
      rd.fail("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (seed_given)
    *seed_given = doc.contains("seed");

  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid configuration: ") + e.what(), 0);
  }
  return cfg;
}

Json to_json(const SimConfig& c)
{
  Json drift;
  if (const auto* rw = std::get_if<RandomWalkDrift>(&c.dark.drift))
    drift = {{"kind", "random_walk"}, {"step_sd_per_hour", rw->step_sd_per_hour}};
  else if (const auto* s = std::get_if<SinusoidDrift>(&c.dark.drift))
    drift = {{"kind", "sinusoid"}, {"amplitude", s->amplitude}, {"period_hours", s->period_hours}};
  else
    drift = {{"kind", "none"}};
  return {
    {"dark", {{"base_rate", c.dark.base_rate}, {"drift", drift}, {"clamp_min", c.dark.clamp_min}}},
    {"light_rate", c.light_rate},
    {"flash_closed_rate", c.flash_closed_rate},
    {"duration_hours", c.duration_hours},
    {"protocol",
     {{"block_len", c.protocol.block_len},
      {"interval_len", c.protocol.interval_len},
      {"discard_first", c.protocol.discard_first}}},
    {"seed", c.seed},
  };
}

Json to_json(const PriorSpec& p)
{
  return {{"mu0", p.mu0},         {"sigma0_sq", p.sigma0_sq}, {"alpha0", p.alpha0},
          {"beta0", p.beta0},     {"f_mu", p.f_mu},           {"f_sigma", p.f_sigma}};
}

Json to_json(const PosteriorSummary& s)
{
  return {
    {"mean", s.mean},
    {"sd", s.sd},
    {"mass", s.mass},
    {"hdi_full", interval_json(s.hdi_full)},
    {"hdi_pos", interval_json(s.hdi_pos)},
    {"pos_upper", s.hdi_pos.hi},
    {"positive_fraction", s.positive_fraction},
    {"pd_plus", s.pd_plus},
    {"sd_ratio_full", number_or_null(s.sd_ratio_full)},
    {"sd_ratio_pos", number_or_null(s.sd_ratio_pos)},
    {"f", s.f},
    {"warnings", s.warnings},
  };
}

Json to_json(const SamplerDiagnostics& d)
{
  return {
    {"mu", {{"rhat", d.mu.rhat}, {"ess", d.mu.ess}}},
    {"sigma_sq", {{"rhat", d.sigma_sq.rhat}, {"ess", d.sigma_sq.ess}}},
    {"sigma_sq_acceptance", d.sigma_sq_acceptance},
    {"converged", d.converged},
  };
}

Json to_json(const LsSolution& s)
{
  Json od_err = Json::array();
  for (double e : s.od_error)
    od_err.push_back(number_or_null(e));
  return {
    {"log10_source", s.log10_source},
    {"log10_source_error", number_or_null(s.log10_source_error)},
    {"od", s.od},
    {"od_error", od_err},
    {"residuals", s.residuals},
    {"residual_norm", s.residual_norm},
    {"used_rows", s.used_rows},
    {"saturated_rows", s.saturated_rows},
  };
}

Json to_json(const GaussianEstimate& e)
{
  return {{"mean", e.mean}, {"sd", e.sd}};
}

Json to_json(const PowerLawFit& f)
{
  return {{"a", f.a}, {"b", f.b}, {"points", f.points}, {"rms_log_residual", f.rms_log_residual}};
}

} // namespace darkmeter
