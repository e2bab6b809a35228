#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hwk/advect.hpp"
#include "hwk/models.hpp"

namespace hwk {

enum class Experiment { transport1d, beam, diocotron, convergence };

inline std::optional<Experiment> parse_experiment(std::string_view s) {
  if (s == "transport1d") return Experiment::transport1d;
  if (s == "beam") return Experiment::beam;
  if (s == "diocotron") return Experiment::diocotron;
  if (s == "convergence") return Experiment::convergence;
  return std::nullopt;
}

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::transport1d: return "transport1d";
    case Experiment::beam: return "beam";
    case Experiment::diocotron: return "diocotron";
    case Experiment::convergence: return "convergence";
  }
  return "?";
}

/// Fully resolved run description. Every field has a value after
/// `parse_config`; experiment-dependent defaults are filled in there.
struct RunConfig {
  Experiment experiment = Experiment::transport1d;
  SchemeKind scheme = SchemeKind::sl_hweno5;
  Profile profile = Profile::sine;
  std::vector<std::size_t> n;
  std::size_t ny = 0;
  double cfl_linear = 2.5;
  double cfl_nonlinear = 0.85;
  double t_end = 8.0;
  double dt = 0.0;
  double eps = kWenoEpsilon;
  double velocity = 1.0;
  double fd_dt_exponent = 1.0;
  double radius = 10.0;
  double half_width = 11.0;
  Splitting splitting = Splitting::upwind;
  std::vector<double> snapshot_times;
  std::string output_dir;
  bool snapshot_csv = false;
  bool plot_script = false;

  [[nodiscard]] SchemeConfig scheme_config() const {
    SchemeConfig c;
    c.scheme = scheme;
    c.cfl_linear = cfl_linear;
    c.cfl_nonlinear = cfl_nonlinear;
    c.eps = eps;
    c.splitting = splitting;
    return c;
  }
};

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "experiment", "scheme",   "profile", "n",          "ny",          "cfl",          "cfl_linear",
      "cfl_nonlinear", "t_end", "dt",      "eps",        "velocity",    "fd_dt_exponent", "radius",
      "half_width", "splitting", "snapshots", "output",  "snapshot_csv", "plot_script"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError("invalid value for '" + key + "': '" + v + "' is not a finite number");
  return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("invalid value for '" + key + "': '" + v + "' is not an integer");
  if (out <= 0) throw ConfigError("invalid value for '" + key + "': must be positive, got " + v);
  return static_cast<std::size_t>(out);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid value for '" + key + "': '" + v + "' is not a boolean");
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError("invalid value for '" + key + "': must be positive");
}

}  // namespace detail

using ConfigMap = std::map<std::string, std::string>;

/// Reads flat `key = value` text; `#` starts a comment. Duplicate keys take
/// the last value.
inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("malformed config line " + std::to_string(lineno) + ": empty key or value");
    if (!config_keys().contains(key))
      throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(lineno));
    out[key] = value;
  }
  return out;
}

inline std::string default_output_root() {
  if (const char* env = std::getenv("HWK_OUTPUT_DIR"); env && *env) return env;
  return "hwk_output";
}

/// Merges file values with overrides (overrides win), fills defaults that
/// depend on the experiment and validates everything.
inline RunConfig parse_config(const ConfigMap& file, const ConfigMap& overrides = {}) {
  ConfigMap kv = file;
  for (const auto& [k, v] : overrides) {
    if (!config_keys().contains(k)) throw ConfigError("unknown config key '" + k + "'");
    kv[k] = v;
  }
  const auto has = [&](const char* k) { return kv.contains(k); };
  RunConfig c;

  if (has("experiment")) {
    const auto e = parse_experiment(kv["experiment"]);
    if (!e) throw ConfigError("unknown experiment '" + kv["experiment"] + "'");
    c.experiment = *e;
  }
  const bool is_1d = c.experiment == Experiment::transport1d || c.experiment == Experiment::convergence;

  switch (c.experiment) {
    case Experiment::transport1d:
      c.scheme = SchemeKind::sl_hweno5;
      c.n = {200};
      c.t_end = 8.0;
      break;
    case Experiment::convergence:
      c.scheme = SchemeKind::sl_hweno5;
      c.n = {200, 400, 800};
      c.t_end = 8.0;
      break;
    case Experiment::beam:
      c.scheme = SchemeKind::fd_hweno5;
      c.n = {129};
      c.t_end = 20.0;
      c.snapshot_times = {10.0, 15.0, 20.0};
      break;
    case Experiment::diocotron:
      c.scheme = SchemeKind::mixed;
      c.n = {256};
      c.t_end = 60.0;
      c.cfl_linear = 2.0;
      c.cfl_nonlinear = 0.5;
      c.snapshot_times = {40.0, 50.0, 60.0};
      break;
  }

  if (has("scheme")) {
    const auto s = parse_scheme(kv["scheme"]);
    if (!s) throw ConfigError("unknown scheme '" + kv["scheme"] + "'");
    c.scheme = *s;
  }
  if (c.scheme == SchemeKind::mixed && c.experiment != Experiment::diocotron)
    throw ConfigError("the mixed scheme is only available for the diocotron experiment");
  if (has("profile")) {
    const auto p = parse_profile(kv["profile"]);
    if (!p) throw ConfigError("unknown profile '" + kv["profile"] + "'");
    c.profile = *p;
  }
  if (has("n")) {
    c.n.clear();
    for (const auto& item : detail::split_list(kv["n"])) c.n.push_back(detail::parse_count("n", item));
    if (c.n.empty()) throw ConfigError("invalid value for 'n': empty list");
  }
  for (std::size_t v : c.n)
    if (v < kMinStencilNodes) throw ConfigError("invalid value for 'n': need at least 8 nodes, got " + std::to_string(v));
  if (has("ny")) {
    if (is_1d) throw ConfigError("'ny' only applies to 2D experiments");
    c.ny = detail::parse_count("ny", kv["ny"]);
    if (c.ny < kMinStencilNodes) throw ConfigError("invalid value for 'ny': need at least 8 nodes");
  }

  if (has("cfl")) {
    const double v = detail::parse_real("cfl", kv["cfl"]);
    detail::require_positive("cfl", v);
    if (c.scheme == SchemeKind::mixed)
      throw ConfigError("'cfl' is ambiguous for the mixed scheme; set cfl_linear and cfl_nonlinear");
    (is_semi_lagrangian(c.scheme) ? c.cfl_linear : c.cfl_nonlinear) = v;
  }
  if (has("cfl_linear")) c.cfl_linear = detail::parse_real("cfl_linear", kv["cfl_linear"]);
  if (has("cfl_nonlinear")) c.cfl_nonlinear = detail::parse_real("cfl_nonlinear", kv["cfl_nonlinear"]);
  detail::require_positive("cfl_linear", c.cfl_linear);
  detail::require_positive("cfl_nonlinear", c.cfl_nonlinear);
  if (c.cfl_nonlinear > 1.0) throw ConfigError("invalid value for 'cfl_nonlinear': finite-difference cfl must not exceed 1");

  if (has("t_end")) c.t_end = detail::parse_real("t_end", kv["t_end"]);
  detail::require_positive("t_end", c.t_end);
  if (has("dt")) {
    if (c.experiment != Experiment::beam) throw ConfigError("'dt' only applies to the beam experiment");
    c.dt = detail::parse_real("dt", kv["dt"]);
    detail::require_positive("dt", c.dt);
  }
  if (has("eps")) c.eps = detail::parse_real("eps", kv["eps"]);
  detail::require_positive("eps", c.eps);
  if (has("velocity")) {
    if (!is_1d) throw ConfigError("'velocity' only applies to 1D transport");
    c.velocity = detail::parse_real("velocity", kv["velocity"]);
  }
  c.fd_dt_exponent = (c.experiment == Experiment::convergence && c.profile == Profile::sine) ? 1.25 : 1.0;
  if (has("fd_dt_exponent")) c.fd_dt_exponent = detail::parse_real("fd_dt_exponent", kv["fd_dt_exponent"]);
  if (c.fd_dt_exponent < 1.0 || c.fd_dt_exponent > 2.0)
    throw ConfigError("invalid value for 'fd_dt_exponent': must lie in [1, 2]");
  if (has("radius")) c.radius = detail::parse_real("radius", kv["radius"]);
  detail::require_positive("radius", c.radius);
  c.half_width = 1.1 * c.radius;
  if (has("half_width")) c.half_width = detail::parse_real("half_width", kv["half_width"]);
  if (!(c.half_width > c.radius)) throw ConfigError("invalid value for 'half_width': must exceed the disk radius");
  if (has("splitting")) {
    const std::string& s = kv["splitting"];
    if (s == "upwind")
      c.splitting = Splitting::upwind;
    else if (s == "lax-friedrichs")
      c.splitting = Splitting::lax_friedrichs;
    else
      throw ConfigError("invalid value for 'splitting': expected upwind or lax-friedrichs");
  }
  if (has("snapshots")) {
    c.snapshot_times.clear();
    for (const auto& item : detail::split_list(kv["snapshots"])) {
      const double t = detail::parse_real("snapshots", item);
      if (t < 0.0 || t > c.t_end) throw ConfigError("invalid value for 'snapshots': times must lie in [0, t_end]");
      c.snapshot_times.push_back(t);
    }
  }
  c.snapshot_times.erase(std::remove_if(c.snapshot_times.begin(), c.snapshot_times.end(),
                                        [&](double t) { return t > c.t_end; }),
                         c.snapshot_times.end());
  std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  c.output_dir = has("output") ? kv["output"] : default_output_root();
  if (has("snapshot_csv")) c.snapshot_csv = detail::parse_bool("snapshot_csv", kv["snapshot_csv"]);
  if (has("plot_script")) c.plot_script = detail::parse_bool("plot_script", kv["plot_script"]);
  c.scheme_config().validate();
  return c;
}

/// One queued job per grid size, except the convergence sweep which is a
/// single job over the whole list.
inline std::vector<RunConfig> expand_runs(const RunConfig& c) {
  if (c.experiment == Experiment::convergence) return {c};
  std::vector<RunConfig> out;
  for (std::size_t n : c.n) {
    RunConfig r = c;
    r.n = {n};
    out.push_back(r);
  }
  return out;
}

}  // namespace hwk
