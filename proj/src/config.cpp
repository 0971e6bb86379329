#include "msfq/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace msfq::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError(key + ": empty value");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size())
    throw ConfigError(key + ": not a number: '" + v + "'");
  if (!std::isfinite(x)) throw ConfigError(key + ": value must be finite");
  return x;
}

// Tracks r/pump_ratio exclusivity across one load.
struct Assignments {
  bool saw_r = false;
  bool saw_pump_ratio = false;
};

void assign(RunConfig& rc, Assignments& seen, const std::string& key,
            const std::string& value) {
  params::SensorConfig& s = rc.sensor;
  if (key == "mode") {
    const std::string v = trim(value);
    if (v == "derived")
      rc.raw_mode = false;
    else if (v == "raw")
      rc.raw_mode = true;
    else
      throw ConfigError("mode: expected 'derived' or 'raw', got '" + v + "'");
    return;
  }
  const double x = parse_number(key, value);
  if (key == "m") {
    s.m = x;
  } else if (key == "omega") {
    s.omega = x;
  } else if (key == "delta_ratio") {
    s.delta_ratio = x;
  } else if (key == "r") {
    if (seen.saw_pump_ratio)
      throw ConfigError("r: specify either r or pump_ratio, not both");
    seen.saw_r = true;
    s.r = x;
  } else if (key == "pump_ratio") {
    if (seen.saw_r)
      throw ConfigError("pump_ratio: specify either r or pump_ratio, not both");
    seen.saw_pump_ratio = true;
    if (!(x >= 0.0) || x >= 1.0)
      throw ConfigError("pump_ratio: must lie in [0, 1)");
    s.r = params::squeeze_from_pump(x);
  } else if (key == "d_frac") {
    s.d_frac = x;
  } else if (key == "gamma0_ratio") {
    s.gamma0_ratio = x;
  } else if (key == "theta") {
    s.theta = x;
  } else if (key == "force_offset") {
    s.force_offset = x;
  } else if (key == "g_nominal") {
    s.g_nominal = x;
  } else if (key == "delta") {
    rc.delta = x;
  } else if (key == "pump_amp") {
    rc.pump_amp = x;
  } else if (key == "duffing") {
    rc.duffing = x;
  } else {
    throw ConfigError("unknown configuration key: '" + key + "'");
  }
}

void assign_line(RunConfig& rc, Assignments& seen, const std::string& line,
                 const std::string& where) {
  const std::size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError(where + ": expected key = value, got '" + line + "'");
  const std::string key = trim(line.substr(0, eq));
  if (key.empty()) throw ConfigError(where + ": empty key");
  assign(rc, seen, key, line.substr(eq + 1));
}

}  // namespace

params::DerivedParams RunConfig::derive() const {
  if (raw_mode)
    return params::derive_raw(sensor.m, sensor.omega, delta, pump_amp, duffing,
                              sensor.gamma0_ratio * sensor.omega,
                              sensor.force_offset);
  return params::derive(sensor);
}

RunConfig load(const std::optional<std::string>& path,
               const std::vector<std::string>& overrides) {
  RunConfig rc;
  Assignments seen;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file: " + *path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      assign_line(rc, seen, line,
                  *path + ":" + std::to_string(lineno));
    }
  }
  for (const std::string& ov : overrides) assign_line(rc, seen, ov, "--set");
  rc.sensor.validate();
  return rc;
}

void apply_override(RunConfig& rc, const std::string& assignment) {
  Assignments seen;
  assign_line(rc, seen, assignment, "--set");
}

}  // namespace msfq::config
