#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msfq/params.hpp"

namespace msfq::config {

// A sensor run description: the figure parameterization by default, or the
// raw (delta, A_p, D) triple when mode = raw.
struct RunConfig {
  params::SensorConfig sensor;
  bool raw_mode = false;
  double delta = 0.0;     // [rad/s], raw mode only
  double pump_amp = 0.0;  // [rad/s], raw mode only
  double duffing = 0.0;   // [rad/s], raw mode only

  params::DerivedParams derive() const;
};

// Loads a flat key = value file (optional; defaults reproduce the reference
// operating point) and applies key=value overrides on top. Unknown keys and
// malformed values raise ConfigError. Keys:
//   m, omega, delta_ratio, r, pump_ratio, d_frac, gamma0_ratio, theta,
//   force_offset, g_nominal, mode (derived|raw), delta, pump_amp, duffing.
// r and pump_ratio are mutually exclusive across file plus overrides.
RunConfig load(const std::optional<std::string>& path,
               const std::vector<std::string>& overrides);

// One key=value assignment with type checking against the schema above.
void apply_override(RunConfig& rc, const std::string& assignment);

}  // namespace msfq::config
