#include "msfq/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace msfq::params {

void SensorConfig::validate() const {
  if (!(m > 0.0)) throw ConfigError("m: mass must be > 0");
  if (!(omega > 0.0)) throw ConfigError("omega: trap frequency must be > 0");
  if (!(delta_ratio > 0.0))
    throw ConfigError("delta_ratio: detuning ratio must be > 0");
  if (!(r >= 0.0)) throw ConfigError("r: squeezing parameter must be >= 0");
  if (!(d_frac >= 0.0) || d_frac >= 1.0)
    throw ConfigError("d_frac: D/D_crit must lie in [0, 1)");
  if (!(gamma0_ratio >= 0.0))
    throw ConfigError("gamma0_ratio: damping ratio must be >= 0");
  if (!std::isfinite(theta)) throw ConfigError("theta: must be finite");
  if (!std::isfinite(force_offset))
    throw ConfigError("force_offset: must be finite");
  if (!std::isfinite(g_nominal)) throw ConfigError("g_nominal: must be finite");
}

double squeeze_from_pump(double pump_ratio) {
  if (!(pump_ratio >= 0.0) || pump_ratio >= 1.0)
    throw std::domain_error(
        "squeeze_from_pump: pump ratio must lie in [0, 1)");
  return 0.5 * std::atanh(pump_ratio);
}

double pump_from_squeeze(double r) { return std::tanh(2.0 * r); }

double squeeze_renorm(double r) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  return 8.0 * c * c * s * s + 4.0 * s * s * s * s;
}

double qubit_frequency(double delta, double pump_amp, double duffing,
                       double r) {
  if (pump_amp < 0.0)
    throw std::domain_error("qubit_frequency: pump amplitude must be >= 0");
  if (duffing < 0.0)
    throw std::domain_error("qubit_frequency: Duffing strength must be >= 0");
  if (delta < pump_amp)
    throw std::domain_error(
        "qubit_frequency: delta < A_p gives an imaginary Bogoliubov gap");
  const double gap = std::sqrt((delta - pump_amp) * (delta + pump_amp));
  return gap - duffing * squeeze_renorm(r);
}

double qubit_frequency_scaled(double delta, double r, double d_frac) {
  if (!(delta > 0.0))
    throw std::domain_error("qubit_frequency_scaled: delta must be > 0");
  const double pump_amp = delta * pump_from_squeeze(r);
  const double gap = std::sqrt((delta - pump_amp) * (delta + pump_amp));
  return gap * (1.0 - d_frac);
}

double anharmonicity(double duffing, double r) {
  if (duffing < 0.0)
    throw std::domain_error("anharmonicity: Duffing strength must be >= 0");
  return 0.25 * duffing * (3.0 * std::cosh(4.0 * r) + 1.0);
}

double critical_duffing(double delta, double pump_amp, double r) {
  if (pump_amp < 0.0)
    throw std::domain_error("critical_duffing: pump amplitude must be >= 0");
  if (!(delta > pump_amp))
    throw std::domain_error("critical_duffing: requires delta > A_p");
  if (r < 0.0)
    throw std::domain_error("critical_duffing: r must be >= 0");
  const double q = squeeze_renorm(r);
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt((delta - pump_amp) * (delta + pump_amp)) / q;
}

GravityCoupling gravity_coupling(double mass, double omega, double r,
                                 double force_offset) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::domain_error("gravity_coupling: mass and omega must be > 0");
  GravityCoupling g;
  g.x0 = std::sqrt(kHbar / (2.0 * mass * omega));
  const double boost = std::exp(r);
  g.omega_g = 2.0 * boost * force_offset * g.x0 / kHbar;
  g.kappa_g = 2.0 * mass * g.x0 * boost / kHbar;
  return g;
}

DecoherenceRates decoherence_rates(double gamma0, double r, double omega_b) {
  if (gamma0 < 0.0)
    throw std::domain_error("decoherence_rates: gamma0 must be >= 0");
  if (!(omega_b > 0.0))
    throw std::domain_error(
        "decoherence_rates: qubit gap closed (omega_b <= 0), Xi undefined");
  DecoherenceRates d;
  d.gamma_x = 0.5 * gamma0 * std::exp(-2.0 * r);
  d.gamma_y = 0.5 * gamma0 * std::exp(2.0 * r);
  d.gamma_z = gamma0 * std::cosh(2.0 * r);
  d.gamma_eff = d.gamma_y;
  d.xi = d.gamma_eff / omega_b;
  return d;
}

namespace {

DerivedParams finish(DerivedParams p, double mass, double omega, double gamma0,
                     double force_offset) {
  p.omega_b = qubit_frequency(p.delta, p.pump_amp, p.duffing, p.r);
  p.u_b = anharmonicity(p.duffing, p.r);
  const GravityCoupling g = gravity_coupling(mass, omega, p.r, force_offset);
  p.x0 = g.x0;
  p.omega_g = g.omega_g;
  p.kappa_g = g.kappa_g;
  p.gamma0 = gamma0;
  const DecoherenceRates rates = decoherence_rates(gamma0, p.r, p.omega_b);
  p.gamma_x = rates.gamma_x;
  p.gamma_y = rates.gamma_y;
  p.gamma_z = rates.gamma_z;
  p.gamma_eff = rates.gamma_eff;
  p.xi = rates.xi;
  return p;
}

}  // namespace

DerivedParams derive(const SensorConfig& cfg) {
  cfg.validate();
  if (std::abs(cfg.theta - kPi) > 1e-12)
    throw ConfigError(
        "theta: metrology paths require theta = pi (anti-squeezed coupling); "
        "general phases are supported only by the oracle");
  if (cfg.r == 0.0 && cfg.d_frac > 0.0)
    throw ConfigError(
        "d_frac: r = 0 leaves D_crit unbounded; d_frac > 0 requires r > 0");

  DerivedParams p;
  p.r = cfg.r;
  p.delta = cfg.delta_ratio * cfg.omega;
  p.pump_amp = p.delta * pump_from_squeeze(cfg.r);
  p.duffing_crit = critical_duffing(p.delta, p.pump_amp, cfg.r);
  p.duffing =
      std::isfinite(p.duffing_crit) ? cfg.d_frac * p.duffing_crit : 0.0;
  return finish(p, cfg.m, cfg.omega, cfg.gamma0_ratio * cfg.omega,
                cfg.force_offset);
}

DerivedParams derive_raw(double mass, double omega, double delta,
                         double pump_amp, double duffing, double gamma0,
                         double force_offset) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::domain_error("derive_raw: mass and omega must be > 0");
  if (!(delta > 0.0))
    throw std::domain_error("derive_raw: delta must be > 0");
  if (pump_amp < 0.0 || pump_amp >= delta)
    throw std::domain_error("derive_raw: A_p must lie in [0, delta)");
  if (duffing < 0.0)
    throw std::domain_error("derive_raw: Duffing strength must be >= 0");

  DerivedParams p;
  p.r = squeeze_from_pump(pump_amp / delta);
  p.delta = delta;
  p.pump_amp = pump_amp;
  p.duffing = duffing;
  p.duffing_crit = critical_duffing(delta, pump_amp, p.r);
  return finish(p, mass, omega, gamma0, force_offset);
}

}  // namespace msfq::params
