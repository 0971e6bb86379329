#pragma once

#include "msfq/constants.hpp"
#include "msfq/errors.hpp"

namespace msfq::params {

// Raw physical inputs of the squeezed-Fock qubit sensor. The figure
// parameterization (delta/omega, r, D/D_crit) is the primary entry point;
// see derive_raw for direct (delta, A_p, D) input.
struct SensorConfig {
  double m = 1e-9;            // particle mass [kg]
  double omega = 2.0 * kPi * 1e3;  // trap frequency [rad/s]
  double delta_ratio = 0.05;  // pump detuning delta/omega
  double r = 1.0;             // squeezing parameter
  double d_frac = 0.2;        // Duffing strength D/D_crit, in [0, 1)
  double gamma0_ratio = 0.0;  // mechanical damping gamma0/omega
  double theta = kPi;         // pump phase [rad]; metrology paths require pi
  double force_offset = 0.0;  // residual static force m*g - F [N]
  double g_nominal = 9.81;    // nominal gravitational acceleration [m/s^2]

  // Throws ConfigError with a field-level message on the first violation.
  void validate() const;
};

// Every effective quantity of the squeezed-qubit model, in SI units.
struct DerivedParams {
  double r = 0.0;             // squeezing parameter (echoed or inferred)
  double delta = 0.0;         // pump detuning [rad/s]
  double pump_amp = 0.0;      // two-phonon pump amplitude A_p [rad/s]
  double duffing = 0.0;       // Duffing strength D [rad/s]
  double duffing_crit = 0.0;  // gap-closing strength D_crit [rad/s]
  double omega_b = 0.0;       // squeezed-qubit splitting [rad/s]
  double u_b = 0.0;           // effective anharmonicity U_b [rad/s]
  double x0 = 0.0;            // zero-point amplitude [m]
  double omega_g = 0.0;       // gravity-induced coupling Omega_g^s [rad/s]
  double kappa_g = 0.0;       // d(Omega_g^s)/dg [rad s / m]
  double gamma0 = 0.0;        // mechanical damping [rad/s]
  double gamma_x = 0.0;       // qubit decoherence rates [rad/s]
  double gamma_y = 0.0;
  double gamma_z = 0.0;
  double gamma_eff = 0.0;     // dominant rate, = gamma_y
  double xi = 0.0;            // gamma_eff / omega_b
};

struct DecoherenceRates {
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  double gamma_z = 0.0;
  double gamma_eff = 0.0;
  double xi = 0.0;
};

struct GravityCoupling {
  double x0 = 0.0;       // zero-point amplitude [m]
  double omega_g = 0.0;  // coupling [rad/s]
  double kappa_g = 0.0;  // coupling susceptibility [rad s / m]
};

// r from the pump ratio A_p/delta via tanh(2r) = A_p/delta.
// Throws std::domain_error outside [0, 1).
double squeeze_from_pump(double pump_ratio);

// Inverse of squeeze_from_pump: A_p/delta = tanh(2r).
double pump_from_squeeze(double r);

// Phonon-number renormalization 8 cosh^2(r) sinh^2(r) + 4 sinh^4(r).
double squeeze_renorm(double r);

// omega_b = sqrt(delta^2 - A_p^2) - D * squeeze_renorm(r). May return a
// non-positive value; callers decide whether the gap must stay open.
double qubit_frequency(double delta, double pump_amp, double duffing, double r);

// omega_b for the (r, d_frac) parameterization, where D = d_frac * D_crit
// cancels to sqrt(delta^2 - A_p^2) * (1 - d_frac). Continuous at r = 0.
double qubit_frequency_scaled(double delta, double r, double d_frac);

// U_b = (D/4) (3 cosh(4r) + 1).
double anharmonicity(double duffing, double r);

// D_crit = sqrt(delta^2 - A_p^2) / squeeze_renorm(r). Returns +infinity at
// r = 0, where any Duffing strength keeps the gap open.
double critical_duffing(double delta, double pump_amp, double r);

// x0 = sqrt(hbar / 2 m omega); Omega_g = 2 e^r (mg - F) x0 / hbar;
// kappa_g = 2 m x0 e^r / hbar.
GravityCoupling gravity_coupling(double mass, double omega, double r,
                                 double force_offset);

// Gamma_x = (gamma0/2) e^{-2r}, Gamma_y = (gamma0/2) e^{2r},
// Gamma_z = gamma0 cosh(2r), Gamma_eff = Gamma_y, Xi = Gamma_eff / omega_b.
// Throws std::domain_error when omega_b <= 0 (Xi undefined).
DecoherenceRates decoherence_rates(double gamma0, double r, double omega_b);

// Figure parameterization: the user supplies (delta/omega, r, D/D_crit) and
// A_p, D are derived. r = 0 with d_frac > 0 is rejected (D_crit unbounded).
DerivedParams derive(const SensorConfig& cfg);

// Raw mode: (delta, A_p, D) supplied directly in rad/s; r is inferred from
// tanh(2r) = A_p/delta. Permits D at r = 0. Throws when the gap closes.
DerivedParams derive_raw(double mass, double omega, double delta,
                         double pump_amp, double duffing, double gamma0,
                         double force_offset);

}  // namespace msfq::params
