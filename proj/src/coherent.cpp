#include "msfq/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace msfq::coherent {

RabiParams RabiParams::make(double omega_b, double drive) {
  if (omega_b < 0.0)
    throw std::domain_error("RabiParams: omega_b must be >= 0");
  return {omega_b, drive, std::hypot(omega_b, drive)};
}

QubitState evolve_pure(const RabiParams& p, double t) {
  if (t < 0.0) throw std::domain_error("evolve_pure: t must be >= 0");
  if (p.rabi == 0.0) return {};
  const double half = 0.5 * p.rabi * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  QubitState st;
  st.alpha = {c, (p.omega_b / p.rabi) * s};
  st.beta = {0.0, -(p.drive / p.rabi) * s};
  return st;
}

double excited_population(const RabiParams& p, double t) {
  if (p.rabi == 0.0) return 0.0;
  const double s = std::sin(0.5 * p.rabi * t);
  const double w = p.drive / p.rabi;
  return w * w * s * s;
}

double qfi_exact(const RabiParams& p, double kappa_g, double t) {
  const double wr = p.rabi;
  if (wr == 0.0) return 0.0;
  const double wb2 = p.omega_b * p.omega_b;
  const double om2 = p.drive * p.drive;
  const double wr2 = wr * wr;
  const double s_full = std::sin(wr * t);
  const double s_half = std::sin(0.5 * wr * t);
  const double num = om2 * om2 * wr2 * t * t +
                     2.0 * om2 * wb2 * wr * t * s_full +
                     4.0 * wb2 * wr2 * s_half * s_half -
                     om2 * wb2 * s_full * s_full;
  return kappa_g * kappa_g * num / (wr2 * wr2 * wr2);
}

namespace {

// dP1/dOmega = Omega sin(rabi t/2) h(t) and P1(1-P1) carries the same
// Omega^2 sin^2 factor, so the CFI reduces to
//   kappa^2 rabi^4 h^2 / (omega_b^2 + Omega^2 cos^2(rabi t/2)),
// which is regular everywhere except omega_b = 0 with cos = 0.
double cfi_regularized(const RabiParams& p, double kappa_g, double t,
                       bool allow_retry) {
  const double wr = p.rabi;
  const double wr2 = wr * wr;
  const double wb2 = p.omega_b * p.omega_b;
  const double om2 = p.drive * p.drive;
  const double s_half = std::sin(0.5 * wr * t);
  const double c_half = std::cos(0.5 * wr * t);
  const double h = 2.0 * wb2 / (wr2 * wr2) * s_half +
                   om2 * t / (wr2 * wr) * c_half;
  const double denom = wb2 + om2 * c_half * c_half;
  if (denom <= 0.0) {
    if (!allow_retry)
      throw NumericalError("cfi_population_exact: degenerate point");
    const double dt = 1e-9 / wr;
    return 0.5 * (cfi_regularized(p, kappa_g, t - dt, false) +
                  cfi_regularized(p, kappa_g, t + dt, false));
  }
  return kappa_g * kappa_g * wr2 * wr2 * h * h / denom;
}

}  // namespace

double cfi_population_exact(const RabiParams& p, double kappa_g, double t) {
  if (p.rabi == 0.0) return 0.0;
  return cfi_regularized(p, kappa_g, t, true);
}

double qfi_weak(double mass, double omega, double r, double omega_b,
                double t) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::domain_error("qfi_weak: mass and omega must be > 0");
  if (!(omega_b > 0.0))
    throw std::domain_error("qfi_weak: omega_b must be > 0");
  const double s = std::sin(0.5 * omega_b * t);
  return 8.0 * mass * std::exp(2.0 * r) / (kHbar * omega * omega_b * omega_b) *
         s * s;
}

CoherentSensitivity sensitivity_coherent(double mass, double omega, double r,
                                         double omega_b) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::domain_error("sensitivity_coherent: mass and omega must be > 0");
  if (!(omega_b > 0.0))
    throw std::domain_error("sensitivity_coherent: omega_b must be > 0");
  CoherentSensitivity s;
  s.t_opt = kPi / omega_b;
  s.dg_sqrt_t =
      std::sqrt(kPi * kHbar * omega * omega_b / (8.0 * mass * std::exp(2.0 * r)));
  return s;
}

Benchmarks benchmarks(double mass, double omega, double phonons) {
  if (!(mass > 0.0) || !(omega > 0.0) || !(phonons > 0.0))
    throw std::domain_error("benchmarks: mass, omega, phonons must be > 0");
  Benchmarks b;
  b.mq = std::sqrt(kPi * kHbar * omega * omega / (8.0 * mass));
  b.mcq = std::sqrt(kPi * kHbar * omega * omega / (16.0 * mass * phonons));
  return b;
}

}  // namespace msfq::coherent
