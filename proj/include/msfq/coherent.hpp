#pragma once

#include <complex>

#include "msfq/constants.hpp"
#include "msfq/errors.hpp"

namespace msfq::coherent {

// Amplitudes of the squeezed-Fock qubit state alpha|0> + beta|1>.
struct QubitState {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};
};

// Rabi problem for the static-drive qubit Hamiltonian
// (omega_b/2) sigma_z + (drive/2) sigma_x. rabi = sqrt(omega_b^2 + drive^2)
// holds by construction of make().
struct RabiParams {
  double omega_b = 0.0;  // qubit splitting [rad/s]
  double drive = 0.0;    // gravity-induced coupling Omega_g^s [rad/s]
  double rabi = 0.0;     // generalized Rabi frequency [rad/s]

  static RabiParams make(double omega_b, double drive);
};

// State at time t starting from |0>:
//   alpha = cos(rabi t/2) + i (omega_b/rabi) sin(rabi t/2)
//   beta  = -i (drive/rabi) sin(rabi t/2)
// rabi = 0 degenerates to the free state (1, 0).
QubitState evolve_pure(const RabiParams& p, double t);

// Excited-state probability P1 = (drive/rabi)^2 sin^2(rabi t/2).
double excited_population(const RabiParams& p, double t);

// Exact quantum Fisher information for estimating g from the pure state,
// in (m/s^2)^-2. Zero at rabi = 0.
double qfi_exact(const RabiParams& p, double kappa_g, double t);

// Exact classical Fisher information of the binary population measurement.
// Evaluated in a cancelled form that is regular at P1 = 0; the isolated
// P1 = 1 degeneracy (omega_b = 0 with sin^2 = 1) is averaged over
// t +/- 1e-9/rabi.
double cfi_population_exact(const RabiParams& p, double kappa_g, double t);

// Weak-force QFI, (8 m e^{2r} / hbar omega omega_b^2) sin^2(omega_b t / 2).
double qfi_weak(double mass, double omega, double r, double omega_b, double t);

struct CoherentSensitivity {
  double t_opt = 0.0;      // first optimal interrogation time pi/omega_b [s]
  double dg_sqrt_t = 0.0;  // time-normalized sensitivity [m s^-2 sqrt(s)]
};

// t_opt = pi/omega_b and sqrt(T) dg = sqrt(pi hbar omega omega_b / 8 m e^{2r}).
CoherentSensitivity sensitivity_coherent(double mass, double omega, double r,
                                         double omega_b);

struct Benchmarks {
  double mq = 0.0;   // plain mechanical-qubit sensitivity [m s^-2 sqrt(s)]
  double mcq = 0.0;  // cat-qubit sensitivity at the given phonon number
};

// mq = sqrt(pi hbar omega^2 / 8 m), mcq = sqrt(pi hbar omega^2 / 16 m N).
Benchmarks benchmarks(double mass, double omega, double phonons);

}  // namespace msfq::coherent
