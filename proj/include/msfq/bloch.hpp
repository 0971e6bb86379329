#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "msfq/errors.hpp"

namespace msfq::bloch {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Damped Rabi drift dv/dt = A v + b with
//   A = [[-Gx, wb, 0], [-wb, -Gy, Omega], [0, -Omega, -Gz]],  b = (0, 0, -g0).
struct DriftSystem {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double omega_b = 0.0;
  double drive = 0.0;   // Omega_g^s [rad/s]
  double gamma0 = 0.0;
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  double gamma_z = 0.0;
};

DriftSystem drift_matrix(double omega_b, double drive, double gamma0, double r);

// Bloch vector and its drive sensitivity u = dv/dOmega.
struct BlochState {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
};

// Solves A v_ss = -b. Throws std::domain_error at gamma0 = 0 (singular A).
Eigen::Vector3d steady_state(const DriftSystem& d);

// v(t) = v_ss + e^{At}(v0 - v_ss); homogeneous e^{At} v0 when gamma0 = 0.
Eigen::Vector3d propagate(const DriftSystem& d, const Eigen::Vector3d& v0,
                          double t);

// Propagates the augmented 6-dimensional system for (v, u) from
// v(0) = (0,0,-1), u(0) = 0 using one exact linear flow.
BlochState propagate_with_sensitivity(const DriftSystem& d, double t);

// Augmented generator [[A, 0], [dA/dOmega, A]]. Exposed for oracles.
Matrix6d augmented_matrix(const DriftSystem& d);

// Batch evaluation of (v, u) at sorted non-negative times; exact flow with
// accumulated step products.
std::vector<BlochState> time_series(const DriftSystem& d,
                                    const std::vector<double>& times);

// Mixed-state QFI kappa^2 [u.u + (v.u)^2 / (1 - v.v)]. Near |v| = 1 the
// radial term cancels analytically for physical states and is dropped;
// a non-tangential u there raises NumericalError.
double qfi_mixed(const BlochState& s, double kappa_g);

// CFI of the projective measurement along unit axis n:
// kappa^2 (n.u)^2 / (1 - (n.v)^2).
double cfi_axis(const BlochState& s, const Eigen::Vector3d& n_axis,
                double kappa_g);

struct ReadoutAxis {
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  double theta_opt = 0.0;  // arccos(n_z)
  double phi_opt = 0.0;    // atan2(n_y, n_x)
};

// Measurement axis along the symmetric-logarithmic-derivative direction,
// n = l/|l| with l = u + (v.u) v / (1 - |v|^2). Throws when l = 0.
ReadoutAxis sld_axis(const BlochState& s);

struct DecoherentOptimum {
  double t_opt = 0.0;      // argmin of sqrt(t / F_Q(t)) on (0, t_max]
  double dg_sqrt_t = 0.0;  // attained minimum [m s^-2 sqrt(s)]
};

// Global minimizer of sqrt(t / qfi_mixed(t)) found on a hybrid log+linear
// grid (>= 2000 points) with golden-section refinement.
DecoherentOptimum optimal_time_decoherent(const DriftSystem& d, double kappa_g,
                                          double t_max);

// Root of Xi(r) = 1 at fixed (gamma0, delta, d_frac), searched on
// [0, r_max] where r_max is capped by RWA validity at the given epsilon.
// nullopt when Xi stays below 1 on the whole admissible range.
std::optional<double> crossover_squeezing(double gamma0, double delta,
                                          double d_frac, double epsilon = 0.1,
                                          double r_cap = 10.0);

}  // namespace msfq::bloch
