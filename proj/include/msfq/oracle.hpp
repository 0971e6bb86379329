#pragma once

#include <Eigen/Dense>
#include <vector>

#include "msfq/constants.hpp"
#include "msfq/errors.hpp"
#include "msfq/params.hpp"

namespace msfq::oracle {

// Truncated bosonic ladder operators, and the squeeze operator once built.
struct FockOperators {
  Eigen::Index dim = 0;
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd a_dag;
  Eigen::MatrixXcd n_op;
  Eigen::MatrixXcd s;  // empty until build_squeeze
  // The stated squeeze generator (xi* a^2 + xi a'^2)/2 is Hermitian and its
  // exponential is not unitary; when it fails the Bogoliubov check the
  // relative sign is flipped and recorded here.
  bool squeeze_sign_flipped = false;
  double bogoliubov_residual = 0.0;
};

FockOperators build_operators(Eigen::Index dim);

// Truncation adequacy heuristic 20 + ceil(20 sinh^2 r), floored at 80.
Eigen::Index suggested_dim(double r);

// Larger truncation needed for the Bogoliubov check: the tanh^n tails of
// squeezed Fock states converge slowly, roughly 80 + 130 sinh^2 r.
Eigen::Index squeeze_check_dim(double r);

// Builds S = exp(generator) with xi = r e^{i theta} and verifies
// S a S^dag ~ cosh(r) a + e^{i theta} sinh(r) a^dag on the lowest dim/2
// levels to 1e-6, flipping the generator sign if the stated convention
// fails. Residual > 1e-4 raises a truncation-too-small error.
void build_squeeze(FockOperators& ops, double r, double theta);

struct SpectrumReport {
  double gap01 = 0.0;  // exact E1 - E0 [rad/s]
  double gap12 = 0.0;  // exact E2 - E1 [rad/s]
  double model_gap01 = 0.0;  // omega_b
  double model_gap12 = 0.0;  // omega_b - 2 U_b
  double rel_err01 = 0.0;
  double rel_err12 = 0.0;
  double leak = 0.0;  // lowest-3 eigenvector weight in the top 20% of levels
};

// Dense Hermitian diagonalization of the rotating-frame Hamiltonian
//   delta n - D a'^2 a^2 + (A_p/2)(e^{-i theta} a^2 + e^{i theta} a'^2),
// compared against the effective-ladder gaps (omega_b, omega_b - 2 U_b).
SpectrumReport spectrum_check(double delta, double pump_amp, double duffing,
                              double r, Eigen::Index dim, double theta = kPi);

struct MasterEquationRun {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> populations;  // level populations per time
  std::vector<Eigen::Vector3d> bloch;        // {0,1}-block Bloch vector
  std::vector<double> leakage;               // population in levels >= 2
  double trace_dev_max = 0.0;
  double herm_dev_max = 0.0;
  double min_eigenvalue = 0.0;
};

// Integrates the Lindblad equation in the squeezed-mode Fock basis with
//   H = hbar omega_b n - hbar U_b b'^2 b^2 + G (b + b'),
//   L = cosh(r) b + sinh(r) b'   (theta = pi form),
// damping rate gamma0/2 per the two-sided dissipator convention.
// g_energy is G in joules. Trace deviation beyond 1e-8 raises an error.
MasterEquationRun b_space_master_equation(double omega_b, double u_b,
                                          double g_energy, double gamma0,
                                          double r, Eigen::Index levels,
                                          const std::vector<double>& t_grid,
                                          Eigen::Index initial_level = 0);

struct ProjectionReport {
  double max_bloch_dev = 0.0;
  double max_leakage = 0.0;
  // Leakage beyond what damping alone produces, measured against a G = 0
  // companion run. Damping pumps the squeezed mode at O(gamma0 sinh^2 r t)
  // regardless of the drive, so the raw leakage cannot flag a too-strong G.
  double drive_leakage = 0.0;
  bool pass = false;
};

// Runs the truncated master equation and the qubit Bloch solver on the same
// derived parameters (drive Omega = omega_g, G = hbar omega_g / 2) and
// reports the worst-case disagreement. PASS requires
//   max_bloch_dev <= max(1e-3, 10 * max_leakage)  and
//   drive_leakage <= 2e-3  (the G << 2 U_b operating condition).
ProjectionReport projection_consistency(const params::DerivedParams& p,
                                        Eigen::Index levels,
                                        const std::vector<double>& t_grid);

}  // namespace msfq::oracle
