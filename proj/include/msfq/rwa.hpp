#pragma once

#include <cstdint>
#include <vector>

#include "msfq/errors.hpp"

namespace msfq::rwa {

// Magnitudes of the three non-number-conserving terms dropped by the
// rotating-wave approximation, each relative to its oscillation rate:
//   quartic   D sinh^2(2r) / (16 omega_b)
//   cubic     D sinh(4r)   / (4 omega_b)
//   quadratic D sinh(2r)(3 cosh(2r) - 2) / (4 omega_b)
// valid holds iff all three are strictly below epsilon (boundary points
// classify as invalid).
struct RwaReport {
  double ratio_quartic = 0.0;
  double ratio_cubic = 0.0;
  double ratio_quadratic = 0.0;
  double max_ratio = 0.0;
  double epsilon = 0.0;
  bool valid = false;
};

RwaReport rwa_ratios(double duffing, double r, double omega_b,
                     double epsilon = 0.1);

struct RwaBoundary {
  double d_rwa = 0.0;    // largest admissible Duffing strength [rad/s]
  bool binding = false;  // false when no condition binds below D_crit
};

// Largest D on (0, D_crit) satisfying all three conditions, accounting for
// the D-dependence of omega_b. Solved as a one-dimensional root problem per
// condition; the smallest root wins. r = 0 returns {D_crit, false} (the
// conditions never bind; D_crit itself is the +infinity sentinel there).
RwaBoundary rwa_boundary(double r, double epsilon, double delta,
                         double pump_amp);

struct RwaGrid {
  std::vector<double> r_values;
  std::vector<double> d_frac_values;
  // Indexed [i_r][i_d].
  std::vector<std::vector<double>> max_ratio;
  std::vector<std::vector<double>> omega_b_ratio;  // omega_b / omega
  std::vector<std::vector<std::uint8_t>> valid;
  // Safe-operation boundary D_RWA(r)/D_crit(r) per r row; 1 when not binding.
  std::vector<double> boundary_d_frac;
};

// Classifies RWA validity over a (r, d_frac) grid at fixed delta. d_frac
// values must lie in [0, 1).
RwaGrid classify_grid(const std::vector<double>& r_values,
                      const std::vector<double>& d_frac_values, double epsilon,
                      double delta, double omega);

}  // namespace msfq::rwa
