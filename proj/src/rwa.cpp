#include "msfq/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msfq/numerics.hpp"
#include "msfq/params.hpp"

namespace msfq::rwa {

RwaReport rwa_ratios(double duffing, double r, double omega_b,
                     double epsilon) {
  if (!(omega_b > 0.0))
    throw std::domain_error("rwa_ratios: gap closed (omega_b <= 0)");
  if (duffing < 0.0)
    throw std::domain_error("rwa_ratios: Duffing strength must be >= 0");
  if (!(epsilon > 0.0))
    throw std::domain_error("rwa_ratios: epsilon must be > 0");

  const double s2 = std::sinh(2.0 * r);
  const double s4 = std::sinh(4.0 * r);
  const double c2 = std::cosh(2.0 * r);

  RwaReport rep;
  rep.epsilon = epsilon;
  rep.ratio_quartic = duffing * s2 * s2 / (16.0 * omega_b);
  rep.ratio_cubic = duffing * s4 / (4.0 * omega_b);
  rep.ratio_quadratic = duffing * s2 * (3.0 * c2 - 2.0) / (4.0 * omega_b);
  rep.max_ratio = std::max({rep.ratio_quartic, rep.ratio_cubic,
                            rep.ratio_quadratic});
  rep.valid = rep.ratio_quartic < epsilon && rep.ratio_cubic < epsilon &&
              rep.ratio_quadratic < epsilon;
  return rep;
}

RwaBoundary rwa_boundary(double r, double epsilon, double delta,
                         double pump_amp) {
  if (!(epsilon > 0.0))
    throw std::domain_error("rwa_boundary: epsilon must be > 0");
  const double d_crit = params::critical_duffing(delta, pump_amp, r);
  if (r <= 0.0 || !std::isfinite(d_crit)) return {d_crit, false};

  const double gap = std::sqrt((delta - pump_amp) * (delta + pump_amp));
  const double q = params::squeeze_renorm(r);
  const double s2 = std::sinh(2.0 * r);
  const double s4 = std::sinh(4.0 * r);
  const double c2 = std::cosh(2.0 * r);

  // Condition k reads D s_k < epsilon c_k omega_b(D) with
  // omega_b(D) = gap - D q, so each boundary is a root in D.
  struct Condition {
    double strength;
    double rate;
  };
  const Condition conds[3] = {{s2 * s2 / 4.0, 4.0},
                              {s4 / 2.0, 2.0},
                              {s2 * (3.0 * c2 - 2.0) / 2.0, 2.0}};

  RwaBoundary out{d_crit, false};
  for (const Condition& k : conds) {
    auto excess = [&](double d) {
      return d * k.strength - epsilon * k.rate * (gap - d * q);
    };
    if (excess(d_crit) <= 0.0) continue;  // never binds on (0, D_crit)
    const double root =
        numerics::find_root(excess, 0.0, d_crit, 1e-14 * d_crit);
    if (root < out.d_rwa) {
      out.d_rwa = root;
      out.binding = true;
    }
  }
  return out;
}

RwaGrid classify_grid(const std::vector<double>& r_values,
                      const std::vector<double>& d_frac_values, double epsilon,
                      double delta, double omega) {
  if (!(omega > 0.0))
    throw std::domain_error("classify_grid: omega must be > 0");
  for (double d : d_frac_values)
    if (d < 0.0 || d >= 1.0)
      throw std::domain_error("classify_grid: d_frac values must lie in [0, 1)");

  RwaGrid grid;
  grid.r_values = r_values;
  grid.d_frac_values = d_frac_values;
  const std::size_t nr = r_values.size();
  const std::size_t nd = d_frac_values.size();
  grid.max_ratio.assign(nr, std::vector<double>(nd, 0.0));
  grid.omega_b_ratio.assign(nr, std::vector<double>(nd, 0.0));
  grid.valid.assign(nr, std::vector<std::uint8_t>(nd, 1));
  grid.boundary_d_frac.assign(nr, 1.0);

  for (std::size_t i = 0; i < nr; ++i) {
    const double r = r_values[i];
    const double pump_amp = delta * params::pump_from_squeeze(r);
    const double d_crit = params::critical_duffing(delta, pump_amp, r);
    const RwaBoundary boundary = rwa_boundary(r, epsilon, delta, pump_amp);
    grid.boundary_d_frac[i] =
        boundary.binding && std::isfinite(d_crit) ? boundary.d_rwa / d_crit
                                                  : 1.0;
    for (std::size_t j = 0; j < nd; ++j) {
      const double d_frac = d_frac_values[j];
      const double omega_b = params::qubit_frequency_scaled(delta, r, d_frac);
      grid.omega_b_ratio[i][j] = omega_b / omega;
      if (r == 0.0) {
        // D = d_frac D_crit diverges as r -> 0, and so does the dropped
        // quadratic term; only the undriven column survives in the limit.
        grid.max_ratio[i][j] =
            d_frac == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        grid.valid[i][j] = d_frac == 0.0 ? 1 : 0;
        continue;
      }
      const double duffing = d_frac * d_crit;
      const RwaReport rep = rwa_ratios(duffing, r, omega_b, epsilon);
      grid.max_ratio[i][j] = rep.max_ratio;
      grid.valid[i][j] = rep.valid ? 1 : 0;
    }
  }
  return grid;
}

}  // namespace msfq::rwa
