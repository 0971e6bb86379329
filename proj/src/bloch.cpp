#include "msfq/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msfq/numerics.hpp"
#include "msfq/params.hpp"
#include "msfq/rwa.hpp"

namespace msfq::bloch {

DriftSystem drift_matrix(double omega_b, double drive, double gamma0,
                         double r) {
  if (gamma0 < 0.0)
    throw std::domain_error("drift_matrix: gamma0 must be >= 0");
  DriftSystem d;
  d.omega_b = omega_b;
  d.drive = drive;
  d.gamma0 = gamma0;
  d.gamma_x = 0.5 * gamma0 * std::exp(-2.0 * r);
  d.gamma_y = 0.5 * gamma0 * std::exp(2.0 * r);
  d.gamma_z = gamma0 * std::cosh(2.0 * r);
  d.a << -d.gamma_x, omega_b, 0.0,
         -omega_b, -d.gamma_y, drive,
         0.0, -drive, -d.gamma_z;
  d.b << 0.0, 0.0, -gamma0;
  return d;
}

Eigen::Vector3d steady_state(const DriftSystem& d) {
  if (d.gamma0 <= 0.0)
    throw std::domain_error(
        "steady_state: gamma0 = 0 leaves the drift matrix singular");
  Eigen::FullPivLU<Eigen::Matrix3d> lu(d.a);
  if (!lu.isInvertible())
    throw NumericalError("steady_state: singular drift matrix");
  return lu.solve(-d.b);
}

Eigen::Vector3d propagate(const DriftSystem& d, const Eigen::Vector3d& v0,
                          double t) {
  if (t < 0.0) throw std::domain_error("propagate: t must be >= 0");
  const Eigen::Matrix3d flow = numerics::expm_small(d.a * t);
  if (d.gamma0 > 0.0) {
    const Eigen::Vector3d vss = steady_state(d);
    return vss + flow * (v0 - vss);
  }
  return flow * v0;
}

Matrix6d augmented_matrix(const DriftSystem& d) {
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = d.a;
  m.bottomRightCorner<3, 3>() = d.a;
  // dA/dOmega has exactly two entries: +1 at (1,2) and -1 at (2,1).
  m(4, 2) = 1.0;
  m(5, 1) = -1.0;
  return m;
}

namespace {

struct AugmentedFlow {
  Matrix6d m = Matrix6d::Zero();
  Vector6d y0 = Vector6d::Zero();
  Vector6d yss = Vector6d::Zero();
  bool affine = false;
};

AugmentedFlow make_flow(const DriftSystem& d) {
  AugmentedFlow f;
  f.m = augmented_matrix(d);
  f.y0 << 0.0, 0.0, -1.0, 0.0, 0.0, 0.0;
  f.affine = d.gamma0 > 0.0;
  if (f.affine) {
    Vector6d c = Vector6d::Zero();
    c.head<3>() = d.b;
    Eigen::FullPivLU<Matrix6d> lu(f.m);
    if (!lu.isInvertible())
      throw NumericalError("propagate_with_sensitivity: singular flow matrix");
    f.yss = lu.solve(-c);
  }
  return f;
}

BlochState unpack(const Vector6d& y) {
  BlochState s;
  s.v = y.head<3>();
  s.u = y.tail<3>();
  return s;
}

Vector6d flow_at(const AugmentedFlow& f, double t) {
  const Matrix6d e = numerics::expm_small(f.m * t);
  if (f.affine) return f.yss + e * (f.y0 - f.yss);
  return e * f.y0;
}

}  // namespace

BlochState propagate_with_sensitivity(const DriftSystem& d, double t) {
  if (t < 0.0)
    throw std::domain_error("propagate_with_sensitivity: t must be >= 0");
  return unpack(flow_at(make_flow(d), t));
}

std::vector<BlochState> time_series(const DriftSystem& d,
                                    const std::vector<double>& times) {
  const AugmentedFlow f = make_flow(d);
  std::vector<BlochState> out;
  out.reserve(times.size());
  Matrix6d acc = Matrix6d::Identity();
  double t_prev = 0.0;
  for (double t : times) {
    if (t < t_prev)
      throw std::invalid_argument("time_series: times must be sorted and >= 0");
    if (t > t_prev) acc = (numerics::expm_small(f.m * (t - t_prev)) * acc).eval();
    t_prev = t;
    const Vector6d y = f.affine ? (f.yss + acc * (f.y0 - f.yss)).eval()
                                : (acc * f.y0).eval();
    out.push_back(unpack(y));
  }
  return out;
}

double qfi_mixed(const BlochState& s, double kappa_g) {
  const double uu = s.u.squaredNorm();
  const double vv = s.v.squaredNorm();
  const double vu = s.v.dot(s.u);
  const double denom = 1.0 - vv;
  if (denom > 1e-12)
    return kappa_g * kappa_g * (uu + vu * vu / denom);
  // Pure-state limit: the sensitivity is tangential and the radial term
  // cancels; a genuinely radial u here means the inputs are inconsistent.
  if (vu * vu <= 1e-12 * uu || uu == 0.0) return kappa_g * kappa_g * uu;
  throw NumericalError("qfi_mixed: |v| -> 1 with non-tangential sensitivity");
}

double cfi_axis(const BlochState& s, const Eigen::Vector3d& n_axis,
                double kappa_g) {
  if (std::abs(n_axis.norm() - 1.0) > 1e-9)
    throw std::domain_error("cfi_axis: measurement axis must be unit length");
  const double nv = n_axis.dot(s.v);
  const double denom = 1.0 - nv * nv;
  if (denom <= 0.0)
    throw std::domain_error("cfi_axis: |n.v| >= 1");
  const double nu = n_axis.dot(s.u);
  return kappa_g * kappa_g * nu * nu / denom;
}

ReadoutAxis sld_axis(const BlochState& s) {
  const double uu = s.u.squaredNorm();
  const double vv = s.v.squaredNorm();
  const double vu = s.v.dot(s.u);
  const double denom = 1.0 - vv;
  Eigen::Vector3d ell;
  if (denom > 1e-12) {
    ell = s.u + (vu / denom) * s.v;
  } else if (vu * vu <= 1e-12 * uu) {
    ell = s.u;
  } else {
    throw NumericalError("sld_axis: |v| -> 1 with non-tangential sensitivity");
  }
  const double norm = ell.norm();
  if (norm == 0.0)
    throw NumericalError("sld_axis: zero information direction");
  ReadoutAxis ax;
  ax.n = ell / norm;
  ax.theta_opt = std::acos(std::clamp(ax.n.z(), -1.0, 1.0));
  ax.phi_opt = std::atan2(ax.n.y(), ax.n.x());
  return ax;
}

DecoherentOptimum optimal_time_decoherent(const DriftSystem& d, double kappa_g,
                                          double t_max) {
  if (!(t_max > 0.0))
    throw std::domain_error("optimal_time_decoherent: t_max must be > 0");
  if (!(kappa_g > 0.0))
    throw std::domain_error("optimal_time_decoherent: kappa_g must be > 0");

  // The QFI can peak very early when Gamma_y dominates, so a logarithmic
  // prefix complements the linear grid.
  std::vector<double> grid;
  constexpr int n_log = 512;
  constexpr int n_lin = 2048;
  grid.reserve(n_log + n_lin);
  const double t_lo = t_max * 1e-6;
  for (int i = 0; i < n_log; ++i)
    grid.push_back(t_lo * std::pow(t_max / t_lo,
                                   static_cast<double>(i) / (n_log - 1)));
  for (int i = 1; i <= n_lin; ++i)
    grid.push_back(t_max * static_cast<double>(i) / n_lin);
  std::sort(grid.begin(), grid.end());

  const std::vector<BlochState> states = time_series(d, grid);
  auto objective_of = [kappa_g](double t, const BlochState& s) {
    const double f = qfi_mixed(s, kappa_g);
    if (!(f > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(t / f);
  };

  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double val = objective_of(grid[i], states[i]);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  if (!std::isfinite(best_val))
    throw NumericalError(
        "optimal_time_decoherent: QFI vanishes on the whole grid");

  const double lo = best > 0 ? grid[best - 1] : 0.5 * grid[0];
  const double hi = best + 1 < grid.size() ? grid[best + 1] : t_max;
  const numerics::ScalarMinimum refined = numerics::minimize_scalar(
      [&](double t) {
        return objective_of(t, propagate_with_sensitivity(d, t));
      },
      lo, hi, 1e-9 * grid[best]);

  if (refined.value <= best_val) return {refined.argmin, refined.value};
  return {grid[best], best_val};
}

std::optional<double> crossover_squeezing(double gamma0, double delta,
                                          double d_frac, double epsilon,
                                          double r_cap) {
  if (gamma0 < 0.0)
    throw std::domain_error("crossover_squeezing: gamma0 must be >= 0");
  if (!(d_frac >= 0.0) || d_frac >= 1.0)
    throw std::domain_error("crossover_squeezing: d_frac must lie in [0, 1)");
  if (gamma0 == 0.0) return std::nullopt;  // Xi is identically zero

  auto xi_at = [&](double r) {
    const double omega_b = params::qubit_frequency_scaled(delta, r, d_frac);
    return 0.5 * gamma0 * std::exp(2.0 * r) / omega_b;
  };
  auto max_ratio_at = [&](double r) {
    const double pump_amp = delta * params::pump_from_squeeze(r);
    const double d_crit = params::critical_duffing(delta, pump_amp, r);
    const double omega_b = params::qubit_frequency_scaled(delta, r, d_frac);
    return rwa::rwa_ratios(d_frac * d_crit, r, omega_b, epsilon).max_ratio;
  };

  // Upper end of the admissible squeezing range. Validity in r at fixed
  // d_frac is an interval: the dropped quadratic term diverges as r -> 0
  // (D = d_frac D_crit grows like 1/r^2) and the ratios can re-cross epsilon
  // at large r, so take the last valid scan point and refine upward.
  constexpr int n_scan = 512;
  int last_valid = -1;
  for (int i = 1; i <= n_scan; ++i) {
    const double r = r_cap * static_cast<double>(i) / n_scan;
    if (max_ratio_at(r) < epsilon) last_valid = i;
  }
  if (last_valid < 0) return std::nullopt;  // no admissible squeezing range
  double r_max = r_cap;
  if (last_valid < n_scan) {
    const double r_lo = r_cap * static_cast<double>(last_valid) / n_scan;
    const double r_hi = r_cap * static_cast<double>(last_valid + 1) / n_scan;
    r_max = numerics::find_root(
        [&](double x) { return max_ratio_at(x) - epsilon; }, r_lo, r_hi,
        1e-12);
  }

  // Xi grows like e^{2r} cosh(2r); confirm monotonicity on samples before
  // committing to bisection.
  double prev = xi_at(0.0);
  for (int i = 1; i <= 64; ++i) {
    const double cur = xi_at(r_max * static_cast<double>(i) / 64.0);
    if (cur < prev * (1.0 - 1e-12))
      throw NumericalError("crossover_squeezing: Xi(r) is not monotone");
    prev = cur;
  }

  if (xi_at(0.0) >= 1.0) return 0.0;  // decoherent already at r = 0
  if (xi_at(r_max) < 1.0) return std::nullopt;

  const double root = numerics::find_root(
      [&](double r) { return xi_at(r) - 1.0; }, 0.0, r_max, 1e-14 * r_max);
  return root;
}

}  // namespace msfq::bloch
