#include "msfq/validate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "msfq/bloch.hpp"
#include "msfq/coherent.hpp"
#include "msfq/constants.hpp"
#include "msfq/numerics.hpp"
#include "msfq/oracle.hpp"
#include "msfq/params.hpp"
#include "msfq/rwa.hpp"

namespace msfq::validate {

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string bound_detail(double worst, double bound) {
  std::ostringstream os;
  os << "worst " << worst << " vs bound " << bound;
  return os.str();
}

CheckResult bounded(const std::string& name, double worst, double bound) {
  return {name, worst <= bound, bound_detail(worst, bound)};
}

CheckResult params_roundtrip() {
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.999 * i / 200.0;
    const double back =
        params::pump_from_squeeze(params::squeeze_from_pump(x));
    worst = std::max(worst, std::abs(back - x));
  }
  return bounded("params/pump-squeeze-roundtrip", worst, 1e-13);
}

CheckResult params_monotonic() {
  const double delta = 0.05;
  bool ok = true;
  for (double r : {0.2, 0.6, 1.0, 1.4}) {
    double prev = params::qubit_frequency_scaled(delta, r, 0.0);
    for (int i = 1; i <= 50; ++i) {
      const double cur =
          params::qubit_frequency_scaled(delta, r, 0.98 * i / 50.0);
      ok = ok && cur < prev;
      prev = cur;
    }
  }
  for (double d : {0.0, 0.3, 0.6}) {
    double prev = params::qubit_frequency_scaled(delta, 0.0, d);
    for (int i = 1; i <= 50; ++i) {
      const double cur =
          params::qubit_frequency_scaled(delta, 2.0 * i / 50.0, d);
      ok = ok && cur < prev;
      prev = cur;
    }
  }
  for (double duffing : {1e-5, 1e-3}) {
    double prev = params::anharmonicity(duffing, 0.0);
    for (int i = 1; i <= 50; ++i) {
      const double cur = params::anharmonicity(duffing, 2.0 * i / 50.0);
      ok = ok && cur > prev;
      prev = cur;
    }
  }
  return {"params/monotonicity", ok, "omega_b down in (r, d_frac), U_b up in r"};
}

CheckResult params_identities() {
  double worst = 0.0;
  for (double r : {0.0, 0.3, 0.7, 1.2}) {
    const auto g = params::gravity_coupling(1e-9, 2.0 * kPi * 1e3, r, 0.0);
    const double direct = g.kappa_g * g.kappa_g;
    const double closed =
        2.0 * 1e-9 * std::exp(2.0 * r) / (kHbar * 2.0 * kPi * 1e3);
    worst = std::max(worst, std::abs(direct / closed - 1.0));

    const auto rates = params::decoherence_rates(1e-3, r, 1.0);
    worst = std::max(worst, std::abs(rates.gamma_z -
                                     (rates.gamma_x + rates.gamma_y)) /
                                rates.gamma_z);
    worst = std::max(
        worst, std::abs(rates.gamma_x * rates.gamma_y / (0.25e-6) - 1.0));
  }
  return bounded("params/kappa-and-rate-identities", worst, 1e-12);
}

CheckResult coherent_normalization() {
  const auto p = coherent::RabiParams::make(66.8, 21.4);
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 0.4 * i / 500.0;
    const coherent::QubitState st = coherent::evolve_pure(p, t);
    worst = std::max(worst, std::abs(std::norm(st.alpha) +
                                     std::norm(st.beta) - 1.0));
  }
  return bounded("coherent/normalization", worst, 1e-12);
}

CheckResult coherent_cfi_bounded() {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double omega_b = 10.0 + 100.0 * u01(rng);
    const double drive = omega_b * (0.001 + u01(rng));
    const auto p = coherent::RabiParams::make(omega_b, drive);
    const double t = 8.0 * u01(rng) / p.rabi * kPi;
    const double q = coherent::qfi_exact(p, 1.0, t);
    const double c = coherent::cfi_population_exact(p, 1.0, t);
    if (q > 0.0) worst = std::max(worst, c / q - 1.0);
  }
  return bounded("coherent/cfi-below-qfi", worst, 1e-10);
}

CheckResult coherent_weak_limit() {
  const double omega_b = 66.8;
  const double t = 1.3 / omega_b;
  auto rel_err = [&](double drive) {
    const auto p = coherent::RabiParams::make(omega_b, drive);
    const double exact = coherent::qfi_exact(p, 1.0, t);
    const double weak = 4.0 / (omega_b * omega_b) *
                        std::pow(std::sin(0.5 * omega_b * t), 2);
    return std::abs(exact / weak - 1.0);
  };
  const double ratio = rel_err(1e-3 * omega_b) / rel_err(5e-4 * omega_b);
  const bool ok = ratio > 3.5 && ratio < 4.5;
  return {"coherent/weak-limit-order", ok, bound_detail(ratio, 4.0)};
}

CheckResult numerics_semigroup() {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Eigen::MatrixXd a(3, 3);
    for (int k = 0; k < 9; ++k) a(k / 3, k % 3) = 2.0 * u01(rng) - 1.0;
    a -= 2.0 * Eigen::MatrixXd::Identity(3, 3);  // keep it stable
    const double t1 = u01(rng);
    const double t2 = u01(rng);
    const Eigen::MatrixXd lhs = numerics::expm_small(a * t1) *
                                numerics::expm_small(a * t2);
    const Eigen::MatrixXd rhs = numerics::expm_small(a * (t1 + t2));
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
  }
  return bounded("numerics/expm-semigroup", worst, 1e-10);
}

CheckResult numerics_ode_linear() {
  std::mt19937_64 rng(13);
  Eigen::MatrixXd a(4, 4);
  for (int k = 0; k < 16; ++k) a(k / 4, k % 4) = 2.0 * u01(rng) - 1.0;
  Eigen::VectorXd y0(4);
  for (int k = 0; k < 4; ++k) y0(k) = u01(rng);
  const double t = 2.0;
  const Eigen::VectorXd ref = numerics::expm_small(a * t) * y0;
  const Eigen::VectorXd got = numerics::ode_integrate(
      [&a](double, const Eigen::VectorXd& y) { return (a * y).eval(); }, y0,
      0.0, t, {1e-11, 1e-14, 200});
  return bounded("numerics/ode-on-linear-system",
                 (got - ref).norm() / ref.norm(), 1e-8);
}

CheckResult rwa_boundary_analytic() {
  std::mt19937_64 rng(14);
  const double delta = 0.05 * 2.0 * kPi * 1e3;
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double r = 0.3 + 1.2 * u01(rng);
    const double eps = 0.02 + 0.3 * u01(rng);
    const double pump_amp = delta * params::pump_from_squeeze(r);
    const double numeric = rwa::rwa_boundary(r, eps, delta, pump_amp).d_rwa;
    const double gap = std::sqrt((delta - pump_amp) * (delta + pump_amp));
    const double q = params::squeeze_renorm(r);
    const double s2 = std::sinh(2.0 * r);
    const double s4 = std::sinh(4.0 * r);
    const double c2 = std::cosh(2.0 * r);
    const double strengths[3] = {s2 * s2 / 4.0, s4 / 2.0,
                                 s2 * (3.0 * c2 - 2.0) / 2.0};
    const double rates[3] = {4.0, 2.0, 2.0};
    double analytic = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
      analytic = std::min(analytic, eps * rates[k] * gap /
                                        (strengths[k] + eps * rates[k] * q));
    worst = std::max(worst, std::abs(numeric / analytic - 1.0));
  }
  return bounded("rwa/numeric-vs-analytic-boundary", worst, 1e-10);
}

bloch::DriftSystem random_drift(std::mt19937_64& rng) {
  const double omega = 2.0 * kPi * 1e3;
  const double omega_b = (0.005 + 0.045 * u01(rng)) * omega;
  const double drive = 0.5 * omega_b * u01(rng);
  const double gamma0 = 5e-3 * omega * u01(rng);
  const double r = 1.5 * u01(rng);
  return bloch::drift_matrix(omega_b, drive, gamma0, r);
}

CheckResult bloch_closed_vs_ode() {
  std::mt19937_64 rng(15);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const bloch::DriftSystem d = random_drift(rng);
    const bloch::Matrix6d m = bloch::augmented_matrix(d);
    bloch::Vector6d c = bloch::Vector6d::Zero();
    c.head<3>() = d.b;
    bloch::Vector6d y0;
    y0 << 0.0, 0.0, -1.0, 0.0, 0.0, 0.0;
    const double t = (1.0 + 9.0 * u01(rng)) * kPi / d.omega_b;
    const bloch::Vector6d ode = numerics::ode_integrate(
        [&](double, const bloch::Vector6d& y) {
          return (m * y + c).eval();
        },
        y0, 0.0, t, {1e-12, 1e-16, 200});
    const bloch::BlochState s = bloch::propagate_with_sensitivity(d, t);
    bloch::Vector6d closed;
    closed << s.v, s.u;
    const double scale_v = std::max(ode.head<3>().cwiseAbs().maxCoeff(), 1e-3);
    const double scale_u = std::max(ode.tail<3>().cwiseAbs().maxCoeff(),
                                    1e-3 / d.omega_b);
    worst = std::max(worst,
                     (closed - ode).head<3>().cwiseAbs().maxCoeff() / scale_v);
    worst = std::max(worst,
                     (closed - ode).tail<3>().cwiseAbs().maxCoeff() / scale_u);
  }
  return bounded("bloch/closed-form-vs-ode", worst, 1e-8);
}

CheckResult bloch_fd_sensitivity() {
  std::mt19937_64 rng(16);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const bloch::DriftSystem d = random_drift(rng);
    const double t = (0.5 + 2.0 * u01(rng)) * kPi / d.omega_b;
    const bloch::BlochState s = bloch::propagate_with_sensitivity(d, t);
    const double h = 1e-6 * std::max({d.omega_b, d.gamma_y, std::abs(d.drive),
                                      1e-3 * 2.0 * kPi * 1e3});
    auto v_at = [&](double drive) {
      bloch::DriftSystem ds = d;  // identical rates, shifted drive
      ds.drive = drive;
      ds.a(1, 2) = drive;
      ds.a(2, 1) = -drive;
      return bloch::propagate(ds, Eigen::Vector3d(0.0, 0.0, -1.0), t);
    };
    const Eigen::Vector3d fd =
        (v_at(d.drive + h) - v_at(d.drive - h)) / (2.0 * h);
    const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-12);
    worst = std::max(worst, (fd - s.u).cwiseAbs().maxCoeff() / scale);
  }
  return bounded("bloch/sensitivity-vs-finite-difference", worst, 1e-6);
}

CheckResult bloch_sld_saturation() {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    bloch::BlochState s;
    const double radius = 0.999 * std::cbrt(u01(rng));
    Eigen::Vector3d dir(2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0,
                        2.0 * u01(rng) - 1.0);
    if (dir.norm() == 0.0) dir = Eigen::Vector3d::UnitZ();
    s.v = radius * dir.normalized();
    s.u = Eigen::Vector3d(2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0,
                          2.0 * u01(rng) - 1.0) *
          0.1;
    if (s.u.norm() == 0.0) continue;
    const double qfi = bloch::qfi_mixed(s, 1.0);
    const double cfi = bloch::cfi_axis(s, bloch::sld_axis(s).n, 1.0);
    worst = std::max(worst, std::abs(cfi / qfi - 1.0));
  }
  return bounded("bloch/sld-saturates-qfi", worst, 1e-8);
}

CheckResult bloch_ball() {
  std::mt19937_64 rng(18);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const bloch::DriftSystem d = random_drift(rng);
    std::vector<double> times;
    for (int k = 0; k <= 200; ++k)
      times.push_back(10.0 * kPi / d.omega_b * k / 200.0);
    for (const bloch::BlochState& s : bloch::time_series(d, times))
      worst = std::max(worst, s.v.norm());
  }
  return bounded("bloch/state-stays-in-ball", worst, 1.0 + 1e-9);
}

CheckResult oracle_squeezed_vacuum() {
  oracle::FockOperators f = oracle::build_operators(80);
  oracle::build_squeeze(f, 0.5, kPi);
  const Eigen::VectorXcd vac = f.s.col(0);
  const double n_mean = (vac.adjoint() * f.n_op * vac)(0, 0).real();
  const double expected = std::pow(std::sinh(0.5), 2);
  return bounded("oracle/squeezed-vacuum-phonons",
                 std::abs(n_mean - expected), 1e-6);
}

CheckResult oracle_master_equation() {
  const double omega = 2.0 * kPi * 1e3;
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(2.0 / omega * k);
  const auto run = oracle::b_space_master_equation(
      0.01 * omega, 1.6e-3 * omega, 0.0, 1e-3 * omega, 1.0, 5, times, 1);
  const bool ok = run.trace_dev_max <= 1e-8 && run.herm_dev_max <= 1e-10 &&
                  run.min_eigenvalue >= -1e-8;
  std::ostringstream os;
  os << "trace " << run.trace_dev_max << ", herm " << run.herm_dev_max
     << ", min-eig " << run.min_eigenvalue;
  return {"oracle/master-equation-sanity", ok, os.str()};
}

}  // namespace

std::vector<CheckResult> run_battery() {
  return {
      params_roundtrip(),      params_monotonic(),
      params_identities(),     coherent_normalization(),
      coherent_cfi_bounded(),  coherent_weak_limit(),
      numerics_semigroup(),    numerics_ode_linear(),
      rwa_boundary_analytic(), bloch_closed_vs_ode(),
      bloch_fd_sensitivity(),  bloch_sld_saturation(),
      bloch_ball(),            oracle_squeezed_vacuum(),
      oracle_master_equation(),
  };
}

}  // namespace msfq::validate
