#include "msfq/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "msfq/bloch.hpp"
#include "msfq/numerics.hpp"

namespace msfq::oracle {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(K) through the eigendecomposition of the Hermitian matrix iK
// (anti-Hermitian K) or K itself (Hermitian K).
Eigen::MatrixXcd expm_via_eigens(const Eigen::MatrixXcd& k,
                                 bool anti_hermitian) {
  if (anti_hermitian) {
    const Eigen::MatrixXcd h = Complex(0.0, 1.0) * k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (Complex(0.0, -1.0) * es.eigenvalues().cast<Complex>().array())
            .exp();
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  const Eigen::VectorXcd scales =
      es.eigenvalues().array().exp().cast<Complex>();
  return es.eigenvectors() * scales.asDiagonal() * es.eigenvectors().adjoint();
}

// Residual of S a = (cosh r a + e^{i theta} sinh r a') S on the squeezed
// images of low Fock states. Columns are restricted to states whose
// squeezed support, which grows like k cosh(2r), still fits the truncation;
// higher columns of the truncated S are dominated by boundary artifacts and
// would swamp the check.
// Squeeze operator in the convention that satisfies the Bogoliubov relation
// (anti-Hermitian generator; the relative-sign question is settled by
// build_squeeze, which probes the stated convention first).
Eigen::MatrixXcd squeeze_matrix(const FockOperators& f, double r,
                                double theta) {
  const Complex xi = std::polar(r, theta);
  const Eigen::MatrixXcd gen =
      0.5 * (std::conj(xi) * (f.a * f.a) - xi * (f.a_dag * f.a_dag));
  return expm_via_eigens(gen, true);
}

double bogoliubov_residual(const FockOperators& f, const Eigen::MatrixXcd& s,
                           double r, double theta) {
  const Eigen::MatrixXcd lhs = s * f.a;
  const Eigen::MatrixXcd rhs =
      (std::cosh(r) * f.a + std::polar(std::sinh(r), theta) * f.a_dag) * s;
  const Eigen::Index k = std::max<Eigen::Index>(
      3, static_cast<Eigen::Index>(
             static_cast<double>(f.dim) / (6.0 * std::cosh(2.0 * r))));
  const double scale = std::max(1.0, rhs.leftCols(k).norm());
  const double res = (lhs.leftCols(k) - rhs.leftCols(k)).norm() / scale;
  return std::isfinite(res) ? res : std::numeric_limits<double>::infinity();
}

}  // namespace

FockOperators build_operators(Eigen::Index dim) {
  if (dim < 2)
    throw std::invalid_argument("build_operators: dim must be >= 2");
  FockOperators f;
  f.dim = dim;
  f.a = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n)
    f.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  f.a_dag = f.a.adjoint();
  f.n_op = f.a_dag * f.a;
  return f;
}

Eigen::Index suggested_dim(double r) {
  const double s = std::sinh(r);
  return std::max<Eigen::Index>(
      80, 20 + static_cast<Eigen::Index>(std::ceil(20.0 * s * s)));
}

Eigen::Index squeeze_check_dim(double r) {
  const double s = std::sinh(r);
  return std::max<Eigen::Index>(
      suggested_dim(r),
      80 + static_cast<Eigen::Index>(std::ceil(130.0 * s * s)));
}

void build_squeeze(FockOperators& f, double r, double theta) {
  if (r < 0.0) throw std::domain_error("build_squeeze: r must be >= 0");
  const double s = std::sinh(r);
  if (f.dim < 20 + static_cast<Eigen::Index>(std::ceil(20.0 * s * s)))
    throw std::invalid_argument(
        "build_squeeze: truncation below the 20 + 20 sinh^2(r) heuristic");

  const Complex xi = std::polar(r, theta);
  const Eigen::MatrixXcd a2 = f.a * f.a;
  const Eigen::MatrixXcd adag2 = f.a_dag * f.a_dag;

  // Stated convention first: exp((xi* a^2 + xi a'^2)/2). Its generator is
  // Hermitian, so the Bogoliubov relation cannot hold and the relative sign
  // gets flipped to the anti-Hermitian (xi* a^2 - xi a'^2)/2.
  const Eigen::MatrixXcd gen_stated = 0.5 * (std::conj(xi) * a2 + xi * adag2);
  const Eigen::MatrixXcd s_stated = expm_via_eigens(gen_stated, false);
  double res = bogoliubov_residual(f, s_stated, r, theta);
  if (res <= 1e-6) {
    f.s = s_stated;
    f.squeeze_sign_flipped = false;
    f.bogoliubov_residual = res;
    return;
  }

  const Eigen::MatrixXcd s_flipped = squeeze_matrix(f, r, theta);
  res = bogoliubov_residual(f, s_flipped, r, theta);
  if (res > 1e-4)
    throw NumericalError(
        "build_squeeze: Bogoliubov residual above 1e-4, truncation too small");
  f.s = s_flipped;
  f.squeeze_sign_flipped = true;
  f.bogoliubov_residual = res;
}

SpectrumReport spectrum_check(double delta, double pump_amp, double duffing,
                              double r, Eigen::Index dim, double theta) {
  const FockOperators f = build_operators(dim);
  const Eigen::MatrixXcd quartic = f.a_dag * f.a_dag * f.a * f.a;
  const Eigen::MatrixXcd h =
      delta * f.n_op - duffing * quartic +
      0.5 * pump_amp *
          (std::polar(1.0, -theta) * f.a * f.a +
           std::polar(1.0, theta) * f.a_dag * f.a_dag);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectrum_check: eigensolver failed");
  const Eigen::VectorXd evals = es.eigenvalues();

  // The softening quartic makes the squeezed ladder metastable: exact
  // eigenstates above the handful of qubit levels dive below them and
  // hybridize. The ladder energies are therefore extracted as
  // overlap-weighted centroids against the squeezed-Fock targets S|k>.
  const Eigen::MatrixXcd s = squeeze_matrix(f, r, theta);
  const Eigen::Index top_start = dim - dim / 5;  // top 20% of levels

  SpectrumReport rep;
  double energy[3];
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXcd target = s.col(k);
    rep.leak =
        std::max(rep.leak, target.tail(dim - top_start).squaredNorm());
    double e_acc = 0.0;
    double w_acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double w =
          std::norm(es.eigenvectors().col(i).dot(target));
      if (w < 0.02) continue;
      e_acc += w * evals(i);
      w_acc += w;
    }
    if (w_acc < 0.9)
      throw NumericalError(
          "spectrum_check: squeezed-ladder state smeared across the "
          "spectrum, identification ambiguous");
    energy[k] = e_acc / w_acc;
  }
  if (rep.leak > 1e-6)
    throw NumericalError(
        "spectrum_check: squeezed-ladder states leak into the top 20% of "
        "levels, dim too small");

  rep.gap01 = energy[1] - energy[0];
  rep.gap12 = energy[2] - energy[1];
  rep.model_gap01 = params::qubit_frequency(delta, pump_amp, duffing, r);
  rep.model_gap12 = rep.model_gap01 - 2.0 * params::anharmonicity(duffing, r);
  rep.rel_err01 =
      std::abs(rep.gap01 - rep.model_gap01) / std::abs(rep.model_gap01);
  rep.rel_err12 =
      std::abs(rep.gap12 - rep.model_gap12) / std::abs(rep.model_gap12);
  return rep;
}

MasterEquationRun b_space_master_equation(double omega_b, double u_b,
                                          double g_energy, double gamma0,
                                          double r, Eigen::Index levels,
                                          const std::vector<double>& t_grid,
                                          Eigen::Index initial_level) {
  if (levels < 2)
    throw std::invalid_argument("b_space_master_equation: levels must be >= 2");
  if (initial_level < 0 || initial_level >= levels)
    throw std::invalid_argument("b_space_master_equation: bad initial level");
  if (gamma0 < 0.0)
    throw std::domain_error("b_space_master_equation: gamma0 must be >= 0");

  const FockOperators f = build_operators(levels);
  const Eigen::MatrixXcd h = omega_b * f.n_op -
                             u_b * (f.a_dag * f.a_dag * f.a * f.a) +
                             (g_energy / kHbar) * (f.a + f.a_dag);
  const Eigen::MatrixXcd jump = std::cosh(r) * f.a + std::sinh(r) * f.a_dag;
  const Eigen::MatrixXcd jj = jump.adjoint() * jump;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(levels, levels);

  const Complex im(0.0, 1.0);
  const Eigen::MatrixXcd lsuper =
      -im * (kron(id, h) - kron(h.transpose(), id)) +
      0.5 * gamma0 *
          (2.0 * kron(jump.conjugate(), jump) - kron(id, jj) -
           kron(jj.transpose(), id));

  Eigen::VectorXcd rho_vec = Eigen::VectorXcd::Zero(levels * levels);
  rho_vec(initial_level * levels + initial_level) = 1.0;

  auto flow = [&lsuper](double, const Eigen::VectorXcd& y) {
    return (lsuper * y).eval();
  };
  const numerics::ToleranceSet tol{1e-10, 1e-13, 200};

  MasterEquationRun run;
  run.times = t_grid;
  run.min_eigenvalue = 0.0;
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (t < t_prev)
      throw std::invalid_argument(
          "b_space_master_equation: t_grid must be sorted and >= 0");
    if (t > t_prev)
      rho_vec = numerics::ode_integrate(flow, rho_vec, t_prev, t, tol);
    t_prev = t;

    Eigen::MatrixXcd rho =
        Eigen::Map<const Eigen::MatrixXcd>(rho_vec.data(), levels, levels);
    run.trace_dev_max =
        std::max(run.trace_dev_max, std::abs(rho.trace() - Complex(1.0)));
    run.herm_dev_max = std::max(
        run.herm_dev_max,
        (rho - rho.adjoint()).cwiseAbs().maxCoeff());

    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    run.min_eigenvalue =
        std::min(run.min_eigenvalue, es.eigenvalues().minCoeff());

    Eigen::VectorXd pops = rho.diagonal().real();
    run.populations.push_back(pops);
    run.leakage.push_back(pops.tail(levels - 2).sum());
    // sigma_z = |1><1| - |0><0| convention: v = (2 Re rho10, 2 Im rho10, p1 - p0)
    const Complex rho10 = rho(1, 0);
    run.bloch.emplace_back(2.0 * rho10.real(), 2.0 * rho10.imag(),
                           pops(1) - pops(0));
  }
  if (run.trace_dev_max > 1e-8)
    throw NumericalError(
        "b_space_master_equation: trace drifted beyond 1e-8, integrator "
        "failure");
  return run;
}

ProjectionReport projection_consistency(const params::DerivedParams& p,
                                        Eigen::Index levels,
                                        const std::vector<double>& t_grid) {
  const double g_energy = 0.5 * kHbar * p.omega_g;
  const MasterEquationRun run = b_space_master_equation(
      p.omega_b, p.u_b, g_energy, p.gamma0, p.r, levels, t_grid, 0);
  const MasterEquationRun undriven = b_space_master_equation(
      p.omega_b, p.u_b, 0.0, p.gamma0, p.r, levels, t_grid, 0);

  const bloch::DriftSystem d =
      bloch::drift_matrix(p.omega_b, p.omega_g, p.gamma0, p.r);
  const std::vector<bloch::BlochState> qubit = bloch::time_series(d, t_grid);

  ProjectionReport rep;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    rep.max_bloch_dev = std::max(
        rep.max_bloch_dev,
        (run.bloch[i] - qubit[i].v).cwiseAbs().maxCoeff());
    rep.max_leakage = std::max(rep.max_leakage, run.leakage[i]);
    rep.drive_leakage = std::max(
        rep.drive_leakage, run.leakage[i] - undriven.leakage[i]);
  }
  rep.pass = rep.max_bloch_dev <= std::max(1e-3, 10.0 * rep.max_leakage) &&
             rep.drive_leakage <= 2e-3;
  return rep;
}

}  // namespace msfq::oracle
