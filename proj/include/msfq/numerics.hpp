#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "msfq/errors.hpp"

namespace msfq::numerics {

struct ToleranceSet {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_iter = 200;
};

// exp(M) for small dense real matrices (n <= 8), degree-6 Pade with scaling
// and squaring. Throws on non-finite input.
Eigen::MatrixXd expm_small(const Eigen::MatrixXd& m);

// Bisection root of fn on [lo, hi]; fn(lo) and fn(hi) must bracket a sign
// change. tol is an absolute tolerance on the bracket width.
double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 double tol);

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

// Golden-section search on a unimodal bracket [lo, hi]; tol is absolute in x.
ScalarMinimum minimize_scalar(const std::function<double(double)>& fn,
                              double lo, double hi, double tol);

namespace detail {

template <class Vec>
double scaled_error_norm(const Vec& err, const Vec& y_old, const Vec& y_new,
                         const ToleranceSet& tol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        tol.abs_tol +
        tol.rel_tol * std::max(std::abs(y_old(i)), std::abs(y_new(i)));
    const double e = std::abs(err(i)) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace detail

// Adaptive Dormand-Prince 5(4) embedded pair. Integrates y' = f(t, y) from t0
// to t1 >= t0. Vec is an Eigen dense vector (real or complex). Throws
// NumericalError on step underflow.
template <class Vec, class Flow>
Vec ode_integrate(Flow&& f, Vec y, double t0, double t1,
                  const ToleranceSet& tol = {}) {
  // clang-format off
  constexpr double a21 = 1.0/5.0;
  constexpr double a31 = 3.0/40.0,       a32 = 9.0/40.0;
  constexpr double a41 = 44.0/45.0,      a42 = -56.0/15.0,      a43 = 32.0/9.0;
  constexpr double a51 = 19372.0/6561.0, a52 = -25360.0/2187.0, a53 = 64448.0/6561.0, a54 = -212.0/729.0;
  constexpr double a61 = 9017.0/3168.0,  a62 = -355.0/33.0,     a63 = 46732.0/5247.0, a64 = 49.0/176.0,    a65 = -5103.0/18656.0;
  constexpr double b1  = 35.0/384.0,     b3  = 500.0/1113.0,    b4  = 125.0/192.0,    b5  = -2187.0/6784.0, b6 = 11.0/84.0;
  // b - b_hat, the embedded 4th-order error weights
  constexpr double e1 = b1 - 5179.0/57600.0, e3 = b3 - 7571.0/16695.0, e4 = b4 - 393.0/640.0,
                   e5 = b5 + 92097.0/339200.0, e6 = b6 - 187.0/2100.0, e7 = -1.0/40.0;
  // clang-format on

  if (t1 == t0) return y;
  if (!(t1 > t0)) throw NumericalError("ode_integrate: t1 must be >= t0");

  const double span = t1 - t0;
  double t = t0;
  double h = span * 1e-3;
  Vec k1 = f(t, y);
  long steps = 0;

  while (t < t1) {
    h = std::min(h, t1 - t);
    const Vec y2 = y + h * (a21 * k1);
    const Vec k2 = f(t + h / 5.0, y2);
    const Vec y3 = y + h * (a31 * k1 + a32 * k2);
    const Vec k3 = f(t + 3.0 * h / 10.0, y3);
    const Vec y4 = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    const Vec k4 = f(t + 4.0 * h / 5.0, y4);
    const Vec y5 = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    const Vec k5 = f(t + 8.0 * h / 9.0, y5);
    const Vec y6 = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const Vec k6 = f(t + h, y6);
    const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + h, ynew);  // FSAL stage
    const Vec err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double norm = detail::scaled_error_norm(err, y, ynew, tol);
    if (norm <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(norm, 1e-30), -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-14 * span)
      throw NumericalError("ode_integrate: step size underflow");
    if (++steps > 50'000'000)
      throw NumericalError("ode_integrate: step budget exhausted");
  }
  return y;
}

}  // namespace msfq::numerics
