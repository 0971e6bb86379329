#include "msfq/numerics.hpp"

#include <cmath>

namespace msfq::numerics {

Eigen::MatrixXd expm_small(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("expm_small: matrix must be square");
  if (m.rows() > 8)
    throw std::invalid_argument("expm_small: intended for n <= 8");
  if (!m.allFinite())
    throw NumericalError("expm_small: non-finite entries");

  const Eigen::Index n = m.rows();
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm

  int squarings = 0;
  if (norm > 0.5)
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd a = m * std::ldexp(1.0, -squarings);

  // Degree-(6,6) diagonal Pade; accurate to well below 1e-16 for |a| <= 0.5.
  static constexpr double c[7] = {1.0,         1.0 / 2.0,     5.0 / 44.0,
                                  1.0 / 66.0,  1.0 / 792.0,   1.0 / 15840.0,
                                  1.0 / 665280.0};
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd even = c[0] * id + c[2] * a2 + c[4] * a4 + c[6] * a6;
  const Eigen::MatrixXd odd = a * (c[1] * id + c[3] * a2 + c[5] * a4);

  Eigen::MatrixXd result = (even - odd).partialPivLu().solve(even + odd);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 double tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root: need lo < hi");
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("find_root: no sign change on bracket");
  // Bisection halves the bracket once per iteration; 200 iterations reach
  // machine resolution for any double-width bracket.
  for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& fn,
                              double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: need lo < hi");
  constexpr double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int i = 0; i < 300 && (hi - lo) > tol; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = fn(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, fn(x)};
}

}  // namespace msfq::numerics
