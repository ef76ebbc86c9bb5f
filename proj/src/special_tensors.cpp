// SPDX-License-Identifier: MIT
#include "pk/special_tensors.hpp"

#include <cmath>

namespace pk {

Tensor4 quasi_conformal_at(const CurvatureValue& curv, const Eigen::MatrixXd& g,
                           double alpha, double beta, int n) {
  if (alpha == 0.0) throw EvalError("quasi-conformal tensor requires alpha != 0");
  const Eigen::MatrixXd& S = curv.ricci;
  const double trace_coeff = (curv.scalar / n) * (alpha / (n - 1) + 2.0 * beta);
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) =
              alpha * curv.riemann_low(i, j, k, l) +
              beta * (S(j, k) * g(i, l) - S(i, k) * g(j, l) + g(j, k) * S(i, l) -
                      g(i, k) * S(j, l)) -
              trace_coeff * (g(j, k) * g(i, l) - g(i, k) * g(j, l));
  return out;
}

Tensor4 pseudo_projective_at(const CurvatureValue& curv, const Eigen::MatrixXd& g,
                             double a, double b, int n) {
  if (a == 0.0 || b == 0.0) throw EvalError("pseudo-projective tensor requires a, b != 0");
  const Eigen::MatrixXd& S = curv.ricci;
  const double trace_coeff = (curv.scalar / n) * (a / (n - 1) + b);
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = a * curv.riemann_low(i, j, k, l) +
                            b * (S(j, k) * g(i, l) - S(i, k) * g(j, l)) -
                            trace_coeff * (g(j, k) * g(i, l) - g(i, k) * g(j, l));
  return out;
}

Tensor4 w2_at(const CurvatureValue& curv, const Eigen::MatrixXd& g, int n) {
  if (n <= 2) throw EvalError("W2 tensor requires dimension n > 2");
  const Eigen::MatrixXd& S = curv.ricci;
  const double inv = 1.0 / (n - 1);
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = curv.riemann_low(i, j, k, l) +
                            inv * (g(i, k) * S(j, l) - g(j, k) * S(i, l));
  return out;
}

double flatness_norm(const Tensor4& t) { return t.max_abs(); }

double flatness_threshold(const Eigen::MatrixXd& g, double scalar_curvature, double tol) {
  const double maxg = g.cwiseAbs().maxCoeff();
  return tol * maxg * maxg * std::max(1.0, std::abs(scalar_curvature));
}

}  // namespace pk
