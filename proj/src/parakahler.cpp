// SPDX-License-Identifier: MIT
#include "pk/parakahler.hpp"

#include <algorithm>
#include <cmath>

namespace pk {

double AxiomReport::max_residual() const {
  return std::max({residual_F2, residual_metric_skew, residual_nablaF});
}

bool AxiomReport::pass(double tol) const {
  return max_residual() <= tol * std::max(1.0, metric_scale);
}

AxiomReport axiom_residuals(const MetricJetValue& mj, const StructureJetValue& st,
                            const ChristoffelValue& gamma) {
  const int n = mj.n;
  AxiomReport report;
  report.metric_scale = mj.g.cwiseAbs().maxCoeff();

  const Eigen::MatrixXd f2 =
      st.F * st.F - Eigen::MatrixXd::Identity(n, n);
  report.residual_F2 = f2.cwiseAbs().maxCoeff();

  const Eigen::MatrixXd skew = st.F.transpose() * mj.g * st.F + mj.g;
  report.residual_metric_skew = skew.cwiseAbs().maxCoeff();

  report.residual_nablaF = covariant_derivative_structure(st, gamma).max_abs();
  return report;
}

AxiomReport axiom_residuals(const FieldBundle& bundle, const Point& x) {
  const MetricJetValue mj = metric_at(bundle, x);
  const Eigen::MatrixXd ginv = invert_metric(mj.g);
  const ChristoffelValue gamma = christoffel_at(mj, ginv);
  return axiom_residuals(mj, structure_at(bundle, x), gamma);
}

double IdentityResiduals::max_residual() const {
  return std::max({curvature_ff, curvature_mixed, ricci_skew, ricci_ff});
}

IdentityResiduals curvature_identity_residuals(const CurvatureValue& curv,
                                               const StructureJetValue& st) {
  const int n = curv.n;
  const Eigen::MatrixXd& F = st.F;
  IdentityResiduals out;

  // R(FX,FY)Z + R(X,Y)Z and R(FX,Y)Z + R(X,FY)Z
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double ff = curv.riemann_up(l, i, j, k);
          double mixed = 0.0;
          for (int p = 0; p < n; ++p) {
            mixed += F(p, i) * curv.riemann_up(l, p, j, k) +
                     F(p, j) * curv.riemann_up(l, i, p, k);
            for (int q = 0; q < n; ++q)
              ff += F(p, i) * F(q, j) * curv.riemann_up(l, p, q, k);
          }
          out.curvature_ff = std::max(out.curvature_ff, std::abs(ff));
          out.curvature_mixed = std::max(out.curvature_mixed, std::abs(mixed));
        }

  // S(FX,Y) + S(FY,X) and S(FX,FY) + S(X,Y)
  const Eigen::MatrixXd fs = F.transpose() * curv.ricci;  // (i,j) = S(Fe_i, e_j)
  out.ricci_skew = (fs + fs.transpose()).cwiseAbs().maxCoeff();
  out.ricci_ff = (F.transpose() * curv.ricci * F + curv.ricci).cwiseAbs().maxCoeff();
  return out;
}

IdentityResiduals curvature_identity_residuals(const FieldBundle& bundle, const Point& x) {
  const MetricJetValue mj = metric_at(bundle, x);
  const Eigen::MatrixXd ginv = invert_metric(mj.g);
  return curvature_identity_residuals(full_curvature_at(mj, ginv), structure_at(bundle, x));
}

FrameRicciReport ricci_via_frame(const CurvatureValue& curv, const StructureJetValue& st,
                                 const MetricJetValue& mj) {
  FrameRicciReport report;
  const FrameValue frame = pseudo_orthonormal_frame(mj.g);
  report.frame_ricci = 0.5 * f_contraction(curv.riemann_low, st.F, frame);

  const double ss = (curv.ricci.array() * curv.ricci.array()).sum();
  if (ss > 1e-20) {
    report.fitted_c = (report.frame_ricci.array() * curv.ricci.array()).sum() / ss;
    report.fit_valid = true;
  }
  report.max_deviation =
      (report.frame_ricci - report.fitted_c * curv.ricci).cwiseAbs().maxCoeff();
  return report;
}

FrameRicciReport ricci_via_frame(const FieldBundle& bundle, const Point& x) {
  const MetricJetValue mj = metric_at(bundle, x);
  const Eigen::MatrixXd ginv = invert_metric(mj.g);
  return ricci_via_frame(full_curvature_at(mj, ginv), structure_at(bundle, x), mj);
}

}  // namespace pk
