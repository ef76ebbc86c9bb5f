// SPDX-License-Identifier: MIT
#pragma once

#include "pk/geometry.hpp"

#include <Eigen/Dense>

namespace pk {

// Residuals of the three para-Kahler axioms at one point, computed on
// coordinate-basis arguments:
//   F^2 = I, g(FX, FY) = -g(X, Y), nabla F = 0.
struct AxiomReport {
  double residual_F2 = 0.0;           // max |F^2 - I|
  double residual_metric_skew = 0.0;  // max |F^T g F + g|
  double residual_nablaF = 0.0;       // max |(nabla F)|
  double metric_scale = 0.0;          // max |g_ij| at the point

  double max_residual() const;
  // Absolute tolerance on the residual max-norms, scaled by max|g|.
  bool pass(double tol = 1e-8) const;
};

AxiomReport axiom_residuals(const MetricJetValue& mj, const StructureJetValue& st,
                            const ChristoffelValue& gamma);
AxiomReport axiom_residuals(const FieldBundle& bundle, const Point& x);

// Residuals of the four curvature identities, all over coordinate-basis
// arguments:
//   R(FX,FY)Z + R(X,Y)Z, R(FX,Y)Z + R(X,FY)Z,
//   S(FX,Y) + S(FY,X),   S(FX,FY) + S(X,Y).
struct IdentityResiduals {
  double curvature_ff = 0.0;
  double curvature_mixed = 0.0;
  double ricci_skew = 0.0;
  double ricci_ff = 0.0;

  double max_residual() const;
};

IdentityResiduals curvature_identity_residuals(const CurvatureValue& curv,
                                               const StructureJetValue& st);
IdentityResiduals curvature_identity_residuals(const FieldBundle& bundle, const Point& x);

// Ricci tensor recovered through the frame contraction
// 1/2 sum_i eps_i R(e_i, F e_i, X, F Y), compared against the trace Ricci.
// fitted_c is the least-squares scalar with frame_ricci ~ c * trace Ricci;
// when the Ricci tensor vanishes the fit is ill-posed and c defaults to 1.
struct FrameRicciReport {
  Eigen::MatrixXd frame_ricci;
  double fitted_c = 1.0;
  double max_deviation = 0.0;  // max |frame_ricci - c S|
  bool fit_valid = false;      // false when S is numerically zero
};

FrameRicciReport ricci_via_frame(const CurvatureValue& curv, const StructureJetValue& st,
                                 const MetricJetValue& mj);
FrameRicciReport ricci_via_frame(const FieldBundle& bundle, const Point& x);

}  // namespace pk
