// SPDX-License-Identifier: MIT
#pragma once

#include "pk/geometry.hpp"
#include "pk/status.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pk {

// Soliton and flow residual operators. All residual matrices are evaluated
// on coordinate-basis pairs; norm is the max absolute entry.
struct SolitonResidual {
  Eigen::MatrixXd matrix;
  double norm = 0.0;
  // Contraction of the defining equation with g^-1/2: for the conformal
  // Einstein equation this is div V + r + [lambda - r/2 + (p + 2/n)/2] n,
  // and it equals (1/2) g^ij matrix_ij identically.
  double trace_identity_value = 0.0;
};

// Lie_V g + 2S + [2 lambda - r + (p + 2/n)] g
SolitonResidual conformal_einstein_residual(const MetricJetValue& mj,
                                            const CurvatureValue& curv,
                                            const Eigen::MatrixXd& lie, double div_v,
                                            double lambda, double p);
SolitonResidual conformal_einstein_residual(const FieldBundle& bundle, const Point& x);

// Lie_V g + 2S + (2 lambda - r) g
SolitonResidual einstein_soliton_residual(const MetricJetValue& mj, const CurvatureValue& curv,
                                          const Eigen::MatrixXd& lie, double div_v,
                                          double lambda);
SolitonResidual einstein_soliton_residual(const FieldBundle& bundle, const Point& x);

// Lie_V g + 2S - [2 lambda - (p + 2/n)] g
SolitonResidual conformal_ricci_residual(const MetricJetValue& mj, const CurvatureValue& curv,
                                         const Eigen::MatrixXd& lie, double div_v,
                                         double lambda, double p);
SolitonResidual conformal_ricci_residual(const FieldBundle& bundle, const Point& x);

// Instantaneous flow velocity dg/dt = -2 (S - (r/2) g).
Eigen::MatrixXd einstein_flow_velocity(const CurvatureValue& curv, const Eigen::MatrixXd& g);

// div V + r + [lambda - r/2 + (p + 2/n)/2] n
double trace_identity(const FieldBundle& bundle, const Point& x);

// Scalar curvature forced by a solenoidal conformal Einstein soliton:
// 2 lambda n/(n-2) + n (p + 2/n)/(n-2), n > 2.
double solenoidal_scalar_curvature(double lambda, double p, int n);

// lambda + (p + 2/n)/2, the flat-case solenoidality constant.
double flat_case_constant(double lambda, double p, int n);

struct TheoremReport {
  CheckStatus status = CheckStatus::Error;
  std::string message;
  double formula_value = 0.0;     // r formula (3.1) or the flat-case constant
  bool forward_holds = true;      // div V small  =>  formula side small
  bool backward_holds = true;     // formula side small  =>  div V small
  double max_residual = 0.0;      // 0 where the biconditional agrees
  int points_checked = 0;
  int worst_index = -1;
};

// Solenoidal iff r equals the formula value, gated on the conformal
// Einstein equation holding at every sampled point.
TheoremReport theorem_3_1_verdict(const FieldBundle& bundle, const std::vector<Point>& points,
                                  double tol);

enum class TensorFamily { QuasiConformal, PseudoProjective, W2 };

// Flat-case chain for the selected tensor family: requires the tensor to be
// flat and the soliton equation to hold, checks S ~ 0 and r ~ 0, then the
// biconditional div V = 0 iff lambda + (p + 2/n)/2 = 0. Parameter gates:
// quasi-conformal needs alpha + 2 beta != 0, pseudo-projective a + b != 0.
TheoremReport flat_case_verdict(const FieldBundle& bundle, const std::vector<Point>& points,
                                TensorFamily family, double tol);

enum class SolitonClass { Shrinking, Steady, Expanding };

// Strict sign classification of lambda; no tolerance.
SolitonClass classify_soliton(double lambda);
std::string to_string(SolitonClass c);

}  // namespace pk
