// SPDX-License-Identifier: MIT
#pragma once

#include "pk/manifold.hpp"
#include "pk/tensor.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace pk {

// Levi-Civita connection and curvature machinery. Component conventions:
//   gamma(k,i,j)        Gamma^k_ij (symmetric in i,j)
//   dgamma(i,l,j,k)     d_i Gamma^l_jk
//   riemann_up(l,i,j,k) R^l_ijk with R(d_i, d_j) d_k = R^l_ijk d_l
//   riemann_low(i,j,k,l) = g_lm R^m_ijk
//   ricci(j,k)          S_jk = R^i_ijk
//   scalar              r = g^jk S_jk
//   q_op(i,j)           Q^i_j = g^ik S_kj

struct ChristoffelValue {
  int n = 0;
  Tensor3 gamma;
};

struct CurvatureValue {
  int n = 0;
  Tensor4 riemann_up;
  Tensor4 riemann_low;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  Eigen::MatrixXd q_op;
};

// Koszul formula Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelValue christoffel_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv);

// d Gamma assembled analytically from (dg, ddg); no extra differentiation.
Tensor4 christoffel_derivative_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv);

// R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
//         - Gamma^l_jm Gamma^m_ik; fills riemann_up and riemann_low only.
CurvatureValue riemann_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv,
                          const ChristoffelValue& gamma, const Tensor4& dgamma);

Eigen::MatrixXd ricci_at(const CurvatureValue& curv);
double scalar_curvature_at(const CurvatureValue& curv, const Eigen::MatrixXd& ginv);
Eigen::MatrixXd ricci_operator_at(const CurvatureValue& curv, const Eigen::MatrixXd& ginv);

// Convenience: chains the above and fills every CurvatureValue field.
CurvatureValue full_curvature_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv);

// (nabla_i F)^j_k = d_i F^j_k + Gamma^j_im F^m_k - Gamma^m_ik F^j_m,
// returned as (i,j,k).
Tensor3 covariant_derivative_structure(const StructureJetValue& st,
                                       const ChristoffelValue& gamma);

// (Lie_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k.
Eigen::MatrixXd lie_derivative_metric_at(const MetricJetValue& mj,
                                         const VectorFieldJetValue& vf);

// div V = d_i V^i + Gamma^i_ik V^k.
double divergence_at(const ChristoffelValue& gamma, const VectorFieldJetValue& vf);

// Pseudo-orthonormal frame from the symmetric eigendecomposition of g:
// columns e_i with g(e_i, e_j) = eps_i delta_ij. Ordering is deterministic:
// eigenvalues descending, ties broken by the lexicographically greatest
// eigenvector after making the first nonzero component positive.
struct FrameValue {
  Eigen::MatrixXd vectors;  // columns e_i
  std::vector<int> signs;   // eps_i in {+1, -1}
};

FrameValue pseudo_orthonormal_frame(const Eigen::MatrixXd& g);

// M(Z,W) = sum_i eps_i T(e_i, F e_i, Z, F W) on coordinate-basis arguments.
// Frame-independent: sum_i eps_i e_i e_i^T is the inverse metric.
Eigen::MatrixXd f_contraction(const Tensor4& t_low, const Eigen::MatrixXd& F,
                              const FrameValue& frame);

// Everything the per-point checks consume, with the three field groups
// evaluated independently so one failing field does not poison the rest.
struct PointEvaluation {
  Point x;

  bool metric_ok = false;
  std::string metric_error;
  bool degenerate = false;
  double detg = 0.0;
  MetricJetValue mj;
  Eigen::MatrixXd ginv;
  ChristoffelValue gamma;
  Tensor4 dgamma;
  CurvatureValue curv;

  bool structure_ok = false;
  std::string structure_error;
  std::optional<StructureJetValue> st;

  bool vector_ok = false;
  std::string vector_error;
  std::optional<VectorFieldJetValue> vf;

  bool usable() const { return metric_ok && !degenerate; }
};

PointEvaluation evaluate_point(const FieldBundle& bundle, const Point& x);

}  // namespace pk
