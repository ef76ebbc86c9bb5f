// SPDX-License-Identifier: MIT
#pragma once

#include "pk/geometry.hpp"

#include <Eigen/Dense>

namespace pk {

// The three modified curvature tensors, materialized in lowered (0,4) form
// on coordinate-basis arguments with slot order (X,Y,Z,W) -> (i,j,k,l).
// All three are antisymmetric in the first argument pair.

// C = alpha R + beta [S(Y,Z) g(X,W) - S(X,Z) g(Y,W) + g(Y,Z) S(X,W)
//     - g(X,Z) S(Y,W)] - (r/n)(alpha/(n-1) + 2 beta)[g(Y,Z) g(X,W)
//     - g(X,Z) g(Y,W)].
// With alpha = 1, beta = -1/(n-2) this is the conformal curvature tensor.
Tensor4 quasi_conformal_at(const CurvatureValue& curv, const Eigen::MatrixXd& g,
                           double alpha, double beta, int n);

// P = a R + b [S(Y,Z) g(X,W) - S(X,Z) g(Y,W)]
//     - (r/n)(a/(n-1) + b)[g(Y,Z) g(X,W) - g(X,Z) g(Y,W)], a, b != 0.
Tensor4 pseudo_projective_at(const CurvatureValue& curv, const Eigen::MatrixXd& g,
                             double a, double b, int n);

// W2 = R + 1/(n-1) [g(X,Z) S(Y,W) - g(Y,Z) S(X,W)], n > 2.
Tensor4 w2_at(const CurvatureValue& curv, const Eigen::MatrixXd& g, int n);

// Max absolute component; a tensor counts as flat when this stays below
// flatness_threshold.
double flatness_norm(const Tensor4& t);

// tol scaled by max|g|^2 * max(1, |r|), so rescaling the metric rescales
// tensor and threshold together.
double flatness_threshold(const Eigen::MatrixXd& g, double scalar_curvature, double tol);

}  // namespace pk
