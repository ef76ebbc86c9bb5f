// SPDX-License-Identifier: MIT
#pragma once

#include "pk/expr.hpp"
#include "pk/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pk {

using Point = std::vector<double>;

// Chart data for a single coordinate patch: dimension n = 2m, metric g,
// para-structure F (mixed tensor F^i_j), optional vector field V, soliton
// constants (lambda, p) and tensor-family constants (alpha, beta, a, b).
//
// The metric is either a symmetric array of expressions (entries (i,j) and
// (j,i) share one tree) or a potential phi, in which case the cross block
// g_{x_i y_j} = d2 phi / dx_i dy_j is realized by nested jet evaluation and
// the x-x and y-y blocks vanish. The first m coordinates form the x block,
// the last m the y block.
struct FieldBundle {
  enum class MetricKind { Explicit, Potential };

  int n = 0;
  std::vector<std::string> coordinates;
  MetricKind metric_kind = MetricKind::Explicit;
  std::vector<ExprPtr> g;  // n*n, row-major; unused when Potential
  ExprPtr potential;       // used when Potential
  std::vector<ExprPtr> F;  // n*n mixed F^i_j; empty when no structure given
  std::vector<ExprPtr> V;  // n components; empty when no vector field given
  double lambda = 0.0;
  double p = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  double a = 1.0;
  double b = 1.0;

  int m() const { return n / 2; }
  bool has_structure() const { return !F.empty(); }
  bool has_vector_field() const { return !V.empty(); }
};

struct SamplePlan {
  enum class Kind { List, RandomBox };
  Kind kind = Kind::RandomBox;
  std::vector<Point> points;  // List
  int count = 20;
  std::uint64_t seed = 42;
  std::vector<std::pair<double, double>> box;  // per-coordinate [lo, hi)
};

struct LoadedSpec {
  FieldBundle bundle;
  SamplePlan plan;
};

// Parses the sectioned key = value chart format (see README). Throws
// SpecError with a line reference on malformed or invalid input.
LoadedSpec load_spec(std::string_view text);

// Canonical flat model: coordinates x1..xm, y1..ym, g(dx_i, dy_j) = delta_ij,
// F = +1 on the x block and -1 on the y block. All para-Kahler axioms hold
// exactly and every curvature object vanishes.
FieldBundle builtin_flat(int m);

// Potential model: g_{x_i y_j} = d2 phi / dx_i dy_j with F as in the flat
// model. Passes the axiom checks wherever g is nondegenerate.
FieldBundle builtin_potential(int m, ExprPtr phi);

// Deterministic sampling: List returns points verbatim; RandomBox draws
// coordinates in index order from one SplitMix64 stream seeded by the plan.
std::vector<Point> sample_points(const SamplePlan& plan, int n);

// Pointwise metric with first and second derivatives.
//   g(i,j)        metric components
//   dg(k,i,j)     d_k g_ij
//   ddg(k,l,i,j)  d_k d_l g_ij
struct MetricJetValue {
  int n = 0;
  Eigen::MatrixXd g;
  Tensor3 dg;
  Tensor4 ddg;
};

MetricJetValue metric_at(const FieldBundle& bundle, const Point& x);

// Pointwise structure tensor with first derivatives: dF(k,i,j) = d_k F^i_j.
struct StructureJetValue {
  Eigen::MatrixXd F;
  Tensor3 dF;
};

StructureJetValue structure_at(const FieldBundle& bundle, const Point& x);

// Pointwise vector field with first derivatives: dV(i,k) = d_i V^k.
struct VectorFieldJetValue {
  Eigen::VectorXd V;
  Eigen::MatrixXd dV;
};

VectorFieldJetValue vector_field_at(const FieldBundle& bundle, const Point& x);

// |det g| below 1e-12 * (max |g_ij|)^n flags the point as degenerate.
double degeneracy_threshold(const Eigen::MatrixXd& g);
bool is_degenerate(const Eigen::MatrixXd& g);

// Symmetric inverse of a pointwise metric; throws EvalError naming det g
// when the metric is degenerate there.
Eigen::MatrixXd invert_metric(const Eigen::MatrixXd& g);
Eigen::MatrixXd inverse_metric_at(const FieldBundle& bundle, const Point& x);

// Counts of positive and negative eigenvalues of g(x); throws EvalError when
// an eigenvalue sits below the degeneracy threshold.
std::pair<int, int> signature_of(const Eigen::MatrixXd& g);
std::pair<int, int> signature_at(const FieldBundle& bundle, const Point& x);

}  // namespace pk
