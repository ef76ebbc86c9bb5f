// SPDX-License-Identifier: MIT
#include "pk/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pk {

ChristoffelValue christoffel_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv) {
  const int n = mj.n;
  ChristoffelValue out;
  out.n = n;
  out.gamma = Tensor3(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (mj.dg(i, j, l) + mj.dg(j, i, l) - mj.dg(l, i, j));
        out.gamma(k, i, j) = 0.5 * sum;
        out.gamma(k, j, i) = 0.5 * sum;
      }
  return out;
}

Tensor4 christoffel_derivative_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv) {
  const int n = mj.n;
  // d_i g^lm = -g^la (d_i g_ab) g^bm
  Tensor3 dginv(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int mm = 0; mm < n; ++mm) {
        double sum = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) sum += ginv(l, p) * mj.dg(i, p, q) * ginv(q, mm);
        dginv(i, l, mm) = -sum;
      }

  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) {
          double sum = 0.0;
          for (int mm = 0; mm < n; ++mm) {
            sum += dginv(i, l, mm) * (mj.dg(j, k, mm) + mj.dg(k, j, mm) - mj.dg(mm, j, k));
            sum += ginv(l, mm) *
                   (mj.ddg(i, j, k, mm) + mj.ddg(i, k, j, mm) - mj.ddg(i, mm, j, k));
          }
          out(i, l, j, k) = 0.5 * sum;
          out(i, l, k, j) = 0.5 * sum;
        }
  return out;
}

CurvatureValue riemann_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv,
                          const ChristoffelValue& gamma, const Tensor4& dgamma) {
  (void)ginv;
  const int n = mj.n;
  CurvatureValue curv;
  curv.n = n;
  curv.riemann_up = Tensor4(n);
  curv.riemann_low = Tensor4(n);
  curv.ricci = Eigen::MatrixXd::Zero(n, n);
  curv.q_op = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double sum = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int mm = 0; mm < n; ++mm)
            sum += gamma.gamma(l, i, mm) * gamma.gamma(mm, j, k) -
                   gamma.gamma(l, j, mm) * gamma.gamma(mm, i, k);
          curv.riemann_up(l, i, j, k) = sum;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double sum = 0.0;
          for (int mm = 0; mm < n; ++mm) sum += mj.g(l, mm) * curv.riemann_up(mm, i, j, k);
          curv.riemann_low(i, j, k, l) = sum;
        }
  return curv;
}

Eigen::MatrixXd ricci_at(const CurvatureValue& curv) {
  const int n = curv.n;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += curv.riemann_up(i, i, j, k);
      S(j, k) = sum;
    }
  return S;
}

double scalar_curvature_at(const CurvatureValue& curv, const Eigen::MatrixXd& ginv) {
  return (ginv.array() * curv.ricci.array()).sum();
}

Eigen::MatrixXd ricci_operator_at(const CurvatureValue& curv, const Eigen::MatrixXd& ginv) {
  return ginv * curv.ricci;
}

CurvatureValue full_curvature_at(const MetricJetValue& mj, const Eigen::MatrixXd& ginv) {
  const ChristoffelValue gamma = christoffel_at(mj, ginv);
  const Tensor4 dgamma = christoffel_derivative_at(mj, ginv);
  CurvatureValue curv = riemann_at(mj, ginv, gamma, dgamma);
  curv.ricci = ricci_at(curv);
  curv.scalar = scalar_curvature_at(curv, ginv);
  curv.q_op = ricci_operator_at(curv, ginv);
  return curv;
}

Tensor3 covariant_derivative_structure(const StructureJetValue& st,
                                       const ChristoffelValue& gamma) {
  const int n = gamma.n;
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sum = st.dF(i, j, k);
        for (int mm = 0; mm < n; ++mm)
          sum += gamma.gamma(j, i, mm) * st.F(mm, k) - gamma.gamma(mm, i, k) * st.F(j, mm);
        out(i, j, k) = sum;
      }
  return out;
}

Eigen::MatrixXd lie_derivative_metric_at(const MetricJetValue& mj,
                                         const VectorFieldJetValue& vf) {
  const int n = mj.n;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k)
        sum += vf.V(k) * mj.dg(k, i, j) + mj.g(k, j) * vf.dV(i, k) + mj.g(i, k) * vf.dV(j, k);
      out(i, j) = sum;
    }
  return out;
}

double divergence_at(const ChristoffelValue& gamma, const VectorFieldJetValue& vf) {
  const int n = gamma.n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += vf.dV(i, i);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) sum += gamma.gamma(i, i, k) * vf.V(k);
  return sum;
}

FrameValue pseudo_orthonormal_frame(const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());

  struct Pair {
    double mu;
    Eigen::VectorXd v;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = es.eigenvectors().col(i);
    for (int k = 0; k < n; ++k) {
      if (std::abs(v(k)) > 1e-12) {
        if (v(k) < 0) v = -v;
        break;
      }
    }
    pairs.push_back({es.eigenvalues()(i), std::move(v)});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.mu != b.mu) return a.mu > b.mu;
    // lexicographically greatest vector first
    for (int k = 0; k < a.v.size(); ++k)
      if (a.v(k) != b.v(k)) return a.v(k) > b.v(k);
    return false;
  });

  FrameValue frame;
  frame.vectors = Eigen::MatrixXd::Zero(n, n);
  frame.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    const double mu = pairs[i].mu;
    if (std::abs(mu) < 1e-12 * scale) {
      std::ostringstream msg;
      msg << "degenerate metric: eigenvalue " << mu << " too small for frame construction";
      throw EvalError(msg.str());
    }
    frame.vectors.col(i) = pairs[i].v / std::sqrt(std::abs(mu));
    frame.signs[i] = mu > 0 ? 1 : -1;
  }
  return frame;
}

Eigen::MatrixXd f_contraction(const Tensor4& t_low, const Eigen::MatrixXd& F,
                              const FrameValue& frame) {
  const int n = t_low.n;
  // A^pq = sum_i eps_i e_i^p (F e_i)^q
  Eigen::MatrixXd fe = F * frame.vectors;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    A += frame.signs[i] * frame.vectors.col(i) * fe.col(i).transpose();

  // M(a,b) = A^pq T(p,q,a,s) F^s_b
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(n, n);  // (a,s)
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < n; ++s) {
      double sum = 0.0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) sum += A(p, q) * t_low(p, q, a, s);
      partial(a, s) = sum;
    }
  return partial * F;
}

PointEvaluation evaluate_point(const FieldBundle& bundle, const Point& x) {
  PointEvaluation pe;
  pe.x = x;
  try {
    pe.mj = metric_at(bundle, x);
    pe.detg = pe.mj.g.determinant();
    pe.degenerate = is_degenerate(pe.mj.g);
    if (!pe.degenerate) {
      pe.ginv = invert_metric(pe.mj.g);
      pe.gamma = christoffel_at(pe.mj, pe.ginv);
      pe.dgamma = christoffel_derivative_at(pe.mj, pe.ginv);
      pe.curv = full_curvature_at(pe.mj, pe.ginv);
    }
    pe.metric_ok = true;
  } catch (const EvalError& err) {
    pe.metric_error = err.what();
  }

  if (bundle.has_structure()) {
    try {
      pe.st = structure_at(bundle, x);
      pe.structure_ok = true;
    } catch (const EvalError& err) {
      pe.structure_error = err.what();
    }
  }

  if (bundle.has_vector_field()) {
    try {
      pe.vf = vector_field_at(bundle, x);
      pe.vector_ok = true;
    } catch (const EvalError& err) {
      pe.vector_error = err.what();
    }
  }
  return pe;
}

}  // namespace pk
