// SPDX-License-Identifier: MIT
#include "pk/soliton.hpp"

#include "pk/special_tensors.hpp"

#include <algorithm>
#include <cmath>

namespace pk {

namespace {

SolitonResidual assemble(const MetricJetValue& mj, const CurvatureValue& curv,
                         const Eigen::MatrixXd& lie, double div_v, double g_coeff,
                         double trace_coeff_n) {
  SolitonResidual out;
  out.matrix = lie + 2.0 * curv.ricci + g_coeff * mj.g;
  out.norm = out.matrix.cwiseAbs().maxCoeff();
  out.trace_identity_value = div_v + curv.scalar + trace_coeff_n;
  return out;
}

struct FieldsAt {
  MetricJetValue mj;
  Eigen::MatrixXd ginv;
  ChristoffelValue gamma;
  CurvatureValue curv;
  Eigen::MatrixXd lie;
  double div_v = 0.0;
};

FieldsAt fields_at(const FieldBundle& bundle, const Point& x) {
  if (!bundle.has_vector_field())
    throw EvalError("soliton residual requires a vector field V");
  FieldsAt f;
  f.mj = metric_at(bundle, x);
  f.ginv = invert_metric(f.mj.g);
  f.gamma = christoffel_at(f.mj, f.ginv);
  f.curv = full_curvature_at(f.mj, f.ginv);
  const VectorFieldJetValue vf = vector_field_at(bundle, x);
  f.lie = lie_derivative_metric_at(f.mj, vf);
  f.div_v = divergence_at(f.gamma, vf);
  return f;
}

}  // namespace

SolitonResidual conformal_einstein_residual(const MetricJetValue& mj,
                                            const CurvatureValue& curv,
                                            const Eigen::MatrixXd& lie, double div_v,
                                            double lambda, double p) {
  const int n = mj.n;
  const double coeff = 2.0 * lambda - curv.scalar + (p + 2.0 / n);
  const double trace = (lambda - curv.scalar / 2.0 + 0.5 * (p + 2.0 / n)) * n;
  return assemble(mj, curv, lie, div_v, coeff, trace);
}

SolitonResidual conformal_einstein_residual(const FieldBundle& bundle, const Point& x) {
  const FieldsAt f = fields_at(bundle, x);
  return conformal_einstein_residual(f.mj, f.curv, f.lie, f.div_v, bundle.lambda, bundle.p);
}

SolitonResidual einstein_soliton_residual(const MetricJetValue& mj, const CurvatureValue& curv,
                                          const Eigen::MatrixXd& lie, double div_v,
                                          double lambda) {
  const int n = mj.n;
  const double coeff = 2.0 * lambda - curv.scalar;
  const double trace = (lambda - curv.scalar / 2.0) * n;
  return assemble(mj, curv, lie, div_v, coeff, trace);
}

SolitonResidual einstein_soliton_residual(const FieldBundle& bundle, const Point& x) {
  const FieldsAt f = fields_at(bundle, x);
  return einstein_soliton_residual(f.mj, f.curv, f.lie, f.div_v, bundle.lambda);
}

SolitonResidual conformal_ricci_residual(const MetricJetValue& mj, const CurvatureValue& curv,
                                         const Eigen::MatrixXd& lie, double div_v,
                                         double lambda, double p) {
  const int n = mj.n;
  const double coeff = -(2.0 * lambda - (p + 2.0 / n));
  const double trace = -(lambda - 0.5 * (p + 2.0 / n)) * n;
  return assemble(mj, curv, lie, div_v, coeff, trace);
}

SolitonResidual conformal_ricci_residual(const FieldBundle& bundle, const Point& x) {
  const FieldsAt f = fields_at(bundle, x);
  return conformal_ricci_residual(f.mj, f.curv, f.lie, f.div_v, bundle.lambda, bundle.p);
}

Eigen::MatrixXd einstein_flow_velocity(const CurvatureValue& curv, const Eigen::MatrixXd& g) {
  return -2.0 * (curv.ricci - 0.5 * curv.scalar * g);
}

double trace_identity(const FieldBundle& bundle, const Point& x) {
  const FieldsAt f = fields_at(bundle, x);
  return conformal_einstein_residual(f.mj, f.curv, f.lie, f.div_v, bundle.lambda, bundle.p)
      .trace_identity_value;
}

double solenoidal_scalar_curvature(double lambda, double p, int n) {
  if (n <= 2) throw EvalError("solenoidal scalar curvature formula requires n > 2");
  return 2.0 * lambda * n / (n - 2) + n * (p + 2.0 / n) / (n - 2);
}

double flat_case_constant(double lambda, double p, int n) {
  return lambda + 0.5 * (p + 2.0 / n);
}

namespace {

struct BiconditionalAccumulator {
  double tol;
  bool forward = true;
  bool backward = true;
  double max_residual = 0.0;
  int worst = -1;
  int index = 0;

  // lhs/rhs hold normalized magnitudes; each side counts as "zero" when it
  // stays below tol. The residual is 0 whenever the two sides agree and the
  // larger side otherwise, so PASS <=> max_residual <= tol.
  void add(double lhs, double rhs) {
    const bool lhs_zero = lhs <= tol;
    const bool rhs_zero = rhs <= tol;
    if (lhs_zero && !rhs_zero) forward = false;
    if (rhs_zero && !lhs_zero) backward = false;
    const double res = lhs_zero == rhs_zero ? 0.0 : std::max(lhs, rhs);
    if (res > max_residual) {
      max_residual = res;
      worst = index;
    }
    ++index;
  }
};

}  // namespace

TheoremReport theorem_3_1_verdict(const FieldBundle& bundle, const std::vector<Point>& points,
                                  double tol) {
  TheoremReport report;
  if (bundle.n <= 2) {
    report.status = CheckStatus::Error;
    report.message = "theorem requires n > 2";
    return report;
  }
  if (!bundle.has_vector_field()) {
    report.status = CheckStatus::NotApplicable;
    report.message = "no vector field V";
    return report;
  }
  report.formula_value = solenoidal_scalar_curvature(bundle.lambda, bundle.p, bundle.n);

  BiconditionalAccumulator acc{tol};
  int used = 0;
  for (const Point& x : points) {
    const PointEvaluation pe = evaluate_point(bundle, x);
    if (!pe.metric_ok) throw EvalError(pe.metric_error);
    if (bundle.has_vector_field() && !pe.vector_ok) throw EvalError(pe.vector_error);
    if (!pe.usable()) continue;
    const Eigen::MatrixXd lie = lie_derivative_metric_at(pe.mj, *pe.vf);
    const double div_v = divergence_at(pe.gamma, *pe.vf);
    const SolitonResidual res =
        conformal_einstein_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda, bundle.p);
    const double scale = std::max(1.0, pe.mj.g.cwiseAbs().maxCoeff());
    if (res.norm > tol * scale) {
      report.status = CheckStatus::NotApplicable;
      report.message = "conformal Einstein soliton equation does not hold";
      return report;
    }
    const double vmax = std::max(1.0, pe.vf->V.cwiseAbs().maxCoeff());
    acc.add(std::abs(div_v) / vmax,
            std::abs(pe.curv.scalar - report.formula_value) /
                (1.0 + std::abs(report.formula_value)));
    ++used;
  }
  if (used == 0) {
    report.status = CheckStatus::Error;
    report.message = "no usable sample points";
    return report;
  }
  report.points_checked = used;
  report.forward_holds = acc.forward;
  report.backward_holds = acc.backward;
  report.max_residual = acc.max_residual;
  report.worst_index = acc.worst;
  report.status =
      acc.forward && acc.backward ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

TheoremReport flat_case_verdict(const FieldBundle& bundle, const std::vector<Point>& points,
                                TensorFamily family, double tol) {
  TheoremReport report;
  const int n = bundle.n;
  if (family == TensorFamily::W2 && n <= 2) {
    report.status = CheckStatus::Error;
    report.message = "W2 tensor requires n > 2";
    return report;
  }
  // The paper's reduction needs these parameter combinations nonzero.
  if (family == TensorFamily::QuasiConformal &&
      std::abs(bundle.alpha + 2.0 * bundle.beta) <=
          1e-12 * std::max({1.0, std::abs(bundle.alpha), std::abs(bundle.beta)})) {
    report.status = CheckStatus::DegenerateParams;
    report.message = "alpha + 2 beta = 0";
    return report;
  }
  if (family == TensorFamily::PseudoProjective &&
      std::abs(bundle.a + bundle.b) <=
          1e-12 * std::max({1.0, std::abs(bundle.a), std::abs(bundle.b)})) {
    report.status = CheckStatus::DegenerateParams;
    report.message = "a + b = 0";
    return report;
  }
  if (!bundle.has_vector_field()) {
    report.status = CheckStatus::NotApplicable;
    report.message = "no vector field V";
    return report;
  }

  report.formula_value = flat_case_constant(bundle.lambda, bundle.p, n);
  const double constant_side = std::abs(report.formula_value);

  BiconditionalAccumulator acc{tol};
  double worst_sr = 0.0;
  int used = 0;
  for (const Point& x : points) {
    const PointEvaluation pe = evaluate_point(bundle, x);
    if (!pe.metric_ok) throw EvalError(pe.metric_error);
    if (bundle.has_vector_field() && !pe.vector_ok) throw EvalError(pe.vector_error);
    if (!pe.usable()) continue;
    const double scale = std::max(1.0, pe.mj.g.cwiseAbs().maxCoeff());

    Tensor4 tensor;
    switch (family) {
      case TensorFamily::QuasiConformal:
        tensor = quasi_conformal_at(pe.curv, pe.mj.g, bundle.alpha, bundle.beta, n);
        break;
      case TensorFamily::PseudoProjective:
        tensor = pseudo_projective_at(pe.curv, pe.mj.g, bundle.a, bundle.b, n);
        break;
      case TensorFamily::W2:
        tensor = w2_at(pe.curv, pe.mj.g, n);
        break;
    }
    if (flatness_norm(tensor) > flatness_threshold(pe.mj.g, pe.curv.scalar, tol)) {
      report.status = CheckStatus::NotApplicable;
      report.message = "tensor is not flat at sampled points";
      return report;
    }

    const Eigen::MatrixXd lie = lie_derivative_metric_at(pe.mj, *pe.vf);
    const double div_v = divergence_at(pe.gamma, *pe.vf);
    const SolitonResidual res =
        conformal_einstein_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda, bundle.p);
    if (res.norm > tol * scale) {
      report.status = CheckStatus::NotApplicable;
      report.message = "conformal Einstein soliton equation does not hold";
      return report;
    }

    // Flatness of the family forces S = 0 and r = 0 on a para-Kahler
    // manifold; violation is a genuine failure, not a missing hypothesis.
    const double sr = std::max(pe.curv.ricci.cwiseAbs().maxCoeff(),
                               std::abs(pe.curv.scalar)) /
                      scale;
    worst_sr = std::max(worst_sr, sr);

    const double vmax = std::max(1.0, pe.vf->V.cwiseAbs().maxCoeff());
    acc.add(std::abs(div_v) / vmax, constant_side);
    ++used;
  }
  if (used == 0) {
    report.status = CheckStatus::Error;
    report.message = "no usable sample points";
    return report;
  }
  report.points_checked = used;
  report.forward_holds = acc.forward;
  report.backward_holds = acc.backward;
  report.max_residual = std::max(acc.max_residual, worst_sr);
  report.worst_index = acc.worst;
  if (worst_sr > tol) {
    report.status = CheckStatus::Fail;
    report.message = "Ricci tensor or scalar curvature does not vanish";
    return report;
  }
  report.status =
      acc.forward && acc.backward ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

SolitonClass classify_soliton(double lambda) {
  if (lambda < 0.0) return SolitonClass::Shrinking;
  if (lambda > 0.0) return SolitonClass::Expanding;
  return SolitonClass::Steady;
}

std::string to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::Shrinking:
      return "shrinking";
    case SolitonClass::Steady:
      return "steady";
    case SolitonClass::Expanding:
      return "expanding";
  }
  return "steady";
}

}  // namespace pk
