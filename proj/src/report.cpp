// SPDX-License-Identifier: MIT
#include "pk/report.hpp"

#include "pk/parakahler.hpp"
#include "pk/special_tensors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace pk {

namespace {

const std::vector<std::string> kCheckNames = {
    "axioms",
    "identities",
    "frame_ricci",
    "einstein_soliton",
    "conformal_ricci_soliton",
    "conformal_einstein_soliton",
    "trace_identity",
    "quasi_conformal_flat",
    "pseudo_projective_flat",
    "w2_flat",
    "theorem_3_1",
    "theorem_3_2",
    "theorem_3_3",
    "theorem_3_4",
    "classification",
};

double metric_scale(const PointEvaluation& pe) {
  return std::max(1.0, pe.mj.g.cwiseAbs().maxCoeff());
}

void note(CheckReport& report, const std::string& text) {
  report.details.push_back({-1, 0.0, text});
}

// Shared walk over the evaluated points: `body` returns the normalized
// residual at a usable point or a negative value to skip it. Degenerate
// points are skipped and reported; evaluation errors abort the check.
void scan_points(CheckReport& report, const std::vector<PointEvaluation>& evals,
                 const std::function<double(const PointEvaluation&)>& body) {
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const PointEvaluation& pe = evals[i];
    if (!pe.metric_ok) throw EvalError(pe.metric_error);
    if (pe.degenerate) {
      report.details.push_back({static_cast<int>(i), 0.0, "degenerate metric, skipped"});
      continue;
    }
    const double res = body(pe);
    if (res < 0.0) continue;
    report.details.push_back({static_cast<int>(i), res, ""});
    ++report.points_checked;
    if (res >= report.max_residual) {
      if (res > report.max_residual || report.worst_point.empty()) {
        report.max_residual = res;
        report.worst_point = pe.x;
      }
    }
  }
}

void finish_residual_check(CheckReport& report, double tol) {
  if (report.points_checked == 0) {
    report.status = CheckStatus::Error;
    note(report, "no usable sample points");
    return;
  }
  report.status = report.max_residual <= tol ? CheckStatus::Pass : CheckStatus::Fail;
}

bool axioms_hold_at(const PointEvaluation& pe, double tol) {
  if (!pe.st) return false;
  const AxiomReport ar = axiom_residuals(pe.mj, *pe.st, pe.gamma);
  return ar.pass(tol);
}

CheckReport check_axioms(const FieldBundle& bundle, const std::vector<PointEvaluation>& evals,
                         double tol) {
  CheckReport report;
  report.check_name = "axioms";
  report.tolerance = tol;
  if (!bundle.has_structure()) {
    report.status = CheckStatus::NotApplicable;
    note(report, "no para-structure F");
    return report;
  }
  scan_points(report, evals, [&](const PointEvaluation& pe) {
    if (!pe.structure_ok) throw EvalError(pe.structure_error);
    const AxiomReport ar = axiom_residuals(pe.mj, *pe.st, pe.gamma);
    return ar.max_residual() / std::max(1.0, ar.metric_scale);
  });
  finish_residual_check(report, tol);
  return report;
}

CheckReport check_identities(const FieldBundle& bundle,
                             const std::vector<PointEvaluation>& evals, double tol) {
  CheckReport report;
  report.check_name = "identities";
  report.tolerance = tol;
  if (!bundle.has_structure()) {
    report.status = CheckStatus::NotApplicable;
    note(report, "no para-structure F");
    return report;
  }
  bool gated = false;
  scan_points(report, evals, [&](const PointEvaluation& pe) {
    if (!pe.structure_ok) throw EvalError(pe.structure_error);
    if (!axioms_hold_at(pe, tol)) {
      gated = true;
      return -1.0;
    }
    return curvature_identity_residuals(pe.curv, *pe.st).max_residual();
  });
  if (report.points_checked == 0 && gated) {
    report.status = CheckStatus::NotApplicable;
    note(report, "para-Kahler axioms do not hold at sampled points");
    return report;
  }
  finish_residual_check(report, tol);
  return report;
}

CheckReport check_frame_ricci(const FieldBundle& bundle,
                              const std::vector<PointEvaluation>& evals, double tol) {
  CheckReport report;
  report.check_name = "frame_ricci";
  report.tolerance = tol;
  if (!bundle.has_structure()) {
    report.status = CheckStatus::NotApplicable;
    note(report, "no para-structure F");
    return report;
  }

  // Pooled least-squares fit of frame-Ricci against c * trace-Ricci across
  // all usable points, then the residual is measured against that one c.
  struct Row {
    int index;
    const PointEvaluation* pe;
    FrameRicciReport fr;
  };
  std::vector<Row> rows;
  double num = 0.0, den = 0.0;
  bool gated = false;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const PointEvaluation& pe = evals[i];
    if (!pe.usable()) continue;
    if (!pe.structure_ok) {
      report.status = CheckStatus::Error;
      note(report, pe.structure_error);
      return report;
    }
    if (!axioms_hold_at(pe, tol)) {
      gated = true;
      continue;
    }
    FrameRicciReport fr = ricci_via_frame(pe.curv, *pe.st, pe.mj);
    num += (fr.frame_ricci.array() * pe.curv.ricci.array()).sum();
    den += (pe.curv.ricci.array() * pe.curv.ricci.array()).sum();
    rows.push_back({static_cast<int>(i), &pe, std::move(fr)});
  }
  if (rows.empty()) {
    if (gated) {
      report.status = CheckStatus::NotApplicable;
      note(report, "para-Kahler axioms do not hold at sampled points");
    } else {
      report.status = CheckStatus::Error;
      note(report, "no usable sample points");
    }
    return report;
  }
  const bool fit_valid = den > 1e-20;
  const double c = fit_valid ? num / den : 1.0;
  report.fitted_constants["c"] = c;

  for (const Row& row : rows) {
    const double res = (row.fr.frame_ricci - c * row.pe->curv.ricci).cwiseAbs().maxCoeff() /
                       metric_scale(*row.pe);
    report.details.push_back({row.index, res, ""});
    ++report.points_checked;
    if (res >= report.max_residual) {
      report.max_residual = res;
      report.worst_point = row.pe->x;
    }
  }
  if (fit_valid)
    report.max_residual = std::max(report.max_residual, std::abs(std::abs(c) - 1.0));
  report.status = report.max_residual <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

enum class SolitonKind { Einstein, ConformalRicci, ConformalEinstein };

// The conformal Einstein equation is the subject under verification and
// fails the check when unsatisfied. The Einstein and conformal Ricci
// residuals are context: their norms are reported, with equation_holds
// recording whether the equation is satisfied, but an input is not wrong
// for satisfying one of the three equations and not the others.
CheckReport check_soliton(const FieldBundle& bundle, const std::vector<PointEvaluation>& evals,
                          double tol, SolitonKind kind, const std::string& name) {
  CheckReport report;
  report.check_name = name;
  report.tolerance = tol;
  if (!bundle.has_vector_field()) {
    report.status = CheckStatus::NotApplicable;
    note(report, "no vector field V");
    return report;
  }
  scan_points(report, evals, [&](const PointEvaluation& pe) {
    if (!pe.vector_ok) throw EvalError(pe.vector_error);
    const Eigen::MatrixXd lie = lie_derivative_metric_at(pe.mj, *pe.vf);
    const double div_v = divergence_at(pe.gamma, *pe.vf);
    SolitonResidual res;
    switch (kind) {
      case SolitonKind::Einstein:
        res = einstein_soliton_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda);
        break;
      case SolitonKind::ConformalRicci:
        res = conformal_ricci_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda, bundle.p);
        break;
      case SolitonKind::ConformalEinstein:
        res = conformal_einstein_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda, bundle.p);
        break;
    }
    return res.norm / metric_scale(pe);
  });
  if (report.points_checked == 0) {
    report.status = CheckStatus::Error;
    note(report, "no usable sample points");
    return report;
  }
  const bool holds = report.max_residual <= tol;
  report.fitted_constants["equation_holds"] = holds ? 1.0 : 0.0;
  if (kind == SolitonKind::ConformalEinstein) {
    report.status = holds ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    // context equation: the finding is the norm itself, kept in
    // fitted_constants so PASS still implies max_residual <= tolerance
    report.fitted_constants["max_norm"] = report.max_residual;
    report.max_residual = 0.0;
    report.status = CheckStatus::Pass;
  }
  return report;
}

CheckReport check_trace_identity(const FieldBundle& bundle,
                                 const std::vector<PointEvaluation>& evals, double tol) {
  CheckReport report;
  report.check_name = "trace_identity";
  report.tolerance = tol;
  if (!bundle.has_vector_field()) {
    report.status = CheckStatus::NotApplicable;
    note(report, "no vector field V");
    return report;
  }
  scan_points(report, evals, [&](const PointEvaluation& pe) {
    if (!pe.vector_ok) throw EvalError(pe.vector_error);
    const Eigen::MatrixXd lie = lie_derivative_metric_at(pe.mj, *pe.vf);
    const double div_v = divergence_at(pe.gamma, *pe.vf);
    const SolitonResidual res =
        conformal_einstein_residual(pe.mj, pe.curv, lie, div_v, bundle.lambda, bundle.p);
    const double half_trace = 0.5 * (pe.ginv.array() * res.matrix.array()).sum();
    return std::abs(res.trace_identity_value - half_trace) /
           (1.0 + std::abs(res.trace_identity_value));
  });
  finish_residual_check(report, tol);
  return report;
}

CheckReport check_flatness(const FieldBundle& bundle, const std::vector<PointEvaluation>& evals,
                           double tol, TensorFamily family, const std::string& name) {
  CheckReport report;
  report.check_name = name;
  report.tolerance = tol;
  scan_points(report, evals, [&](const PointEvaluation& pe) {
    Tensor4 tensor;
    switch (family) {
      case TensorFamily::QuasiConformal:
        tensor = quasi_conformal_at(pe.curv, pe.mj.g, bundle.alpha, bundle.beta, bundle.n);
        break;
      case TensorFamily::PseudoProjective:
        tensor = pseudo_projective_at(pe.curv, pe.mj.g, bundle.a, bundle.b, bundle.n);
        break;
      case TensorFamily::W2:
        tensor = w2_at(pe.curv, pe.mj.g, bundle.n);
        break;
    }
    // normalized against the flatness threshold scaling
    return flatness_norm(tensor) /
           (flatness_threshold(pe.mj.g, pe.curv.scalar, tol) / tol);
  });
  finish_residual_check(report, tol);
  return report;
}

CheckReport check_theorem(const FieldBundle& bundle, const std::vector<Point>& points,
                          double tol, int which) {
  CheckReport report;
  report.check_name = "theorem_3_" + std::to_string(which);
  report.tolerance = tol;
  TheoremReport tr;
  switch (which) {
    case 1:
      tr = theorem_3_1_verdict(bundle, points, tol);
      break;
    case 2:
      tr = flat_case_verdict(bundle, points, TensorFamily::QuasiConformal, tol);
      break;
    case 3:
      tr = flat_case_verdict(bundle, points, TensorFamily::PseudoProjective, tol);
      break;
    default:
      tr = flat_case_verdict(bundle, points, TensorFamily::W2, tol);
      break;
  }
  report.status = tr.status;
  report.max_residual = tr.max_residual;
  report.points_checked = tr.points_checked;
  if (tr.worst_index >= 0 && tr.worst_index < static_cast<int>(points.size()))
    report.worst_point = points[tr.worst_index];
  if (!tr.message.empty()) note(report, tr.message);
  if (tr.status == CheckStatus::Pass || tr.status == CheckStatus::Fail) {
    report.fitted_constants[which == 1 ? "r_formula" : "flat_case_constant"] =
        tr.formula_value;
    report.fitted_constants["forward_holds"] = tr.forward_holds ? 1.0 : 0.0;
    report.fitted_constants["backward_holds"] = tr.backward_holds ? 1.0 : 0.0;
  }
  return report;
}

CheckReport check_classification(const FieldBundle& bundle, double tol) {
  CheckReport report;
  report.check_name = "classification";
  report.tolerance = tol;
  report.status = CheckStatus::Pass;
  report.points_checked = 1;
  report.fitted_constants["lambda"] = bundle.lambda;
  note(report, to_string(classify_soliton(bundle.lambda)));
  return report;
}

}  // namespace

const std::vector<std::string>& all_check_names() { return kCheckNames; }

std::vector<CheckReport> run_checks(const FieldBundle& bundle, const SamplePlan& plan,
                                    const RunOptions& options) {
  for (const std::string& name : options.checks)
    if (std::find(kCheckNames.begin(), kCheckNames.end(), name) == kCheckNames.end())
      throw SpecError("unknown check name '" + name + "'");

  SamplePlan effective = plan;
  if (effective.kind == SamplePlan::Kind::RandomBox) {
    if (options.points) effective.count = *options.points;
    if (options.seed) effective.seed = *options.seed;
  }
  const std::vector<Point> points = sample_points(effective, bundle.n);

  std::vector<PointEvaluation> evals;
  evals.reserve(points.size());
  for (const Point& x : points) evals.push_back(evaluate_point(bundle, x));

  const double tol = options.tolerance;
  auto selected = [&](const std::string& name) {
    return options.checks.empty() ||
           std::find(options.checks.begin(), options.checks.end(), name) !=
               options.checks.end();
  };

  std::vector<CheckReport> reports;
  auto run = [&](const std::string& name, const std::function<CheckReport()>& fn) {
    if (!selected(name)) return;
    CheckReport report;
    try {
      report = fn();
    } catch (const std::exception& err) {
      report = CheckReport{};
      report.check_name = name;
      report.tolerance = tol;
      report.status = CheckStatus::Error;
      note(report, err.what());
    }
    reports.push_back(std::move(report));
  };

  run("axioms", [&] { return check_axioms(bundle, evals, tol); });
  run("identities", [&] { return check_identities(bundle, evals, tol); });
  run("frame_ricci", [&] { return check_frame_ricci(bundle, evals, tol); });
  run("einstein_soliton", [&] {
    return check_soliton(bundle, evals, tol, SolitonKind::Einstein, "einstein_soliton");
  });
  run("conformal_ricci_soliton", [&] {
    return check_soliton(bundle, evals, tol, SolitonKind::ConformalRicci,
                         "conformal_ricci_soliton");
  });
  run("conformal_einstein_soliton", [&] {
    return check_soliton(bundle, evals, tol, SolitonKind::ConformalEinstein,
                         "conformal_einstein_soliton");
  });
  run("trace_identity", [&] { return check_trace_identity(bundle, evals, tol); });
  run("quasi_conformal_flat", [&] {
    return check_flatness(bundle, evals, tol, TensorFamily::QuasiConformal,
                          "quasi_conformal_flat");
  });
  run("pseudo_projective_flat", [&] {
    return check_flatness(bundle, evals, tol, TensorFamily::PseudoProjective,
                          "pseudo_projective_flat");
  });
  run("w2_flat", [&] { return check_flatness(bundle, evals, tol, TensorFamily::W2, "w2_flat"); });
  run("theorem_3_1", [&] { return check_theorem(bundle, points, tol, 1); });
  run("theorem_3_2", [&] { return check_theorem(bundle, points, tol, 2); });
  run("theorem_3_3", [&] { return check_theorem(bundle, points, tol, 3); });
  run("theorem_3_4", [&] { return check_theorem(bundle, points, tol, 4); });
  run("classification", [&] { return check_classification(bundle, tol); });
  return reports;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string fmt_real(double v) {
  char buf[64];
  if (!std::isfinite(v)) return "null";
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void json_escape(const std::string& s, std::string& out) {
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
}

void append_check_json(const CheckReport& r, std::string& out) {
  out += "  {\"check_name\":\"";
  json_escape(r.check_name, out);
  out += "\",\"status\":\"" + to_string(r.status) + "\"";
  out += ",\"max_residual\":" + fmt_real(r.max_residual);
  out += ",\"tolerance\":" + fmt_real(r.tolerance);
  out += ",\"points_checked\":" + std::to_string(r.points_checked);
  out += ",\"worst_point\":[";
  for (std::size_t i = 0; i < r.worst_point.size(); ++i) {
    if (i) out.push_back(',');
    out += fmt_real(r.worst_point[i]);
  }
  out += "],\"details\":[";
  for (std::size_t i = 0; i < r.details.size(); ++i) {
    if (i) out.push_back(',');
    const PointDetail& d = r.details[i];
    out += "{\"point_index\":" + std::to_string(d.point_index);
    out += ",\"residual\":" + fmt_real(d.residual);
    if (!d.note.empty()) {
      out += ",\"note\":\"";
      json_escape(d.note, out);
      out += "\"";
    }
    out += "}";
  }
  out += "],\"fitted_constants\":{";
  bool first = true;
  for (const auto& [key, value] : r.fitted_constants) {
    if (!first) out.push_back(',');
    first = false;
    out += "\"";
    json_escape(key, out);
    out += "\":" + fmt_real(value);
  }
  out += "}}";
}

std::string render_json(const std::vector<CheckReport>& reports, const RenderContext& ctx) {
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(ctx.spec_digest));
  std::string out = "{\"version\":\"" + ctx.version + "\",\"spec_digest\":\"" + digest + "\"";
  out += ",\"seed\":" + std::to_string(ctx.seed);
  out += ",\"tolerance\":" + fmt_real(ctx.tolerance);
  out += ",\"checks\":[";
  if (!reports.empty()) out += "\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += ",\n";
    append_check_json(reports[i], out);
  }
  if (!reports.empty()) out += "\n";
  out += "]}\n";
  return out;
}

std::string render_text(const std::vector<CheckReport>& reports, const RenderContext& ctx) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-28s %-18s %-13s %-10s %-7s %s\n", "check", "status",
                "max_residual", "tolerance", "points", "notes");
  out += line;
  out += std::string(96, '-') + "\n";
  for (const CheckReport& r : reports) {
    std::string notes;
    for (const auto& [key, value] : r.fitted_constants) {
      if (!notes.empty()) notes += ", ";
      char kv[64];
      std::snprintf(kv, sizeof kv, "%s=%.6g", key.c_str(), value);
      notes += kv;
    }
    for (const PointDetail& d : r.details)
      if (d.point_index == -1 && !d.note.empty()) {
        if (!notes.empty()) notes += ", ";
        notes += d.note;
      }
    std::snprintf(line, sizeof line, "%-28s %-18s %-13s %-10s %-7d %s\n", r.check_name.c_str(),
                  to_string(r.status).c_str(), fmt_brief(r.max_residual).c_str(),
                  fmt_brief(r.tolerance).c_str(), r.points_checked, notes.c_str());
    out += line;
  }
  (void)ctx;
  return out;
}

}  // namespace

std::string render_report(const std::vector<CheckReport>& reports, RunOptions::Format format,
                          const RenderContext& ctx) {
  return format == RunOptions::Format::Json ? render_json(reports, ctx)
                                            : render_text(reports, ctx);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t spec_digest(std::string_view text) {
  std::string canon;
  canon.reserve(text.size());
  for (char c : text)
    if (c != '\r') canon.push_back(c);
  return fnv1a64(canon);
}

int aggregate_exit_code(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (r.status == CheckStatus::Fail || r.status == CheckStatus::Error) return 1;
  return 0;
}

}  // namespace pk
