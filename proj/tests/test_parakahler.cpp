// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pk/parakahler.hpp"
#include "pk/splitmix64.hpp"

#include <cmath>

using namespace pk;

namespace {

const char* kFixPot = R"(
dimension = 4
[metric]
kind = potential
potential = x1*y1 + x2*y2 + x1^2*y1^2
)";

std::vector<Point> box_sample(std::uint64_t seed, int count, int n, double half_width) {
  SamplePlan plan;
  plan.kind = SamplePlan::Kind::RandomBox;
  plan.count = count;
  plan.seed = seed;
  plan.box = {{-half_width, half_width}};
  return sample_points(plan, n);
}

}  // namespace

TEST_CASE("flat model satisfies the axioms exactly") {
  const FieldBundle flat = builtin_flat(2);
  const AxiomReport report = axiom_residuals(flat, {0.4, -0.6, 0.2, 0.9});
  CHECK(report.residual_F2 == 0.0);
  CHECK(report.residual_metric_skew == 0.0);
  CHECK(report.residual_nablaF == 0.0);
  CHECK(report.pass());
}

TEST_CASE("potential bundles satisfy the axioms to jet precision") {
  const LoadedSpec spec = load_spec(kFixPot);
  for (const Point& x : box_sample(41, 20, 4, 0.3)) {
    const AxiomReport report = axiom_residuals(spec.bundle, x);
    CHECK(report.residual_F2 < 1e-8);
    CHECK(report.residual_metric_skew < 1e-8);
    CHECK(report.residual_nablaF < 1e-8);
    CHECK(report.pass());
  }
}

TEST_CASE("F = identity breaks the metric-skew axiom") {
  const LoadedSpec spec = load_spec(R"(
dimension = 4
[metric]
kind = flat
[structure]
kind = explicit
F[0][0] = 1
F[1][1] = 1
F[2][2] = 1
F[3][3] = 1
)");
  const AxiomReport report = axiom_residuals(spec.bundle, {0, 0, 0, 0});
  CHECK(report.residual_F2 == 0.0);
  CHECK(report.residual_nablaF == 0.0);
  // F^T g F + g = 2g, so the residual is twice the largest metric entry
  CHECK(report.residual_metric_skew == 2.0 * report.metric_scale);
  CHECK_FALSE(report.pass());
}

TEST_CASE("curvature identities vanish on para-Kahler bundles") {
  const FieldBundle flat = builtin_flat(2);
  const IdentityResiduals flat_res = curvature_identity_residuals(flat, {0.1, 0.2, 0.3, 0.4});
  CHECK(flat_res.max_residual() == 0.0);

  const LoadedSpec spec = load_spec(kFixPot);
  for (const Point& x : box_sample(43, 20, 4, 0.3)) {
    const IdentityResiduals res = curvature_identity_residuals(spec.bundle, x);
    CHECK(res.curvature_ff < 1e-8);
    CHECK(res.curvature_mixed < 1e-8);
    CHECK(res.ricci_skew < 1e-8);
    CHECK(res.ricci_ff < 1e-8);
  }
}

TEST_CASE("a corrupted structure tensor is caught") {
  const LoadedSpec spec = load_spec(R"(
dimension = 4
[metric]
kind = potential
potential = x1*y1 + x2*y2 + x1^2*y1^2
[structure]
kind = explicit
F[0][0] = 1
F[1][1] = 1
F[2][2] = -1
F[3][3] = -1
F[0][2] = 0.1
)");
  const Point x = {0.15, -0.1, 0.2, 0.05};
  const IdentityResiduals res = curvature_identity_residuals(spec.bundle, x);
  CHECK(res.max_residual() > 1e-3);
  CHECK_FALSE(axiom_residuals(spec.bundle, x).pass(1e-3));
}

TEST_CASE("frame Ricci matches trace Ricci with |c| = 1") {
  const FieldBundle flat = builtin_flat(2);
  const FrameRicciReport flat_report = ricci_via_frame(flat, {0.3, 0.1, -0.2, 0.6});
  CHECK(flat_report.frame_ricci.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(flat_report.fit_valid);

  const LoadedSpec spec = load_spec(kFixPot);
  const FrameRicciReport origin = ricci_via_frame(spec.bundle, {0, 0, 0, 0});
  CHECK(origin.fit_valid);
  CHECK(std::abs(std::abs(origin.fitted_c) - 1.0) < 1e-8);
  CHECK(origin.max_deviation < 1e-8);
  CHECK((origin.frame_ricci - origin.fitted_c * Eigen::MatrixXd(origin.frame_ricci))
            .cwiseAbs()
            .maxCoeff() >= 0.0);  // sanity: finite

  // the fitted c is the same at every sampled point
  double mean = 0.0;
  std::vector<double> cs;
  for (const Point& x : box_sample(47, 20, 4, 0.3)) {
    const FrameRicciReport rep = ricci_via_frame(spec.bundle, x);
    REQUIRE(rep.fit_valid);
    CHECK(rep.max_deviation < 1e-8);
    cs.push_back(rep.fitted_c);
    mean += rep.fitted_c;
  }
  mean /= static_cast<double>(cs.size());
  double var = 0.0;
  for (double c : cs) var += (c - mean) * (c - mean);
  var /= static_cast<double>(cs.size());
  CHECK(var < 1e-10);
  CHECK(std::abs(std::abs(mean) - 1.0) < 1e-8);
}

TEST_CASE("identity 2.5 residual is controlled by 2.4 and the axioms") {
  const LoadedSpec spec = load_spec(kFixPot);
  for (const Point& x : box_sample(53, 10, 4, 0.3)) {
    const IdentityResiduals res = curvature_identity_residuals(spec.bundle, x);
    const PointEvaluation pe = evaluate_point(spec.bundle, x);
    const double floor_sr =
        1e-12 * std::max(1.0, pe.curv.ricci.cwiseAbs().maxCoeff());
    CHECK(res.ricci_ff <= 2.0 * (res.ricci_skew + res.curvature_ff) + floor_sr);
  }
}

TEST_CASE("bundles passing the axioms have neutral signature") {
  const LoadedSpec spec = load_spec(kFixPot);
  for (const Point& x : box_sample(59, 10, 4, 0.3)) {
    if (!axiom_residuals(spec.bundle, x).pass()) continue;
    CHECK(signature_at(spec.bundle, x) == std::pair<int, int>{2, 2});
  }
}
