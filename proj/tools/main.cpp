// SPDX-License-Identifier: MIT
#include "pk/parakahler.hpp"
#include "pk/report.hpp"
#include "pk/special_tensors.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pk::SpecError("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    std::string item =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    const auto b = item.find_first_not_of(" \t");
    if (b != std::string::npos) {
      const auto e = item.find_last_not_of(" \t");
      out.push_back(item.substr(b, e - b + 1));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_matrix(const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << fmt17(m(i, j));
    std::cout << "\n";
  }
}

void print_tensor3(const pk::Tensor3& t, const char* name) {
  int nonzero = 0;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      for (int k = 0; k < t.n; ++k)
        if (t(i, j, k) != 0.0) {
          std::cout << name << "[" << i << "][" << j << "][" << k
                    << "] = " << fmt17(t(i, j, k)) << "\n";
          ++nonzero;
        }
  if (!nonzero) std::cout << "all components zero\n";
}

void print_tensor4(const pk::Tensor4& t, const char* name) {
  int nonzero = 0;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      for (int k = 0; k < t.n; ++k)
        for (int l = 0; l < t.n; ++l)
          if (t(i, j, k, l) != 0.0) {
            std::cout << name << "[" << i << "][" << j << "][" << k << "][" << l
                      << "] = " << fmt17(t(i, j, k, l)) << "\n";
            ++nonzero;
          }
  if (!nonzero) std::cout << "all components zero\n";
}

int run_eval(const pk::FieldBundle& bundle, const pk::Point& x, const std::string& quantity) {
  using namespace pk;
  const MetricJetValue mj = metric_at(bundle, x);
  const Eigen::MatrixXd ginv = invert_metric(mj.g);
  const ChristoffelValue gamma = christoffel_at(mj, ginv);
  const CurvatureValue curv = full_curvature_at(mj, ginv);

  if (quantity == "christoffel") {
    print_tensor3(gamma.gamma, "Gamma");
  } else if (quantity == "riemann") {
    print_tensor4(curv.riemann_low, "R");
  } else if (quantity == "ricci") {
    print_matrix(curv.ricci);
  } else if (quantity == "scalar") {
    std::cout << fmt17(curv.scalar) << "\n";
  } else if (quantity == "quasi_conformal") {
    print_tensor4(quasi_conformal_at(curv, mj.g, bundle.alpha, bundle.beta, bundle.n), "C");
  } else if (quantity == "pseudo_projective") {
    print_tensor4(pseudo_projective_at(curv, mj.g, bundle.a, bundle.b, bundle.n), "P");
  } else if (quantity == "w2") {
    print_tensor4(w2_at(curv, mj.g, bundle.n), "W2");
  } else if (quantity == "soliton") {
    const SolitonResidual res = conformal_einstein_residual(bundle, x);
    print_matrix(res.matrix);
    std::cout << "norm = " << fmt17(res.norm) << "\n";
    std::cout << "trace_identity = " << fmt17(res.trace_identity_value) << "\n";
  } else if (quantity == "flow") {
    print_matrix(einstein_flow_velocity(curv, mj.g));
  } else {
    std::cerr << "unknown quantity '" << quantity << "'\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise verification of para-Kahler charts and conformal Einstein solitons"};
  app.require_subcommand(1);

  std::string spec_path, point_text, quantity = "ricci", format_text = "text", checks_text;
  double tolerance = 1e-7;
  bool tolerance_set = false;
  int points_override = 0;
  std::uint64_t seed_override = 0;

  CLI::App* check = app.add_subcommand("check", "run checks over the sample plan");
  check->add_option("spec", spec_path, "chart spec file")->required();
  check->add_option("--tolerance", tolerance, "residual tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { tolerance_set = true; });
  auto* points_opt = check->add_option("--points", points_override, "sample count override");
  auto* seed_opt = check->add_option("--seed", seed_override, "sample seed override");
  check->add_option("--format", format_text, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  check->add_option("--checks", checks_text, "comma-separated check names");

  CLI::App* eval = app.add_subcommand("eval", "print one quantity at one point");
  eval->add_option("spec", spec_path, "chart spec file")->required();
  eval->add_option("--point", point_text, "comma-separated coordinates")->required();
  eval->add_option("--quantity", quantity,
                   "ricci|scalar|riemann|christoffel|quasi_conformal|pseudo_projective|w2|"
                   "soliton|flow");

  CLI::App* builtins = app.add_subcommand("builtins", "list builtin chart families");

  CLI11_PARSE(app, argc, argv);

  try {
    if (builtins->parsed()) {
      std::cout << "flat       canonical flat model: [metric] kind = flat, dimension = 2m >= 4\n"
                   "potential  g_{x_i y_j} = d2 phi / dx_i dy_j: [metric] kind = potential,\n"
                   "           potential = <expression in x1..xm, y1..ym>\n";
      return 0;
    }

    const std::string text = read_file(spec_path);
    pk::LoadedSpec loaded = pk::load_spec(text);

    if (eval->parsed()) {
      pk::Point x;
      for (const std::string& c : split_csv(point_text)) x.push_back(std::strtod(c.c_str(), nullptr));
      if (static_cast<int>(x.size()) != loaded.bundle.n) {
        std::cerr << "point has " << x.size() << " coordinates, chart dimension is "
                  << loaded.bundle.n << "\n";
        return 2;
      }
      return run_eval(loaded.bundle, x, quantity);
    }

    pk::RunOptions options;
    if (!tolerance_set) {
      if (const char* env = std::getenv("PKCHECK_TOLERANCE")) {
        const double v = std::strtod(env, nullptr);
        if (v > 0) tolerance = v;
      }
    }
    options.tolerance = tolerance;
    if (points_opt->count()) options.points = points_override;
    if (seed_opt->count()) options.seed = seed_override;
    options.format = format_text == "json" ? pk::RunOptions::Format::Json
                                           : pk::RunOptions::Format::Text;
    if (!checks_text.empty()) options.checks = split_csv(checks_text);

    const std::vector<pk::CheckReport> reports =
        pk::run_checks(loaded.bundle, loaded.plan, options);

    pk::RenderContext ctx;
    ctx.spec_digest = pk::spec_digest(text);
    ctx.seed = options.seed ? *options.seed
                            : (loaded.plan.kind == pk::SamplePlan::Kind::RandomBox
                                   ? loaded.plan.seed
                                   : 0);
    ctx.tolerance = options.tolerance;
    std::cout << pk::render_report(reports, options.format, ctx);
    return pk::aggregate_exit_code(reports);
  } catch (const pk::SpecError& err) {
    std::cerr << "spec error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
