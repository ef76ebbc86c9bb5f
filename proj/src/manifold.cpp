// SPDX-License-Identifier: MIT
#include "pk/manifold.hpp"

#include "pk/splitmix64.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace pk {

namespace {

std::string coord_name(int i, int m) {
  return (i < m ? "x" : "y") + std::to_string(i < m ? i + 1 : i - m + 1);
}

std::vector<std::string> default_coordinates(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back(coord_name(i, n / 2));
  return names;
}

std::vector<ExprPtr> standard_structure(int n) {
  // +1 on the x block, -1 on the y block
  const ExprPtr zero = make_number(0.0);
  const ExprPtr plus = make_number(1.0);
  const ExprPtr minus = make_number(-1.0);
  std::vector<ExprPtr> F(static_cast<std::size_t>(n) * n, zero);
  const int m = n / 2;
  for (int i = 0; i < n; ++i) F[static_cast<std::size_t>(i) * n + i] = i < m ? plus : minus;
  return F;
}

EvalEnv<Jet2> jet_env(const FieldBundle& bundle, const Point& x) {
  if (static_cast<int>(x.size()) != bundle.n)
    throw EvalError("point length mismatch: expected " + std::to_string(bundle.n) +
                    " coordinates, got " + std::to_string(x.size()));
  EvalEnv<Jet2> env;
  for (int i = 0; i < bundle.n; ++i)
    env[bundle.coordinates[i]] = jet_variable(x[i], i, bundle.n);
  return env;
}

}  // namespace

FieldBundle builtin_flat(int m) {
  if (m < 2) throw SpecError("builtin flat model requires m >= 2");
  FieldBundle bundle;
  bundle.n = 2 * m;
  bundle.coordinates = default_coordinates(bundle.n);
  bundle.metric_kind = FieldBundle::MetricKind::Explicit;
  const ExprPtr zero = make_number(0.0);
  const ExprPtr one = make_number(1.0);
  bundle.g.assign(static_cast<std::size_t>(bundle.n) * bundle.n, zero);
  for (int i = 0; i < m; ++i) {
    bundle.g[static_cast<std::size_t>(i) * bundle.n + (m + i)] = one;
    bundle.g[static_cast<std::size_t>(m + i) * bundle.n + i] = one;
  }
  bundle.F = standard_structure(bundle.n);
  bundle.beta = -1.0 / (bundle.n - 2);
  return bundle;
}

FieldBundle builtin_potential(int m, ExprPtr phi) {
  if (m < 2) throw SpecError("builtin potential model requires m >= 2");
  if (!phi) throw SpecError("builtin potential model requires a potential expression");
  FieldBundle bundle;
  bundle.n = 2 * m;
  bundle.coordinates = default_coordinates(bundle.n);
  bundle.metric_kind = FieldBundle::MetricKind::Potential;
  bundle.potential = std::move(phi);
  for (const auto& var : free_variables(*bundle.potential)) {
    if (std::find(bundle.coordinates.begin(), bundle.coordinates.end(), var) ==
        bundle.coordinates.end())
      throw SpecError("potential references unknown coordinate '" + var + "'");
  }
  bundle.F = standard_structure(bundle.n);
  bundle.beta = -1.0 / (bundle.n - 2);
  return bundle;
}

std::vector<Point> sample_points(const SamplePlan& plan, int n) {
  if (plan.kind == SamplePlan::Kind::List) {
    for (const Point& p : plan.points)
      if (static_cast<int>(p.size()) != n)
        throw SpecError("sample point length mismatch: expected " + std::to_string(n) +
                        " coordinates, got " + std::to_string(p.size()));
    return plan.points;
  }
  if (plan.count < 1) throw SpecError("sample count must be at least 1");
  std::vector<std::pair<double, double>> box = plan.box;
  if (box.empty()) box.assign(n, {-0.3, 0.3});
  if (static_cast<int>(box.size()) == 1) box.assign(n, box.front());
  if (static_cast<int>(box.size()) != n)
    throw SpecError("sampling box must cover all " + std::to_string(n) + " coordinates");
  for (const auto& [lo, hi] : box)
    if (!(lo < hi)) throw SpecError("sampling box bounds must satisfy lo < hi");

  SplitMix64 rng(plan.seed);
  std::vector<Point> out;
  out.reserve(plan.count);
  for (int k = 0; k < plan.count; ++k) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = rng.next_in(box[i].first, box[i].second);
    out.push_back(std::move(p));
  }
  return out;
}

MetricJetValue metric_at(const FieldBundle& bundle, const Point& x) {
  const int n = bundle.n;
  MetricJetValue mj;
  mj.n = n;
  mj.g = Eigen::MatrixXd::Zero(n, n);
  mj.dg = Tensor3(n);
  mj.ddg = Tensor4(n);

  auto fill_entry = [&](int i, int j, const Jet2& val) {
    mj.g(i, j) = mj.g(j, i) = val.v;
    for (int k = 0; k < n; ++k) {
      mj.dg(k, i, j) = val.grad[k];
      mj.dg(k, j, i) = val.grad[k];
    }
    for (int k = 0; k < n; ++k)
      for (int l = 0; l <= k; ++l) {
        const double h = val.h(k, l);
        mj.ddg(k, l, i, j) = h;
        mj.ddg(l, k, i, j) = h;
        mj.ddg(k, l, j, i) = h;
        mj.ddg(l, k, j, i) = h;
      }
  };

  if (bundle.metric_kind == FieldBundle::MetricKind::Explicit) {
    EvalEnv<Jet2> env = jet_env(bundle, x);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        try {
          fill_entry(i, j, evaluate(*bundle.g[static_cast<std::size_t>(i) * n + j], env));
        } catch (const EvalError& err) {
          throw EvalError("metric entry g[" + std::to_string(i) + "][" + std::to_string(j) +
                              "]: " + err.what(),
                          err.span);
        }
      }
    return mj;
  }

  // Potential metric: one nested-jet evaluation of phi yields the cross
  // block together with its first and second derivatives.
  if (static_cast<int>(x.size()) != n)
    throw EvalError("point length mismatch: expected " + std::to_string(n) +
                    " coordinates, got " + std::to_string(x.size()));
  EvalEnv<Jet2T<Jet2>> env;
  for (int i = 0; i < n; ++i)
    env[bundle.coordinates[i]] = nested_variable(x[i], i, n);
  Jet2T<Jet2> phi;
  try {
    phi = evaluate(*bundle.potential, env);
  } catch (const EvalError& err) {
    throw EvalError(std::string("potential: ") + err.what(), err.span);
  }
  const int m = n / 2;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) fill_entry(i, m + j, phi.h(i, m + j));
  return mj;
}

StructureJetValue structure_at(const FieldBundle& bundle, const Point& x) {
  if (!bundle.has_structure())
    throw EvalError("bundle defines no para-structure F");
  const int n = bundle.n;
  EvalEnv<Jet2> env = jet_env(bundle, x);
  StructureJetValue st;
  st.F = Eigen::MatrixXd::Zero(n, n);
  st.dF = Tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet2 val;
      try {
        val = evaluate(*bundle.F[static_cast<std::size_t>(i) * n + j], env);
      } catch (const EvalError& err) {
        throw EvalError("structure entry F[" + std::to_string(i) + "][" + std::to_string(j) +
                            "]: " + err.what(),
                        err.span);
      }
      st.F(i, j) = val.v;
      for (int k = 0; k < n; ++k) st.dF(k, i, j) = val.grad[k];
    }
  return st;
}

VectorFieldJetValue vector_field_at(const FieldBundle& bundle, const Point& x) {
  if (!bundle.has_vector_field())
    throw EvalError("bundle defines no vector field V");
  const int n = bundle.n;
  EvalEnv<Jet2> env = jet_env(bundle, x);
  VectorFieldJetValue vf;
  vf.V = Eigen::VectorXd::Zero(n);
  vf.dV = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    Jet2 val;
    try {
      val = evaluate(*bundle.V[k], env);
    } catch (const EvalError& err) {
      throw EvalError("vector field entry V[" + std::to_string(k) + "]: " + err.what(),
                      err.span);
    }
    vf.V(k) = val.v;
    for (int i = 0; i < n; ++i) vf.dV(i, k) = val.grad[i];
  }
  return vf;
}

double degeneracy_threshold(const Eigen::MatrixXd& g) {
  const double maxg = g.cwiseAbs().maxCoeff();
  if (!(maxg > 0.0)) return 0.0;
  return 1e-12 * std::pow(maxg, static_cast<double>(g.rows()));
}

bool is_degenerate(const Eigen::MatrixXd& g) {
  const double maxg = g.cwiseAbs().maxCoeff();
  if (!(maxg > 0.0)) return true;
  return std::abs(g.determinant()) < degeneracy_threshold(g);
}

Eigen::MatrixXd invert_metric(const Eigen::MatrixXd& g) {
  const double det = g.determinant();
  if (is_degenerate(g)) {
    std::ostringstream msg;
    msg << "degenerate metric: |det g| = " << std::abs(det) << " below threshold "
        << degeneracy_threshold(g);
    throw EvalError(msg.str());
  }
  Eigen::MatrixXd inv = g.inverse();
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd inverse_metric_at(const FieldBundle& bundle, const Point& x) {
  return invert_metric(metric_at(bundle, x).g);
}

std::pair<int, int> signature_of(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  int plus = 0, minus = 0;
  for (int i = 0; i < g.rows(); ++i) {
    const double mu = es.eigenvalues()(i);
    if (std::abs(mu) < 1e-12 * scale) {
      std::ostringstream msg;
      msg << "degenerate metric: eigenvalue " << mu << " below threshold";
      throw EvalError(msg.str());
    }
    (mu > 0 ? plus : minus) += 1;
  }
  return {plus, minus};
}

std::pair<int, int> signature_at(const FieldBundle& bundle, const Point& x) {
  return signature_of(metric_at(bundle, x).g);
}

// ---------------------------------------------------------------------------
// Chart file loader
// ---------------------------------------------------------------------------

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto rest = [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s.substr(1))
    if (!rest(c)) return false;
  return true;
}

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

struct SpecParser {
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw SpecError("line " + std::to_string(line_no) + ": " + msg);
  }

  ExprPtr parse_expr(const std::string& text) const {
    try {
      return parse(text);
    } catch (const ParseError& err) {
      fail(std::string("in expression '") + text + "': " + err.what());
    }
  }

  double parse_constant(const std::string& text) const {
    ExprPtr e = parse_expr(text);
    if (!free_variables(*e).empty()) fail("'" + text + "' must be a constant");
    try {
      return evaluate<double>(*e, {});
    } catch (const EvalError& err) {
      fail(std::string("in constant '") + text + "': " + err.what());
    }
  }

  long long parse_integer(const std::string& text) const {
    const double v = parse_constant(text);
    if (std::nearbyint(v) != v) fail("'" + text + "' must be an integer");
    return static_cast<long long>(v);
  }

  std::uint64_t parse_seed(const std::string& text) const {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0') fail("seed must be an unsigned integer");
    return v;
  }

  std::pair<double, double> parse_range(const std::string& text) const {
    const auto sep = text.find("..");
    if (sep == std::string::npos) fail("range must be written lo..hi");
    const double lo = parse_constant(trim(text.substr(0, sep)));
    const double hi = parse_constant(trim(text.substr(sep + 2)));
    if (!(lo < hi)) fail("range bounds must satisfy lo < hi");
    return {lo, hi};
  }

  // Matches keys of the form base[i] or base[i][j].
  bool indexed_key(const std::string& key, const std::string& base, int arity, int& i,
                   int& j) const {
    if (key.rfind(base + "[", 0) != 0) return false;
    std::size_t pos = base.size();
    int idx[2] = {0, 0};
    for (int k = 0; k < arity; ++k) {
      if (pos >= key.size() || key[pos] != '[') fail("malformed index in key '" + key + "'");
      const auto close = key.find(']', pos);
      if (close == std::string::npos) fail("malformed index in key '" + key + "'");
      const std::string digits = key.substr(pos + 1, close - pos - 1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        fail("index must be a nonnegative integer in key '" + key + "'");
      idx[k] = std::atoi(digits.c_str());
      pos = close + 1;
    }
    if (pos != key.size()) fail("trailing characters in key '" + key + "'");
    i = idx[0];
    j = idx[1];
    return true;
  }
};

std::vector<Point> parse_point_list(const SpecParser& p, const std::string& text) {
  std::vector<Point> pts;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('(', pos);
    if (open == std::string::npos) break;
    auto close = text.find(')', open);
    if (close == std::string::npos) p.fail("unbalanced parenthesis in points list");
    std::string body = text.substr(open + 1, close - open - 1);
    Point pt;
    std::size_t start = 0;
    while (start <= body.size()) {
      auto comma = body.find(',', start);
      std::string item =
          trim(comma == std::string::npos ? body.substr(start) : body.substr(start, comma - start));
      if (item.empty()) p.fail("empty coordinate in points list");
      pt.push_back(p.parse_constant(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    pts.push_back(std::move(pt));
    pos = close + 1;
  }
  if (pts.empty()) p.fail("points list is empty");
  return pts;
}

}  // namespace

LoadedSpec load_spec(std::string_view text) {
  SpecParser p;

  // staging
  int dimension = -1;
  std::optional<std::vector<std::string>> coordinates;
  std::string metric_kind, structure_kind, sampling_kind;
  ExprPtr potential;
  std::map<std::pair<int, int>, ExprPtr> g_entries, f_entries;
  std::map<int, ExprPtr> v_entries;
  bool vector_section = false, structure_section = false;
  std::optional<double> lambda, pval, alpha, beta, aval, bval;
  std::optional<int> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<double, double>> box_all;
  std::map<int, std::pair<double, double>> box_per;
  std::optional<std::vector<Point>> plan_points;

  std::string section;  // "" = top level
  std::istringstream stream{std::string(text)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++p.line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "metric" && section != "structure" && section != "vector_field" &&
          section != "soliton" && section != "tensor_params" && section != "sampling")
        p.fail("unknown section [" + section + "]");
      if (section == "structure") structure_section = true;
      if (section == "vector_field") vector_section = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("empty key");
    if (value.empty()) p.fail("empty value for key '" + key + "'");

    int i = 0, j = 0;
    if (section.empty()) {
      if (key == "dimension")
        dimension = static_cast<int>(p.parse_integer(value));
      else if (key == "coordinates") {
        std::vector<std::string> names;
        std::size_t start = 0;
        while (start <= value.size()) {
          auto comma = value.find(',', start);
          std::string name = trim(comma == std::string::npos ? value.substr(start)
                                                             : value.substr(start, comma - start));
          if (name.empty()) p.fail("empty coordinate name");
          names.push_back(std::move(name));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        coordinates = std::move(names);
      } else
        p.fail("unknown top-level key '" + key + "'");
    } else if (section == "metric") {
      if (key == "kind")
        metric_kind = value;
      else if (key == "potential")
        potential = p.parse_expr(value);
      else if (p.indexed_key(key, "g", 2, i, j)) {
        auto slot = std::minmax(i, j);
        if (!g_entries.emplace(std::make_pair(slot.first, slot.second), p.parse_expr(value))
                 .second)
          p.fail("duplicate metric entry g[" + std::to_string(slot.first) + "][" +
                 std::to_string(slot.second) + "]");
      } else
        p.fail("unknown key '" + key + "' in [metric]");
    } else if (section == "structure") {
      if (key == "kind")
        structure_kind = value;
      else if (p.indexed_key(key, "F", 2, i, j)) {
        if (!f_entries.emplace(std::make_pair(i, j), p.parse_expr(value)).second)
          p.fail("duplicate structure entry");
      } else
        p.fail("unknown key '" + key + "' in [structure]");
    } else if (section == "vector_field") {
      if (p.indexed_key(key, "V", 1, i, j)) {
        if (!v_entries.emplace(i, p.parse_expr(value)).second)
          p.fail("duplicate vector field entry");
      } else
        p.fail("unknown key '" + key + "' in [vector_field]");
    } else if (section == "soliton") {
      if (key == "lambda")
        lambda = p.parse_constant(value);
      else if (key == "p")
        pval = p.parse_constant(value);
      else
        p.fail("unknown key '" + key + "' in [soliton]");
    } else if (section == "tensor_params") {
      if (key == "alpha")
        alpha = p.parse_constant(value);
      else if (key == "beta")
        beta = p.parse_constant(value);
      else if (key == "a")
        aval = p.parse_constant(value);
      else if (key == "b")
        bval = p.parse_constant(value);
      else
        p.fail("unknown key '" + key + "' in [tensor_params]");
    } else if (section == "sampling") {
      if (key == "kind")
        sampling_kind = value;
      else if (key == "count")
        count = static_cast<int>(p.parse_integer(value));
      else if (key == "seed")
        seed = p.parse_seed(value);
      else if (key == "box")
        box_all = p.parse_range(value);
      else if (p.indexed_key(key, "box", 1, i, j))
        box_per[i] = p.parse_range(value);
      else if (key == "points")
        plan_points = parse_point_list(p, value);
      else
        p.fail("unknown key '" + key + "' in [sampling]");
    }
  }

  p.line_no = 0;  // validation errors are whole-file

  if (dimension < 0) throw SpecError("missing required key 'dimension'");
  if (dimension < 2 || dimension % 2 != 0) throw SpecError("dimension must be even and >= 2");
  const int n = dimension;
  const int m = n / 2;

  std::vector<std::string> coords = coordinates ? *coordinates : default_coordinates(n);
  if (static_cast<int>(coords.size()) != n)
    throw SpecError("expected " + std::to_string(n) + " coordinates, got " +
                    std::to_string(coords.size()));
  for (const auto& c : coords) {
    if (!valid_identifier(c)) throw SpecError("invalid coordinate name '" + c + "'");
    if (c == "pi" || c == "e")
      throw SpecError("coordinate name '" + c + "' is reserved");
  }
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      if (coords[i] == coords[j]) throw SpecError("duplicate coordinate name '" + coords[i] + "'");

  auto check_vars = [&](const Expr& e, const std::string& what) {
    for (const auto& var : free_variables(e))
      if (std::find(coords.begin(), coords.end(), var) == coords.end())
        throw SpecError(what + " references unknown coordinate '" + var + "'");
  };

  FieldBundle bundle;
  bundle.n = n;
  bundle.coordinates = coords;

  if (metric_kind.empty()) throw SpecError("missing [metric] kind");
  if (metric_kind == "flat") {
    if (m < 2) throw SpecError("flat metric kind requires dimension >= 4 (n = 2m, m >= 2)");
    if (potential || !g_entries.empty())
      throw SpecError("flat metric kind takes no potential or explicit entries");
    FieldBundle flat = builtin_flat(m);
    bundle.metric_kind = FieldBundle::MetricKind::Explicit;
    bundle.g = std::move(flat.g);
  } else if (metric_kind == "potential") {
    if (m < 2) throw SpecError("potential metric kind requires dimension >= 4 (n = 2m, m >= 2)");
    if (!potential) throw SpecError("potential metric kind requires key 'potential'");
    if (!g_entries.empty())
      throw SpecError("potential metric kind takes no explicit entries");
    check_vars(*potential, "potential");
    bundle.metric_kind = FieldBundle::MetricKind::Potential;
    bundle.potential = potential;
  } else if (metric_kind == "explicit") {
    if (potential) throw SpecError("explicit metric kind takes no potential");
    const ExprPtr zero = make_number(0.0);
    bundle.metric_kind = FieldBundle::MetricKind::Explicit;
    bundle.g.assign(static_cast<std::size_t>(n) * n, zero);
    for (const auto& [slot, expr] : g_entries) {
      if (slot.second >= n)
        throw SpecError("metric index out of range for dimension " + std::to_string(n));
      check_vars(*expr, "metric entry");
      bundle.g[static_cast<std::size_t>(slot.first) * n + slot.second] = expr;
      bundle.g[static_cast<std::size_t>(slot.second) * n + slot.first] = expr;
    }
  } else {
    throw SpecError("unknown metric kind '" + metric_kind + "'");
  }

  // Structure: flat/potential metrics carry the standard F by default;
  // explicit metrics have none unless a [structure] section appears.
  bool want_structure = structure_section || metric_kind == "flat" || metric_kind == "potential";
  if (structure_section && structure_kind.empty()) structure_kind = "standard";
  if (!structure_section) structure_kind = "standard";
  if (want_structure) {
    if (m < 2)
      throw SpecError("para-Kahler structure requires dimension >= 4 (n = 2m, m >= 2)");
    if (structure_kind == "standard") {
      if (!f_entries.empty())
        throw SpecError("standard structure kind takes no explicit entries");
      bundle.F = standard_structure(n);
    } else if (structure_kind == "explicit") {
      const ExprPtr zero = make_number(0.0);
      bundle.F.assign(static_cast<std::size_t>(n) * n, zero);
      for (const auto& [slot, expr] : f_entries) {
        if (slot.first >= n || slot.second >= n)
          throw SpecError("structure index out of range for dimension " + std::to_string(n));
        check_vars(*expr, "structure entry");
        bundle.F[static_cast<std::size_t>(slot.first) * n + slot.second] = expr;
      }
    } else {
      throw SpecError("unknown structure kind '" + structure_kind + "'");
    }
  }

  if (vector_section) {
    const ExprPtr zero = make_number(0.0);
    bundle.V.assign(n, zero);
    for (const auto& [idx, expr] : v_entries) {
      if (idx >= n)
        throw SpecError("vector field index out of range for dimension " + std::to_string(n));
      check_vars(*expr, "vector field entry");
      bundle.V[idx] = expr;
    }
  }

  bundle.lambda = lambda.value_or(0.0);
  bundle.p = pval.value_or(0.0);
  bundle.alpha = alpha.value_or(1.0);
  bundle.beta = beta.value_or(n > 2 ? -1.0 / (n - 2) : 0.0);
  bundle.a = aval.value_or(1.0);
  bundle.b = bval.value_or(1.0);
  if (bundle.alpha == 0.0)
    throw SpecError("alpha must be nonzero (quasi-conformal tensor requires alpha != 0)");
  if (bundle.a == 0.0 || bundle.b == 0.0)
    throw SpecError("a and b must be nonzero (pseudo-projective tensor requires a, b != 0)");

  SamplePlan plan;
  if (sampling_kind.empty()) sampling_kind = plan_points ? "list" : "random";
  if (sampling_kind == "list") {
    if (!plan_points) throw SpecError("list sampling requires key 'points'");
    plan.kind = SamplePlan::Kind::List;
    plan.points = *plan_points;
    for (const Point& pt : plan.points)
      if (static_cast<int>(pt.size()) != n)
        throw SpecError("sample point length mismatch: expected " + std::to_string(n) +
                        " coordinates");
  } else if (sampling_kind == "random") {
    plan.kind = SamplePlan::Kind::RandomBox;
    plan.count = count.value_or(20);
    if (plan.count < 1) throw SpecError("sample count must be at least 1");
    plan.seed = seed.value_or(42);
    std::pair<double, double> fallback = box_all.value_or(std::make_pair(-0.3, 0.3));
    plan.box.assign(n, fallback);
    for (const auto& [idx, range] : box_per) {
      if (idx >= n) throw SpecError("box index out of range for dimension " + std::to_string(n));
      plan.box[idx] = range;
    }
  } else {
    throw SpecError("unknown sampling kind '" + sampling_kind + "'");
  }

  return {std::move(bundle), std::move(plan)};
}

}  // namespace pk
