// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pk/expr.hpp"
#include "pk/splitmix64.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace pk;

TEST_CASE("free variables of a parsed expression") {
  const ExprPtr e = parse("x1*y1 + x2*y2");
  CHECK(free_variables(*e) == std::set<std::string>{"x1", "x2", "y1", "y2"});
  CHECK(free_variables(*parse("pi*x")) == std::set<std::string>{"x"});
  CHECK(free_variables(*parse("3.5")).empty());
  CHECK(free_variables(*parse("x + x*y")) == std::set<std::string>{"x", "y"});
}

TEST_CASE("power is right-associative and binds above unary minus") {
  CHECK(evaluate<double>(*parse("2^3^2"), {}) == 512.0);
  CHECK(evaluate<double>(*parse("-2^2"), {}) == -4.0);
  CHECK(evaluate<double>(*parse("2^-1"), {}) == 0.5);
  CHECK(evaluate<double>(*parse("(-2)^3"), {}) == -8.0);
  CHECK(evaluate<double>(*parse("2*3^2"), {}) == 18.0);
  CHECK(evaluate<double>(*parse("2-3-4"), {}) == -5.0);
  CHECK(evaluate<double>(*parse("2/4/2"), {}) == 0.25);
}

TEST_CASE("named constants fold at parse time") {
  CHECK(evaluate<double>(*parse("pi"), {}) == std::numbers::pi);
  CHECK(evaluate<double>(*parse("2*e"), {}) == 2.0 * std::numbers::e);
  // "pi" is not a variable, so an environment binding cannot shadow it
  EvalEnv<double> env{{"pi", 99.0}};
  CHECK(evaluate<double>(*parse("pi"), env) == std::numbers::pi);
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse("sin(");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position == 4);
    CHECK(err.expected == "expression");
  }
  try {
    parse("(x");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.expected == "')'");
  }
  try {
    parse("x y");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position == 2);
    CHECK(err.expected == "end of input");
  }
  try {
    parse("foo(1)");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position == 0);
    CHECK(std::string(err.what()).find("unknown function") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("1e999"), ParseError);
}

TEST_CASE("evaluation matches closed forms") {
  EvalEnv<double> env{{"x", 0.5}, {"y", 1.0}};
  CHECK(evaluate<double>(*parse("1 + 4*x*y"), env) == 3.0);
}

TEST_CASE("jet evaluation produces exact derivatives") {
  const ExprPtr e = parse("x*y + (x*y)^2");
  EvalEnv<Jet2> env{{"x", jet_variable(1.0, 0, 2)}, {"y", jet_variable(2.0, 1, 2)}};
  const Jet2 r = evaluate(*e, env);
  CHECK(r.v == 6.0);
  CHECK(r.grad[0] == doctest::Approx(10.0).epsilon(1e-15));  // y + 2xy*y
}

TEST_CASE("domain errors cite the span of the offending call") {
  const ExprPtr e = parse("log(x)");
  EvalEnv<double> env{{"x", 0.0}};
  try {
    evaluate<double>(*e, env);
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(err.span.begin == 0);
    CHECK(err.span.end == 6);
  }

  EvalEnv<double> env2{{"x", 1.0}};
  try {
    evaluate<double>(*parse("1 + x/0"), env2);
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("division by zero") != std::string::npos);
  }
}

TEST_CASE("unbound variables are named") {
  const ExprPtr e = parse("x + z");
  EvalEnv<double> env{{"x", 1.0}};
  try {
    evaluate<double>(*e, env);
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("'z'") != std::string::npos);
  }
}

TEST_CASE("pretty-print round-trips structurally") {
  const std::vector<std::string> vars = {"x", "y", "z", "w"};
  SplitMix64 rng(7777);
  for (int trial = 0; trial < 100; ++trial) {
    const ExprPtr e = pkt::random_expression(rng, vars, 5);
    const std::string printed = to_string(*e);
    const ExprPtr reparsed = parse(printed);
    CHECK(structurally_equal(*e, *reparsed));
  }
  // a few fixed shapes that stress precedence
  for (const char* text :
       {"x^y^z", "(x^y)^z", "-x^2", "x^-2", "-(x+y)", "x-(y-z)", "x/(y*z)", "sin(x)*cos(y)",
        "2^3^2", "x*y + (x*y)^2"}) {
    const ExprPtr e = parse(text);
    CHECK(structurally_equal(*e, *parse(to_string(*e))));
  }
}

TEST_CASE("double evaluation equals the jet value component bitwise") {
  const std::vector<std::pair<std::string, std::vector<double>>> fixtures = {
      {"x*y + (x*y)^2", {1.0, 2.0}},
      {"x/y", {0.3, -1.7}},
      {"x^3 - y^2 + x*y", {-1.2, 0.8}},
      {"sin(x)*cos(y)/(1 + x*y)", {0.4, 0.9}},
      {"exp(x) + log(y)", {0.5, 2.5}},
      {"sqrt(x) + tanh(y)", {1.44, -0.3}},
      {"2^3^2 * x", {0.1, 0.0}},
      {"x^0.5 + y", {4.0, 1.0}},
      {"tan(x) + sinh(y) + cosh(x)", {0.3, 0.6}},
      {"(x + y)/(x - y)", {2.0, 0.5}},
  };
  for (const auto& [text, pt] : fixtures) {
    const ExprPtr e = parse(text);
    EvalEnv<double> denv{{"x", pt[0]}, {"y", pt[1]}};
    EvalEnv<Jet2> jenv{{"x", jet_variable(pt[0], 0, 2)}, {"y", jet_variable(pt[1], 1, 2)}};
    const double dv = evaluate<double>(*e, denv);
    const Jet2 jv = evaluate(*e, jenv);
    CHECK(dv == jv.v);  // bit-identical
  }
}

TEST_CASE("non-finite intermediates abort evaluation") {
  EvalEnv<double> env{{"x", 800.0}};
  CHECK_THROWS_AS(evaluate<double>(*parse("exp(x)*exp(x)"), env), EvalError);
  EvalEnv<Jet2> jenv{{"x", jet_variable(800.0, 0, 1)}};
  CHECK_THROWS_AS(evaluate(*parse("exp(x)*exp(x)"), jenv), EvalError);
}
