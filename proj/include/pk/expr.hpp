// SPDX-License-Identifier: MIT
#pragma once

#include "pk/errors.hpp"
#include "pk/jet.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace pk {

// Parsed arithmetic expression over named coordinates. Trees are immutable
// after construction; concurrent evaluation with distinct environments needs
// no synchronization.
//
// Grammar (loosest to tightest): + - | * / | unary - | ^ (right-assoc).
// Function calls fn(expr) with fn in {sin, cos, tan, exp, log, sinh, cosh,
// tanh, sqrt}; named constants pi and e fold to numeric literals at parse
// time and are therefore unbindable.

enum class ExprKind { Number, Variable, Negate, Binary, Call };

enum class FnId { Sin, Cos, Tan, Exp, Log, Sinh, Cosh, Tanh, Sqrt };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Number;
  SourceSpan span;
  double number = 0.0;  // Number
  std::string name;     // Variable; Call keeps the function spelling
  char op = 0;          // Binary: one of + - * / ^
  FnId fn = FnId::Sin;  // Call
  ExprPtr lhs, rhs;     // Binary; Negate and Call use lhs only
};

class ParseError final : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos, std::string what_expected)
      : std::runtime_error(msg), position(pos), expected(std::move(what_expected)) {}
  std::size_t position;
  std::string expected;
};

ExprPtr parse(std::string_view text);

std::set<std::string> free_variables(const Expr& e);

// Minimal-paren rendering; re-parsing yields a structurally identical tree.
std::string to_string(const Expr& e);

// Equality up to source spans.
bool structurally_equal(const Expr& a, const Expr& b);

// Programmatic construction (used by builtin chart families and tests).
ExprPtr make_number(double v);
ExprPtr make_variable(std::string name);
ExprPtr make_negate(ExprPtr a);
ExprPtr make_binary(char op, ExprPtr a, ExprPtr b);
ExprPtr make_call(const std::string& fn, ExprPtr a);

template <class T>
using EvalEnv = std::map<std::string, T>;

template <class T>
T evaluate(const Expr& e, const EvalEnv<T>& env);

namespace detail {

inline bool constant_integer_exponent(const Expr& e, long long& k) {
  if (!free_variables(e).empty()) return false;
  double val;
  try {
    val = evaluate<double>(e, {});
  } catch (const EvalError&) {
    return false;
  }
  if (!std::isfinite(val) || std::nearbyint(val) != val) return false;
  if (std::abs(val) > 2147483647.0) return false;
  k = static_cast<long long>(val);
  return true;
}

template <class T>
struct Evaluator {
  const EvalEnv<T>& env;
  const T* proto;  // shape prototype for constants; null iff env is empty

  T check(T value, const SourceSpan& span) const {
    if (!all_finite(value)) throw EvalError("non-finite value in evaluation", span);
    return value;
  }

  T constant(double c, const SourceSpan& span) const {
    if (proto) return constant_like(c, *proto);
    if constexpr (std::is_same_v<T, double>)
      return c;
    else
      throw EvalError("cannot shape a constant: no coordinate bound in environment", span);
  }

  T eval(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Number:
        return constant(e.number, e.span);
      case ExprKind::Variable: {
        auto it = env.find(e.name);
        if (it == env.end())
          throw EvalError("unbound variable '" + e.name + "'", e.span);
        return it->second;
      }
      case ExprKind::Negate:
        return check(-eval(*e.lhs), e.span);
      case ExprKind::Binary:
        return eval_binary(e);
      case ExprKind::Call:
        return eval_call(e);
    }
    throw EvalError("corrupt expression node", e.span);
  }

  T eval_binary(const Expr& e) const {
    if (e.op == '^') {
      // Integer-valued constant exponents use repeated multiplication, which
      // stays valid for negative bases; everything else goes through
      // exp(b*log a) and needs a positive base.
      long long k;
      if (constant_integer_exponent(*e.rhs, k)) {
        T base = eval(*e.lhs);
        if (k < 0 && primal(base) == 0.0)
          throw EvalError("zero raised to a negative power", e.span);
        return check(pow_integer(base, k), e.span);
      }
      T base = eval(*e.lhs);
      if (!(primal(base) > 0.0))
        throw EvalError("power with non-integer exponent requires a positive base", e.span);
      T expo = eval(*e.rhs);
      using std::exp;
      using std::log;
      return check(exp(expo * log(base)), e.span);
    }
    T a = eval(*e.lhs);
    T b = eval(*e.rhs);
    switch (e.op) {
      case '+':
        return check(a + b, e.span);
      case '-':
        return check(a - b, e.span);
      case '*':
        return check(a * b, e.span);
      case '/':
        if (primal(b) == 0.0) throw EvalError("division by zero", e.span);
        return check(a / b, e.span);
    }
    throw EvalError("corrupt binary operator", e.span);
  }

  T eval_call(const Expr& e) const {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tan;
    using std::tanh;
    T a = eval(*e.lhs);
    const double va = primal(a);
    switch (e.fn) {
      case FnId::Sin:
        return check(sin(a), e.span);
      case FnId::Cos:
        return check(cos(a), e.span);
      case FnId::Tan:
        if (std::abs(std::cos(va)) < 1e-12)
          throw EvalError("tan domain error: cos(argument) vanishes", e.span);
        return check(tan(a), e.span);
      case FnId::Exp:
        return check(exp(a), e.span);
      case FnId::Log:
        if (!(va > 0.0))
          throw EvalError("log domain error: argument must be positive", e.span);
        return check(log(a), e.span);
      case FnId::Sinh:
        return check(sinh(a), e.span);
      case FnId::Cosh:
        return check(cosh(a), e.span);
      case FnId::Tanh:
        return check(tanh(a), e.span);
      case FnId::Sqrt:
        if (!(va > 0.0))
          throw EvalError("sqrt domain error: argument must be positive", e.span);
        return check(sqrt(a), e.span);
    }
    throw EvalError("corrupt function id", e.span);
  }
};

}  // namespace detail

template <class T>
T evaluate(const Expr& e, const EvalEnv<T>& env) {
  const T* proto = env.empty() ? nullptr : &env.begin()->second;
  detail::Evaluator<T> ev{env, proto};
  return ev.eval(e);
}

}  // namespace pk
