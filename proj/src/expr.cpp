// SPDX-License-Identifier: MIT
#include "pk/expr.hpp"

#include <charconv>
#include <cstdlib>
#include <numbers>
#include <utility>

namespace pk {

namespace {

const std::map<std::string, FnId, std::less<>> kFunctions = {
    {"sin", FnId::Sin},   {"cos", FnId::Cos},   {"tan", FnId::Tan},
    {"exp", FnId::Exp},   {"log", FnId::Log},   {"sinh", FnId::Sinh},
    {"cosh", FnId::Cosh}, {"tanh", FnId::Tanh}, {"sqrt", FnId::Sqrt},
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n'))
      ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& expected) {
    skip_ws();
    throw ParseError("parse error at position " + std::to_string(pos) + ": expected " + expected,
                     pos, expected);
  }

  // expression := term (('+' | '-') term)*
  ExprPtr parse_expression() {
    ExprPtr node = parse_term();
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return node;
      ++pos;
      ExprPtr rhs = parse_term();
      node = make_binary(c, std::move(node), std::move(rhs));
    }
  }

  // term := unary (('*' | '/') unary)*
  ExprPtr parse_term() {
    ExprPtr node = parse_unary();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return node;
      ++pos;
      ExprPtr rhs = parse_unary();
      node = make_binary(c, std::move(node), std::move(rhs));
    }
  }

  // unary := '-' unary | power
  ExprPtr parse_unary() {
    skip_ws();
    std::size_t start = pos;
    if (consume('-')) {
      ExprPtr inner = parse_unary();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Negate;
      node->lhs = std::move(inner);
      node->span = {start, node->lhs->span.end};
      return node;
    }
    return parse_power();
  }

  // power := atom ('^' unary)?   (right-associative, binds above unary '-')
  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (peek() == '^') {
      ++pos;
      ExprPtr expo = parse_unary();
      return make_binary('^', std::move(base), std::move(expo));
    }
    return base;
  }

  ExprPtr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expression();
      if (!consume(')')) fail("')'");
      return inner;
    }
    if (is_digit(c)) return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    fail("expression");
  }

  ExprPtr parse_number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && is_digit(text[pos])) ++pos;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && is_digit(text[pos])) ++pos;
    }
    // exponent part only if followed by digits
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      if (pos < text.size() && is_digit(text[pos])) {
        while (pos < text.size() && is_digit(text[pos])) ++pos;
      } else {
        pos = mark;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text.data() + start, text.data() + pos, value);
    if (res.ec == std::errc::result_out_of_range)
      throw ParseError("parse error at position " + std::to_string(start) +
                           ": numeric literal out of range",
                       start, "representable number");
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::Number;
    node->number = value;
    node->span = {start, pos};
    return node;
  }

  ExprPtr parse_identifier() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    std::string name(text.substr(start, pos - start));
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      auto it = kFunctions.find(name);
      if (it == kFunctions.end())
        throw ParseError("parse error at position " + std::to_string(start) +
                             ": unknown function '" + name + "'",
                         start, "function name");
      ++pos;
      ExprPtr arg = parse_expression();
      if (!consume(')')) fail("')'");
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Call;
      node->fn = it->second;
      node->name = name;
      node->lhs = std::move(arg);
      node->span = {start, pos};
      return node;
    }
    auto node = std::make_shared<Expr>();
    node->span = {start, pos};
    if (name == "pi") {
      node->kind = ExprKind::Number;
      node->number = std::numbers::pi;
    } else if (name == "e") {
      node->kind = ExprKind::Number;
      node->number = std::numbers::e;
    } else {
      node->kind = ExprKind::Variable;
      node->name = std::move(name);
    }
    return node;
  }
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Number:
    case ExprKind::Variable:
    case ExprKind::Call:
      return 5;
    case ExprKind::Negate:
      return 3;
    case ExprKind::Binary:
      switch (e.op) {
        case '+':
        case '-':
          return 1;
        case '*':
        case '/':
          return 2;
        case '^':
          return 4;
      }
  }
  return 0;
}

void render_number(double v, std::string& out) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void render(const Expr& e, std::string& out) {
  auto child = [&out](const Expr& c, int min_prec) {
    if (precedence(c) < min_prec) {
      out.push_back('(');
      render(c, out);
      out.push_back(')');
    } else {
      render(c, out);
    }
  };
  switch (e.kind) {
    case ExprKind::Number:
      render_number(e.number, out);
      return;
    case ExprKind::Variable:
      out += e.name;
      return;
    case ExprKind::Negate:
      out.push_back('-');
      child(*e.lhs, 3);
      return;
    case ExprKind::Call:
      out += e.name;
      out.push_back('(');
      render(*e.lhs, out);
      out.push_back(')');
      return;
    case ExprKind::Binary:
      if (e.op == '^') {
        child(*e.lhs, 5);  // grammar: base is an atom
        out.push_back('^');
        child(*e.rhs, 3);  // exponent is a unary
      } else {
        int p = precedence(e);
        child(*e.lhs, p);
        out.push_back(e.op);
        child(*e.rhs, p + 1);  // left-assoc
      }
      return;
  }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Number:
      return;
    case ExprKind::Variable:
      out.insert(e.name);
      return;
    case ExprKind::Negate:
    case ExprKind::Call:
      collect_vars(*e.lhs, out);
      return;
    case ExprKind::Binary:
      collect_vars(*e.lhs, out);
      collect_vars(*e.rhs, out);
      return;
  }
}

}  // namespace

ExprPtr parse(std::string_view text) {
  Parser p{text};
  ExprPtr root = p.parse_expression();
  p.skip_ws();
  if (p.pos < text.size()) p.fail("end of input");
  return root;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  render(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number:
      return a.number == b.number;
    case ExprKind::Variable:
      return a.name == b.name;
    case ExprKind::Negate:
      return structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Call:
      return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Binary:
      return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

ExprPtr make_number(double v) {
  auto node = std::make_shared<Expr>();
  node->kind = ExprKind::Number;
  node->number = v;
  return node;
}

ExprPtr make_variable(std::string name) {
  auto node = std::make_shared<Expr>();
  node->kind = ExprKind::Variable;
  node->name = std::move(name);
  return node;
}

ExprPtr make_negate(ExprPtr a) {
  auto node = std::make_shared<Expr>();
  node->kind = ExprKind::Negate;
  node->lhs = std::move(a);
  return node;
}

ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
  auto node = std::make_shared<Expr>();
  node->kind = ExprKind::Binary;
  node->op = op;
  node->lhs = std::move(a);
  node->rhs = std::move(b);
  node->span = {node->lhs->span.begin, node->rhs->span.end};
  return node;
}

ExprPtr make_call(const std::string& fn, ExprPtr a) {
  auto it = kFunctions.find(fn);
  if (it == kFunctions.end()) throw EvalError("unknown function '" + fn + "'");
  auto node = std::make_shared<Expr>();
  node->kind = ExprKind::Call;
  node->fn = it->second;
  node->name = fn;
  node->lhs = std::move(a);
  return node;
}

}  // namespace pk
