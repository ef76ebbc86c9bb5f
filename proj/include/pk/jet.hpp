// SPDX-License-Identifier: MIT
#pragma once

#include "pk/errors.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace pk {

// Second-order truncated Taylor value in n variables: value, gradient and
// symmetric Hessian, propagated exactly through arithmetic. The scalar type
// is a template parameter so jets can nest: Jet2T<Jet2> carries third and
// fourth derivatives, which the potential-metric construction consumes.
//
// The Hessian is stored as a packed lower triangle, so H[i][j] == H[j][i]
// holds exactly by construction.
template <class T>
struct Jet2T {
  T v{};
  std::vector<T> grad;  // size n
  std::vector<T> hess;  // packed lower triangle, size n(n+1)/2

  Jet2T() = default;

  int dim() const { return static_cast<int>(grad.size()); }

  static std::size_t pack(int i, int j) {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  T& h(int i, int j) { return hess[pack(i, j)]; }
  const T& h(int i, int j) const { return hess[pack(i, j)]; }
};

using Jet2 = Jet2T<double>;

// ---------------------------------------------------------------------------
// Shape helpers. Nested jets carry their dimension in the container sizes, so
// constants must be minted from a prototype of the right shape.
// ---------------------------------------------------------------------------

inline double zero_like(double) { return 0.0; }

template <class T>
Jet2T<T> zero_like(const Jet2T<T>& proto) {
  Jet2T<T> z;
  z.v = zero_like(proto.v);
  z.grad.assign(proto.grad.size(), zero_like(proto.v));
  z.hess.assign(proto.hess.size(), zero_like(proto.v));
  return z;
}

inline double constant_like(double c, double) { return c; }

template <class T>
Jet2T<T> constant_like(double c, const Jet2T<T>& proto) {
  Jet2T<T> z = zero_like(proto);
  z.v = constant_like(c, proto.v);
  return z;
}

inline double one_like(double) { return 1.0; }

template <class T>
Jet2T<T> one_like(const Jet2T<T>& proto) {
  return constant_like(1.0, proto);
}

inline double primal(double x) { return x; }

template <class T>
double primal(const Jet2T<T>& x) {
  return primal(x.v);
}

inline bool all_finite(double x) { return std::isfinite(x); }

template <class T>
bool all_finite(const Jet2T<T>& x) {
  if (!all_finite(x.v)) return false;
  for (const auto& c : x.grad)
    if (!all_finite(c)) return false;
  for (const auto& c : x.hess)
    if (!all_finite(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

inline Jet2 jet_constant(double value, int n) {
  Jet2 j;
  j.v = value;
  j.grad.assign(static_cast<std::size_t>(n), 0.0);
  j.hess.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  return j;
}

inline Jet2 jet_variable(double value, int index, int n) {
  if (index < 0 || index >= n)
    throw EvalError("jet seed index " + std::to_string(index) +
                    " out of range for dimension " + std::to_string(n));
  Jet2 j = jet_constant(value, n);
  j.grad[static_cast<std::size_t>(index)] = 1.0;
  return j;
}

// Outer-over-inner seeds for fourth-order differentiation of a scalar field.
inline Jet2T<Jet2> nested_constant(double value, int n) {
  Jet2T<Jet2> j;
  j.v = jet_constant(value, n);
  j.grad.assign(static_cast<std::size_t>(n), jet_constant(0.0, n));
  j.hess.assign(static_cast<std::size_t>(n) * (n + 1) / 2, jet_constant(0.0, n));
  return j;
}

inline Jet2T<Jet2> nested_variable(double value, int index, int n) {
  Jet2T<Jet2> j = nested_constant(value, n);
  j.v = jet_variable(value, index, n);
  j.grad[static_cast<std::size_t>(index)] = jet_constant(1.0, n);
  return j;
}

// ---------------------------------------------------------------------------
// Arithmetic. Values are combined with the same scalar operation the plain
// carrier would use, so the value component of a jet evaluation is
// bit-identical to the corresponding double evaluation.
// ---------------------------------------------------------------------------

template <class T>
Jet2T<T> operator-(const Jet2T<T>& a) {
  Jet2T<T> out = a;
  out.v = -a.v;
  for (auto& c : out.grad) c = -c;
  for (auto& c : out.hess) c = -c;
  return out;
}

template <class T>
Jet2T<T> operator+(const Jet2T<T>& a, const Jet2T<T>& b) {
  assert(a.dim() == b.dim());
  Jet2T<T> out = a;
  out.v = a.v + b.v;
  for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] = a.grad[i] + b.grad[i];
  for (std::size_t i = 0; i < out.hess.size(); ++i) out.hess[i] = a.hess[i] + b.hess[i];
  return out;
}

template <class T>
Jet2T<T> operator-(const Jet2T<T>& a, const Jet2T<T>& b) {
  assert(a.dim() == b.dim());
  Jet2T<T> out = a;
  out.v = a.v - b.v;
  for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] = a.grad[i] - b.grad[i];
  for (std::size_t i = 0; i < out.hess.size(); ++i) out.hess[i] = a.hess[i] - b.hess[i];
  return out;
}

// (ab)'' = a''b + a'b' + b'a' + ab''
template <class T>
Jet2T<T> operator*(const Jet2T<T>& a, const Jet2T<T>& b) {
  assert(a.dim() == b.dim());
  const int n = a.dim();
  Jet2T<T> out = zero_like(a);
  out.v = a.v * b.v;
  for (int i = 0; i < n; ++i) out.grad[i] = a.grad[i] * b.v + a.v * b.grad[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      out.h(i, j) = a.h(i, j) * b.v + a.grad[i] * b.grad[j] +
                    a.grad[j] * b.grad[i] + a.v * b.h(i, j);
  return out;
}

// Quotient rule solved from a = q*b; the value is a direct division.
template <class T>
Jet2T<T> operator/(const Jet2T<T>& a, const Jet2T<T>& b) {
  assert(a.dim() == b.dim());
  if (primal(b) == 0.0) throw EvalError("jet division by zero value");
  const int n = a.dim();
  Jet2T<T> out = zero_like(a);
  out.v = a.v / b.v;
  for (int i = 0; i < n; ++i) out.grad[i] = (a.grad[i] - out.v * b.grad[i]) / b.v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      out.h(i, j) = (a.h(i, j) - out.grad[i] * b.grad[j] - out.grad[j] * b.grad[i] -
                     out.v * b.h(i, j)) /
                    b.v;
  return out;
}

// double broadcasts

template <class T>
Jet2T<T> operator+(const Jet2T<T>& a, double c) {
  Jet2T<T> out = a;
  out.v = a.v + c;
  return out;
}

template <class T>
Jet2T<T> operator+(double c, const Jet2T<T>& a) {
  Jet2T<T> out = a;
  out.v = c + a.v;
  return out;
}

template <class T>
Jet2T<T> operator-(const Jet2T<T>& a, double c) {
  Jet2T<T> out = a;
  out.v = a.v - c;
  return out;
}

template <class T>
Jet2T<T> operator-(double c, const Jet2T<T>& a) {
  Jet2T<T> out = -a;
  out.v = c - a.v;
  return out;
}

template <class T>
Jet2T<T> operator*(const Jet2T<T>& a, double c) {
  Jet2T<T> out = a;
  out.v = a.v * c;
  for (auto& g : out.grad) g = g * c;
  for (auto& h : out.hess) h = h * c;
  return out;
}

template <class T>
Jet2T<T> operator*(double c, const Jet2T<T>& a) {
  return a * c;
}

template <class T>
Jet2T<T> operator/(const Jet2T<T>& a, double c) {
  if (c == 0.0) throw EvalError("jet division by zero value");
  Jet2T<T> out = a;
  out.v = a.v / c;
  for (auto& g : out.grad) g = g / c;
  for (auto& h : out.hess) h = h / c;
  return out;
}

template <class T>
Jet2T<T> operator/(double c, const Jet2T<T>& a) {
  if (primal(a) == 0.0) throw EvalError("jet division by zero value");
  const int n = a.dim();
  Jet2T<T> out = zero_like(a);
  out.v = c / a.v;
  for (int i = 0; i < n; ++i) out.grad[i] = (-(out.v * a.grad[i])) / a.v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      out.h(i, j) = (-(out.grad[i] * a.grad[j]) - out.grad[j] * a.grad[i] -
                     out.v * a.h(i, j)) /
                    a.v;
  return out;
}

// ---------------------------------------------------------------------------
// Elementary functions via the second-order chain rule:
//   (f∘a)'  = f'(a) ∇a
//   (f∘a)'' = f'(a) Ha + f''(a) ∇a ∇aᵀ
// ---------------------------------------------------------------------------

template <class T>
Jet2T<T> jet_chain(const Jet2T<T>& a, const T& f0, const T& f1, const T& f2) {
  const int n = a.dim();
  Jet2T<T> out = zero_like(a);
  out.v = f0;
  for (int i = 0; i < n; ++i) out.grad[i] = f1 * a.grad[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      out.h(i, j) = f1 * a.h(i, j) + f2 * (a.grad[i] * a.grad[j]);
  return out;
}

template <class T>
Jet2T<T> sin(const Jet2T<T>& a) {
  using std::cos;
  using std::sin;
  T s = sin(a.v);
  T c = cos(a.v);
  return jet_chain(a, s, c, -s);
}

template <class T>
Jet2T<T> cos(const Jet2T<T>& a) {
  using std::cos;
  using std::sin;
  T c = cos(a.v);
  T s = sin(a.v);
  return jet_chain(a, c, -s, -c);
}

template <class T>
Jet2T<T> tan(const Jet2T<T>& a) {
  using std::tan;
  if (std::abs(std::cos(primal(a))) < 1e-12)
    throw EvalError("tan domain error: cos(argument) vanishes");
  T t = tan(a.v);
  T sec2 = 1.0 + t * t;
  return jet_chain(a, t, sec2, 2.0 * (t * sec2));
}

template <class T>
Jet2T<T> exp(const Jet2T<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return jet_chain(a, e, e, e);
}

template <class T>
Jet2T<T> log(const Jet2T<T>& a) {
  using std::log;
  if (!(primal(a) > 0.0))
    throw EvalError("log domain error: argument must be positive");
  T inv = 1.0 / a.v;
  return jet_chain(a, log(a.v), inv, -(inv * inv));
}

template <class T>
Jet2T<T> sinh(const Jet2T<T>& a) {
  using std::cosh;
  using std::sinh;
  T s = sinh(a.v);
  T c = cosh(a.v);
  return jet_chain(a, s, c, s);
}

template <class T>
Jet2T<T> cosh(const Jet2T<T>& a) {
  using std::cosh;
  using std::sinh;
  T c = cosh(a.v);
  T s = sinh(a.v);
  return jet_chain(a, c, s, c);
}

template <class T>
Jet2T<T> tanh(const Jet2T<T>& a) {
  using std::tanh;
  T t = tanh(a.v);
  T sech2 = 1.0 - t * t;
  return jet_chain(a, t, sech2, -2.0 * (t * sech2));
}

template <class T>
Jet2T<T> sqrt(const Jet2T<T>& a) {
  using std::sqrt;
  if (!(primal(a) > 0.0))
    throw EvalError("sqrt domain error: argument must be positive");
  T s = sqrt(a.v);
  T half_inv = 0.5 / s;
  return jet_chain(a, s, half_inv, -0.5 * (half_inv / a.v));
}

// Integer power by binary exponentiation. Both the double and the jet
// carrier go through this one template, which keeps their value components
// bit-identical. Valid for negative bases.
template <class T>
T pow_integer(const T& base, long long k) {
  if (k == 0) return one_like(base);
  unsigned long long e =
      k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1 : static_cast<unsigned long long>(k);
  T result = one_like(base);
  T b = base;
  while (true) {
    if (e & 1ull) result = result * b;
    e >>= 1;
    if (!e) break;
    b = b * b;
  }
  return k < 0 ? one_like(base) / result : result;
}

// General power: integer exponents fall back to repeated multiplication
// (valid for negative bases), everything else needs a positive base.
template <class T>
Jet2T<T> pow(const Jet2T<T>& a, double e) {
  if (std::nearbyint(e) == e && std::abs(e) <= 2147483647.0)
    return pow_integer(a, static_cast<long long>(e));
  if (!(primal(a) > 0.0))
    throw EvalError("jet pow with non-integer exponent requires a positive base");
  return exp(log(a) * e);
}

template <class T>
Jet2T<T> pow(const Jet2T<T>& a, const Jet2T<T>& b) {
  if (!(primal(a) > 0.0))
    throw EvalError("jet pow with jet exponent requires a positive base");
  return exp(b * log(a));
}

}  // namespace pk
