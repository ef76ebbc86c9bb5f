// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pk {

// Byte range [begin, end) into the source text an expression was parsed from.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Raised while evaluating expressions or chart fields: domain violations,
// non-finite intermediates, unbound variables, degenerate metrics.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& msg, SourceSpan where = {})
      : std::runtime_error(msg), span(where) {}
  SourceSpan span;
};

// Raised by load_spec and plan validation on malformed chart descriptions.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pk
