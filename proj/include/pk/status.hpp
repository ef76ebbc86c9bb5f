// SPDX-License-Identifier: MIT
#pragma once

#include <string>

namespace pk {

enum class CheckStatus { Pass, Fail, NotApplicable, DegenerateParams, Error };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::NotApplicable:
      return "NOT-APPLICABLE";
    case CheckStatus::DegenerateParams:
      return "DEGENERATE-PARAMS";
    case CheckStatus::Error:
      return "ERROR";
  }
  return "ERROR";
}

}  // namespace pk
