// SPDX-License-Identifier: MIT
#pragma once

#include "pk/soliton.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pk {

struct PointDetail {
  int point_index = -1;  // -1 marks a check-level note
  double residual = 0.0;
  std::string note;
};

struct CheckReport {
  std::string check_name;
  CheckStatus status = CheckStatus::Error;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int points_checked = 0;
  Point worst_point;
  std::vector<PointDetail> details;
  std::map<std::string, double> fitted_constants;
};

struct RunOptions {
  enum class Format { Text, Json };
  double tolerance = 1e-7;
  std::optional<int> points;          // overrides a random plan's count
  std::optional<std::uint64_t> seed;  // overrides a random plan's seed
  Format format = Format::Text;
  std::vector<std::string> checks;  // empty selects every check
};

const std::vector<std::string>& all_check_names();

// Runs the selected checks over the sample plan. Evaluation problems are
// captured per check as status ERROR; the run itself never aborts.
std::vector<CheckReport> run_checks(const FieldBundle& bundle, const SamplePlan& plan,
                                    const RunOptions& options);

struct RenderContext {
  std::string version = "0.1.0";
  std::uint64_t spec_digest = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
};

// Text: one aligned row per check. Json: deterministic byte-for-byte output,
// reals with 17 significant digits.
std::string render_report(const std::vector<CheckReport>& reports, RunOptions::Format format,
                          const RenderContext& ctx);

std::uint64_t fnv1a64(std::string_view bytes);

// FNV-1a 64 of the spec text with CRLF canonicalized to LF.
std::uint64_t spec_digest(std::string_view text);

// 0 when no check FAILed or ERRORed, 1 otherwise.
int aggregate_exit_code(const std::vector<CheckReport>& reports);

}  // namespace pk
