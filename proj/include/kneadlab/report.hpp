#pragma once

#include <string>
#include <vector>

#include "kneadlab/map_spec.hpp"

namespace kneadlab {

struct IdentityResult {
  std::string id;
  std::string anchor;      // the classical identity the check verifies
  double residual = 0;
  double tolerance = 0;
  std::string status;      // pass | fail | na
  std::string note;
};

struct VerifySummary {
  std::vector<IdentityResult> identities;
  bool all_applicable_pass = true;
};

struct RunFlags {
  int order_override = 0;        // 0: use document option
  double radius_override = 0;    // 0: derive
  std::string policy_override;   // empty: document/default
  std::string out_dir = ".";
  std::string format = "both";   // csv | json | both
};

struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::string> files_written;
  std::string report_text;  // the JSON report (also written to disk)
};

/// Dispatches one CLI command over a parsed document.  Exit codes:
/// 0 success, 1 identity failure, 2 input error, 3 precondition unmet.
CommandOutcome run_command(const MapSpecDocument& doc, const std::string& command,
                           const RunFlags& flags);

/// The identity-verification suite, callable directly (used by `verify`
/// and by the acceptance tests).
VerifySummary run_verify_suite(const MapSpecDocument& doc, int order);

/// Writes text to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& text);

std::string format_complex_csv(double re, double im);

}  // namespace kneadlab
