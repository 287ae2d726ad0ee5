#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arfinsler/geometry.hpp"
#include "arfinsler/spec_file.hpp"

namespace arf::app {

/// Command-line overrides; unset fields fall back to the spec file, then to defaults.
struct RunOptions {
  std::optional<WeylVariant> weyl;
  std::optional<int> points;
  std::optional<unsigned> precision;
  std::uint64_t seed = 1;
  /// Include per-stage wall-clock timing (analysis reports only).
  bool timing = true;
};

/// Exit codes of the command-line tool.
enum ExitCode { kOk = 0, kClaimViolation = 1, kSpecError = 2, kInternal = 3 };

struct VerifyOutcome {
  nlohmann::json report;
  int exit_code = kOk;
  /// Ids of failing claims (and "oracle" when the numeric check fails).
  std::vector<std::string> failures;
};

/// Full report: metric echo, validity sampling, AR data, rationality table,
/// every registered claim, oracle summary and (optionally) timing.
nlohmann::json run_analysis(const MetricSpec& spec, const RunOptions& opt);

/// The same report without timing, plus the exit code derived from the claims.
VerifyOutcome run_verify(const MetricSpec& spec, const RunOptions& opt);

/// One object printed entry by entry.
std::string run_tensor(const MetricSpec& spec, const std::string& object, const RunOptions& opt);

/// Numeric cross-check alone.
nlohmann::json run_oracle_report(const MetricSpec& spec, const RunOptions& opt);

/// Human-readable rendering of a report produced above.
std::string render_text(const nlohmann::json& report);

/// Reads and parses a metric file. Throws std::runtime_error when unreadable.
MetricSpec load_spec(const std::string& path);

}  // namespace arf::app
