#pragma once

#include <string>
#include <vector>

namespace kgfield {

enum class Comparison { at_most, at_least, within };

struct CheckResult {
  std::string suite;
  std::string check;
  double measured;
  /// Bound for at_most / at_least; half-width for within.
  double tolerance;
  /// Target value for within.
  double target;
  Comparison comparison;
  bool passed;
  std::string message;
};

struct VerifyOptions {
  /// Empty runs every suite.
  std::string suite;
  /// "suite.check" whose reference constant is deliberately corrupted.
  std::string fault;
  unsigned long long seed = 1;
};

struct VerifyReport {
  std::vector<CheckResult> results;
  bool all_passed() const;
  /// JSON array of {suite, check, measured, tolerance, target, comparison, passed}.
  std::string to_json() const;
};

std::vector<std::string> verify_suites();
/// All "suite.check" names in registration order.
std::vector<std::string> verify_checks();

/// Throws PreconditionError for an unknown suite or fault name.
VerifyReport run_verify(const VerifyOptions& options);

} // namespace kgfield
