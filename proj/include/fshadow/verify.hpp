#pragma once

// Dense cross-checks of the structured implementation, run by the `verify` subcommand.

#include <string>
#include <vector>

namespace fshadow {

enum class VerifyLevel { fast, full };

/// "fast" or "full".
VerifyLevel parse_verify_level(const std::string& s);

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  /// Test mode: expect lambda(m, k+1) instead of lambda(m, k) so the eigenvalue check fails.
  bool inject_lambda_fault = false;
};

struct CheckResult {
  std::string name;
  bool passed;
  double max_error;
  std::string detail;
};

/// Checks, by name: channel-eigenvalue, matching-channel, second-moment, fidelity-estimator,
/// xtype-estimator, inverse-projector-diagonal. Fast runs at m <= 2; full at m <= 3, with the
/// diagonal check at m <= 4.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace fshadow
