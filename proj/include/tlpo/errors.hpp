#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>
#include <string>

namespace tlpo {

// Error taxonomy. Each type maps onto one status code at the C boundary
// (see include/tlpo.h) and onto one CLI exit code.

/// Invalid configuration or argument values (N < 2, rate outside [0,1], ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Filesystem-level failures: missing paths, unreadable/unwritable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally broken or incompatible inputs: malformed corpus lines,
/// checkpoint magic/version mismatches, vocab hash disagreements.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values where finite ones are required, or the training
/// incident limit being exceeded.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised instead of returning NaN when a ratio metric has no denominator.
struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tlpo
