#pragma once

#include <ostream>
#include <string>

#include "multider/exact_poly.hpp"

namespace multider::cli {

// Process exit statuses.
enum ExitCode : int {
  kOk = 0,           // success, OEIS match, or OEIS offline
  kUsage = 2,        // bad arguments, unreadable or unparsable input files
  kComputation = 3,  // guessing/extension failures, no recurrence found
  kMismatch = 4,     // OEIS terms differ from local terms
  kRemote = 5,       // OEIS sequence unknown or remote payload malformed
};

/// Runs one command line; everything is written to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// q rounded half-up to `significant` significant digits, plain decimal
/// notation, trailing zeros dropped. Exact long division, no floating point.
std::string decimal_approximation(const Rational& q, int significant = 15);

}  // namespace multider::cli
