#pragma once

#include <iosfwd>

namespace rrie {

/// Small-scale invariant suites (rotation equivariance, Gaussian reduction,
/// MSE expansion, Hilbert identities, I-MMSE, determinism). Prints one line
/// per check; returns true when all pass.
bool run_property_checks(std::ostream& out);

}  // namespace rrie
