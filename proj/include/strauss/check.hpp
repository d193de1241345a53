#pragma once

#include <iosfwd>

namespace strauss {

/// Self-check: closed-form identities against the generic step-graphon
/// functionals, derivative formulas against finite differences, and the grid
/// oracle against the exact sums. Prints one ok/FAIL line per check to out;
/// returns true iff everything passed.
///
/// n_grid sizes the oracle cross-validation, draws the random identity
/// sample (fixed RNG seed; deterministic).
bool run_check(int n_grid, int draws, std::ostream& out);

} // namespace strauss
