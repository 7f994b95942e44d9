#pragma once

#include <iosfwd>

namespace fsc {

// Structural invariants, exhaustive weight-1 decoding and the sweep-time
// bounds on small lattices. Prints one line per check; returns the number of
// failed checks.
int run_selftest(std::ostream& out);

}  // namespace fsc
