#pragma once

#include <cstdint>
#include <vector>

#include "prw/dual.hpp"

namespace prw {

// Reference chains the projection identities are checked against. These are
// deliberately independent of the walker/dual machinery: plain site-level
// dynamic programming and sampling.

/// Exact law of the standard Manhattan-lattice walk after `steps` steps
/// (probability 1/2 for each outgoing oriented edge).
SiteDistribution manhattan_walk_distribution(const Site& start, int steps);

/// Exact law of the simple symmetric walk on Z^2 after `steps` steps.
SiteDistribution simple_walk_distribution(const Site& start, int steps);

/// Monte Carlo fraction of standard Manhattan walks from `start` that
/// revisit `start` within `horizon` steps.
double manhattan_return_fraction(const Site& start, std::uint64_t horizon,
                                 std::uint64_t ensemble, std::uint64_t seed);

} // namespace prw
