#pragma once

#include "nsdfo/problems.hpp"

namespace nsdfo {

/// Element `index` of the Halton sequence in the given prime base, in (0,1).
double halton(long index, int base);

/// Deterministic, asymptotically dense sequence of unit vectors on the
/// sphere: Halton points mapped through the inverse Gaussian CDF and
/// normalized.
Vec dense_direction(long index, int n);

}  // namespace nsdfo
