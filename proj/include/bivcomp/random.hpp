#pragma once

#include <cstdint>
#include <random>

namespace bivcomp {

/// Random state used by every sampler. Passed explicitly; never shared implicitly.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace bivcomp
