#pragma once

#include <cstdint>
#include <random>

#include "weakkam/grid.hpp"

namespace weakkam {

/// 64-bit linear congruential generator, modulus 2^64, with Knuth's MMIX
/// constants. Fixed so that seeded initial data reproduces bit-for-bit.
using Lcg64 = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL>;

// Uniform in [0, 1) from the top 53 bits of one draw.
double uniform01(Lcg64& rng);

// Smooth random field: sum_{k=1..4} (a_k cos 2 pi k x + b_k sin 2 pi k x) / k
// with a_k, b_k uniform in [-amplitude, amplitude], drawn in the order
// a_1, b_1, a_2, b_2, ...
ValueField random_fourier_field(const CircleGrid& grid, Lcg64& rng, double amplitude = 1.0);

// Rough random field with discrete Lipschitz constant exactly `lipschitz`:
// node increments drawn uniformly, recentred to sum to zero, then scaled.
ValueField random_lipschitz_field(const CircleGrid& grid, Lcg64& rng, double lipschitz);

}  // namespace weakkam
