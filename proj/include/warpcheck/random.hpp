#pragma once

#include <cstdint>
#include <random>

#include "warpcheck/numeric.hpp"

namespace warpcheck {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for task `stream` under `seed`
/// (splitmix64 mixing), so sampled loops can be split across workers without
/// changing results.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream);

Vec random_gaussian(Rng& rng, std::size_t n);
double random_uniform(Rng& rng, double lo, double hi);
std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
/// Uniform point in the box [lo, hi].
Vec random_in_box(Rng& rng, const Vec& lo, const Vec& hi);
/// Orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
Mat random_orthogonal(Rng& rng, std::size_t n);
/// Symmetric matrix with N(0, scale²) entries.
Mat random_symmetric(Rng& rng, std::size_t n, double scale = 1.0);

}  // namespace warpcheck
