#pragma once

#include <cstdint>
#include <random>

namespace pebounds {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the independent stream for sample `index`:
/// splitmix64(seed + splitmix64(index)). Streams do not depend on the order
/// in which samples are drawn.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& engine);

/// Poisson(mean) variate by inverse-CDF cumulative summation from k = 0.
int sample_poisson(std::mt19937_64& engine, double mean);

}  // namespace pebounds
