#include "pebounds/rng.hpp"

#include <cmath>

#include "pebounds/error.hpp"

namespace pebounds {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + splitmix64(index));
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

int sample_poisson(std::mt19937_64& engine, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("Poisson mean must be >= 0");
  const double u = uniform01(engine);
  if (mean == 0.0) return 0;
  // pmf terms from log space so e^{-mean} underflow only drops negligible mass
  const double log_mean = std::log(mean);
  double cdf = 0.0;
  const int limit = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 100.0);
  for (int k = 0; k < limit; ++k) {
    cdf += std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
    if (u < cdf) return k;
  }
  return limit;
}

}  // namespace pebounds
