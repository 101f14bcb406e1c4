#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

#include "factorlab/poly.hpp"

namespace factorlab {

/// Caps the number of worker threads used by parallel_for. Zero restores the
/// default (hardware concurrency).
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Work is split across at most
/// max_threads() workers; calls made from inside a worker run serially so
/// nested loops never oversubscribe. If any body throws, the exception from
/// the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Independent substream seed for task `stream` of a run seeded with `seed`
/// (splitmix64 finalizer over both words).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
Complex complex_gaussian(Rng& rng);

ComplexVector complex_gaussian_vector(Rng& rng, int size);

}  // namespace factorlab
