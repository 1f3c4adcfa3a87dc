#pragma once

// Deterministic sampling and a small parallel-for.
//
// Every random draw comes from a stream keyed by (seed, check id, sample
// index), so results do not depend on how samples are spread over threads.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "levikit/expr.hpp"

namespace levikit {

using Rng = std::mt19937_64;

std::uint64_t fnv1a(std::string_view text);

Rng make_stream(std::uint64_t seed, std::string_view check, std::uint64_t index);

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
double normal(Rng& rng);

/// Unit vector in C^n, uniform on the sphere S^{2n-1}.
Point random_direction(Rng& rng, int n);

/// Uniform point of the disc |w| <= radius.
cplx random_in_disc(Rng& rng, double radius);

/// Number of worker threads used by parallel_for (>= 1).
int thread_count();
void set_thread_count(int threads);

/// Calls fn(i) for i in [0, count). Exceptions are rethrown from the lowest
/// failing index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace levikit
