#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace epinet {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent generator for sub-stream `stream` of a master seed.
///
/// Streams are derived by mixing the seed with a hashed stream index, so
/// ensemble member i always receives the same generator regardless of how
/// many other members run or in which order.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// 64-bit seed for sub-stream `stream`, for APIs that take a seed rather
/// than a generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Uniform double in [0, 1) with 53 random bits. Unlike
/// std::uniform_real_distribution the result does not depend on the
/// standard library implementation.
double uniform01(Rng& rng);

/// Uniform integer in [0, n). Unbiased (Lemire's multiply-and-reject).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Exponential variate with the given rate (> 0).
double exponential(Rng& rng, double rate);

template <typename T>
void shuffle(std::span<T> values, Rng& rng)
{
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace epinet
