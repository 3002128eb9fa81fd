#pragma once

#include <cstdint>
#include <random>

namespace wadapt {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to turn structured keys into well-mixed seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from a parent seed and a key.
/// derive_seed(s, k) = splitmix64(s ^ splitmix64(k)).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept
{
    return splitmix64(parent ^ splitmix64(key));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key1, std::uint64_t key2) noexcept
{
    return derive_seed(derive_seed(parent, key1), key2);
}

// Stream tags keep the different consumers of one run seed apart.
namespace stream {
inline constexpr std::uint64_t init = 0x1001;
inline constexpr std::uint64_t grouping = 0x2002;
inline constexpr std::uint64_t generation = 0x3003;
} // namespace stream

} // namespace wadapt
