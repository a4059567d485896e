#pragma once

#include <cstdint>
#include <random>

namespace practsig {

using Rng = std::mt19937_64;

/// splitmix64 finalizer. Used to derive independent stream seeds from a
/// base seed and a stream index (chain, option, replication).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t stream)
{
    return Rng{derive_seed(base, stream)};
}

} // namespace practsig
