#include "ploc/rng.hpp"

namespace ploc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 output function
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) noexcept
    : key_(mix64(mix64(mix64(seed + kGolden) ^ (stream_a + 0x632BE59BD9B4E019ULL)) ^
                 (stream_b + 0x8CB92BA72F3D8DD7ULL)))
{
}

std::uint64_t CounterRng::bits(std::uint64_t index) const noexcept
{
    return mix64(key_ + (index + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t index) const noexcept
{
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

}  // namespace ploc
