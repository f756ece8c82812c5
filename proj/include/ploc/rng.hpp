#pragma once

#include <cstdint>

namespace ploc {

/// Counter-based generator: the value at a given index is a pure function of
/// (key, index). Streams for different pixels never share state, so results
/// do not depend on evaluation order or thread count.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) noexcept;

    std::uint64_t bits(std::uint64_t index) const noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const noexcept;

private:
    std::uint64_t key_;
};

/// Sequential cursor over a CounterRng.
class RngStream {
public:
    explicit RngStream(CounterRng rng, std::uint64_t position = 0) noexcept
        : rng_(rng), position_(position)
    {
    }

    double uniform() noexcept { return rng_.uniform(position_++); }
    std::uint64_t position() const noexcept { return position_; }
    const CounterRng& generator() const noexcept { return rng_; }

private:
    CounterRng rng_;
    std::uint64_t position_;
};

}  // namespace ploc
