#pragma once

#include <cstdint>
#include <vector>

#include "ploc/grid.hpp"
#include "ploc/rng.hpp"

namespace ploc {

/// Affine grayscale-to-pulse-rate conversion. Black pixels keep oscillating at
/// rate_min so every cell still produces ISIs.
struct RateConfig {
    double rate_max = 10000.0;
    double rate_min = 10000.0 / 256.0;

    /// rate_min defaults to rate_max / 256 (then rate(g) = rate_max * (g + 1) / 256).
    static RateConfig with_max(double rate_max) { return {rate_max, rate_max / 256.0}; }

    void validate() const;
};

/// Triangular timing jitter of half width Tj seconds (zero disables jitter).
struct JitterConfig {
    double half_width = 0.0;

    void validate() const;
};

/// Pulse times of one pixel oscillator, sorted ascending.
struct SpikeTrain {
    std::vector<double> times;
    double period = 0.0;
    double phase = 0.0;  ///< initial phase in seconds, [0, period)
};

double map_gray_to_rate(int gray, const RateConfig& cfg);

/// Draws one offset from the symmetric triangular density on [-Tj, Tj]
/// (sum of two uniforms). Consumes two values from the stream when Tj > 0.
double sample_triangular(double half_width, RngStream& stream);

/// Regular train with nominal times phase_fraction*T + n*T, each perturbed by
/// an independent triangular draw. Emitted times lie in [0, horizon).
SpikeTrain generate_spike_train(double rate, double phase_fraction, const JitterConfig& jitter,
                                double horizon, RngStream& stream);

Grid<double> build_rate_map(const GrayImage& img, const RateConfig& cfg);

/// Random stream owned by pixel (row, col) under a global seed. Draw 0 is the
/// initial phase fraction; jitter draws follow in nominal-spike order, so a
/// train generated to a longer horizon extends a shorter one.
CounterRng pixel_rng(std::uint64_t seed, int row, int col) noexcept;

double pixel_phase_fraction(std::uint64_t seed, int row, int col) noexcept;

/// Spike train of pixel (row, col) with its seeded phase and jitter.
SpikeTrain pixel_spike_train(double rate, const JitterConfig& jitter, double horizon,
                             std::uint64_t seed, int row, int col);

}  // namespace ploc
