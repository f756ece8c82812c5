#include "ploc/spike_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ploc/error.hpp"

namespace ploc {

void RateConfig::validate() const
{
    if (!(rate_min > 0.0) || !std::isfinite(rate_min)) {
        throw ConfigError("rate_min must be positive, got " + std::to_string(rate_min));
    }
    if (!(rate_min <= rate_max) || !std::isfinite(rate_max)) {
        throw ConfigError("rate_min must not exceed rate_max");
    }
}

void JitterConfig::validate() const
{
    if (!(half_width >= 0.0) || !std::isfinite(half_width)) {
        throw ConfigError("jitter half width must be >= 0");
    }
}

double map_gray_to_rate(int gray, const RateConfig& cfg)
{
    cfg.validate();
    if (gray < 0 || gray > 255) {
        throw ArgumentError("grayscale value out of [0, 255]: " + std::to_string(gray));
    }
    return cfg.rate_min + (static_cast<double>(gray) / 255.0) * (cfg.rate_max - cfg.rate_min);
}

double sample_triangular(double half_width, RngStream& stream)
{
    if (half_width == 0.0) {
        return 0.0;
    }
    const double u1 = stream.uniform();
    const double u2 = stream.uniform();
    return half_width * (u1 + u2 - 1.0);
}

SpikeTrain generate_spike_train(double rate, double phase_fraction, const JitterConfig& jitter,
                                double horizon, RngStream& stream)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ConfigError("spike rate must be positive");
    }
    if (!(horizon > 0.0)) {
        throw ConfigError("horizon must be positive");
    }
    if (!(phase_fraction >= 0.0 && phase_fraction < 1.0)) {
        throw ArgumentError("phase fraction must lie in [0, 1)");
    }
    jitter.validate();

    SpikeTrain train;
    train.period = 1.0 / rate;
    train.phase = phase_fraction * train.period;

    const double last_nominal = horizon + jitter.half_width;
    for (std::uint64_t n = 0;; ++n) {
        const double nominal = train.phase + static_cast<double>(n) * train.period;
        if (nominal > last_nominal) {
            break;
        }
        const double t = nominal + sample_triangular(jitter.half_width, stream);
        if (t >= 0.0 && t < horizon) {
            train.times.push_back(t);
        }
    }
    if (jitter.half_width > 0.0) {
        std::sort(train.times.begin(), train.times.end());
    }
    return train;
}

Grid<double> build_rate_map(const GrayImage& img, const RateConfig& cfg)
{
    cfg.validate();
    Grid<double> rates(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        rates[i] = map_gray_to_rate(img[i], cfg);
    }
    return rates;
}

CounterRng pixel_rng(std::uint64_t seed, int row, int col) noexcept
{
    return CounterRng(seed, static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(col));
}

double pixel_phase_fraction(std::uint64_t seed, int row, int col) noexcept
{
    return pixel_rng(seed, row, col).uniform(0);
}

SpikeTrain pixel_spike_train(double rate, const JitterConfig& jitter, double horizon,
                             std::uint64_t seed, int row, int col)
{
    RngStream stream(pixel_rng(seed, row, col), 1);
    return generate_spike_train(rate, pixel_phase_fraction(seed, row, col), jitter, horizon,
                                stream);
}

}  // namespace ploc
