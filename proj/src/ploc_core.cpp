#include "ploc/ploc_core.hpp"

#include <algorithm>
#include <string>

#include "ploc/error.hpp"

namespace ploc {
namespace {

constexpr NeighborOffset kN4[] = {{-1, 0, 1}, {0, -1, 2}, {0, 1, 4}, {1, 0, 8}};

constexpr NeighborOffset kN8[] = {{-1, -1, 1}, {-1, 0, 2},  {-1, 1, 4},  {0, -1, 8},
                                  {0, 1, 16},  {1, -1, 32}, {1, 0, 64}, {1, 1, 128}};

void check_sorted(std::span<const double> times, const char* what)
{
    if (!std::is_sorted(times.begin(), times.end())) {
        throw ContractViolation(std::string(what) + " spike train is not sorted");
    }
}

// Own horizon long enough for num_isis + 1 spikes of this pixel.
double own_horizon(double rate, const JitterConfig& jitter, int num_isis, std::uint64_t seed,
                   int row, int col)
{
    const double period = 1.0 / rate;
    double horizon = (num_isis + 2) * period + 2.0 * jitter.half_width;
    for (;;) {
        const auto train = pixel_spike_train(rate, jitter, horizon, seed, row, col);
        if (train.times.size() > static_cast<std::size_t>(num_isis)) {
            // Keep the final train strictly past the closing spike of the last window.
            return std::max(horizon, train.times[static_cast<std::size_t>(num_isis)] + period);
        }
        horizon *= 2.0;
    }
}

std::vector<std::span<const double>> neighbor_spans(const Grid<SpikeTrain>& trains, int row,
                                                    int col, const Neighborhood& nb)
{
    std::vector<std::span<const double>> spans;
    spans.reserve(nb.size());
    for (const auto& off : nb.offsets()) {
        const int r = row + off.dy;
        const int c = col + off.dx;
        if (trains.contains(r, c)) {
            spans.emplace_back(trains(r, c).times);
        } else {
            spans.emplace_back();
        }
    }
    return spans;
}

}  // namespace

Neighborhood::Neighborhood(NeighborhoodKind kind, std::span<const NeighborOffset> offsets)
    : kind_(kind), count_(offsets.size())
{
    std::copy(offsets.begin(), offsets.end(), offsets_.begin());
}

const Neighborhood& Neighborhood::n4()
{
    static const Neighborhood nb(NeighborhoodKind::N4, kN4);
    return nb;
}

const Neighborhood& Neighborhood::n8()
{
    static const Neighborhood nb(NeighborhoodKind::N8, kN8);
    return nb;
}

const Neighborhood& Neighborhood::of(NeighborhoodKind kind)
{
    return kind == NeighborhoodKind::N4 ? n4() : n8();
}

FeatureHistogram FeatureHistogram::from_stream(const FeatureStream& stream, int code_count)
{
    FeatureHistogram hist(code_count);
    for (auto code : stream.codes) {
        hist.add(code);
    }
    return hist;
}

FeatureStream compute_feature_stream(std::span<const double> center,
                                     std::span<const std::span<const double>> neighbors,
                                     const Neighborhood& nb, std::size_t max_windows)
{
    if (neighbors.size() != nb.size()) {
        throw ArgumentError("neighbor list does not match the neighborhood size");
    }
    check_sorted(center, "center");
    for (const auto& n : neighbors) {
        check_sorted(n, "neighbor");
    }

    FeatureStream out;
    if (center.size() < 2) {
        return out;
    }
    const std::size_t windows = std::min(center.size() - 1, max_windows);
    out.codes.reserve(windows);

    // One cursor per neighbor: index of its first spike not yet assigned.
    std::array<std::size_t, 8> cursor{};
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
        const auto& n = neighbors[k];
        cursor[k] = static_cast<std::size_t>(std::lower_bound(n.begin(), n.end(), center[0]) -
                                             n.begin());
    }

    const auto offsets = nb.offsets();
    for (std::size_t i = 0; i < windows; ++i) {
        const double close = center[i + 1];
        FeatureCode code = 0;
        for (std::size_t k = 0; k < neighbors.size(); ++k) {
            const auto& n = neighbors[k];
            std::size_t& c = cursor[k];
            if (c < n.size() && n[c] < close) {
                code = static_cast<FeatureCode>(code | offsets[k].coefficient);
                while (c < n.size() && n[c] < close) {
                    ++c;
                }
            }
        }
        out.codes.push_back(code);
    }
    return out;
}

void PlocConfig::validate() const
{
    rates.validate();
    jitter.validate();
    if (num_isis < 1) {
        throw ConfigError("num_isis must be >= 1");
    }
}

Grid<SpikeTrain> simulate_trains(const Grid<double>& rates, const JitterConfig& jitter,
                                 const Neighborhood& nb, int num_isis, std::uint64_t seed)
{
    jitter.validate();
    if (num_isis < 1) {
        throw ConfigError("num_isis must be >= 1");
    }
    const int w = rates.width();
    const int h = rates.height();
    const auto n = static_cast<std::ptrdiff_t>(rates.size());

    Grid<double> own(w, h);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const int row = static_cast<int>(i / w);
        const int col = static_cast<int>(i % w);
        own[static_cast<std::size_t>(i)] = own_horizon(rates(row, col), jitter, num_isis, seed, row, col);
    }

    // A pixel serves as neighbor for cells at (row - dy, col - dx); it has to
    // cover their observation spans as well as its own.
    Grid<SpikeTrain> trains(w, h);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const int row = static_cast<int>(i / w);
        const int col = static_cast<int>(i % w);
        double horizon = own(row, col);
        for (const auto& off : nb.offsets()) {
            const int r = row - off.dy;
            const int c = col - off.dx;
            if (own.contains(r, c)) {
                horizon = std::max(horizon, own(r, c));
            }
        }
        trains[static_cast<std::size_t>(i)] =
            pixel_spike_train(rates(row, col), jitter, horizon, seed, row, col);
    }
    return trains;
}

Grid<SpikeTrain> generate_trains(const Grid<double>& rates, const JitterConfig& jitter,
                                 double horizon, std::uint64_t seed)
{
    const int w = rates.width();
    Grid<SpikeTrain> trains(w, rates.height());
    const auto n = static_cast<std::ptrdiff_t>(rates.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const int row = static_cast<int>(i / w);
        const int col = static_cast<int>(i % w);
        trains[static_cast<std::size_t>(i)] =
            pixel_spike_train(rates(row, col), jitter, horizon, seed, row, col);
    }
    return trains;
}

PlocResult extract_features(const Grid<SpikeTrain>& trains, const Neighborhood& nb,
                            std::size_t max_windows)
{
    const int w = trains.width();
    const int h = trains.height();
    PlocResult result{Grid<FeatureStream>(w, h), Grid<FeatureHistogram>(w, h)};
    const auto n = static_cast<std::ptrdiff_t>(trains.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const int row = static_cast<int>(i / w);
        const int col = static_cast<int>(i % w);
        const auto spans = neighbor_spans(trains, row, col, nb);
        auto stream = compute_feature_stream(trains(row, col).times, spans, nb, max_windows);
        result.histograms[static_cast<std::size_t>(i)] =
            FeatureHistogram::from_stream(stream, nb.code_count());
        result.streams[static_cast<std::size_t>(i)] = std::move(stream);
    }
    return result;
}

PlocResult run_ploc(const Grid<double>& rates, const PlocConfig& cfg)
{
    cfg.validate();
    const auto& nb = Neighborhood::of(cfg.neighborhood);
    const auto trains = simulate_trains(rates, cfg.jitter, nb, cfg.num_isis, cfg.seed);
    return extract_features(trains, nb, static_cast<std::size_t>(cfg.num_isis));
}

PlocResult run_ploc(const GrayImage& img, const PlocConfig& cfg)
{
    return run_ploc(build_rate_map(img, cfg.rates), cfg);
}

PlocResult run_ploc_duration(const GrayImage& img, const PlocConfig& cfg, double duration)
{
    cfg.validate();
    if (!(duration > 0.0)) {
        throw ConfigError("duration must be positive");
    }
    const auto& nb = Neighborhood::of(cfg.neighborhood);
    const auto trains = generate_trains(build_rate_map(img, cfg.rates), cfg.jitter, duration, cfg.seed);
    return extract_features(trains, nb);
}

BinaryImage feature_mask(const Grid<FeatureStream>& streams, int code, const Neighborhood& nb)
{
    if (code < 0 || code >= nb.code_count()) {
        throw ArgumentError("feature code " + std::to_string(code) + " out of range");
    }
    BinaryImage mask(streams.width(), streams.height());
    for (std::size_t i = 0; i < streams.size(); ++i) {
        const auto& codes = streams[i].codes;
        mask[i] = std::find(codes.begin(), codes.end(), static_cast<FeatureCode>(code)) !=
                          codes.end()
                      ? 1
                      : 0;
    }
    return mask;
}

namespace reference {

PlocResult run_ploc(const Grid<double>& rates, const PlocConfig& cfg)
{
    cfg.validate();
    const auto& nb = Neighborhood::of(cfg.neighborhood);
    const int w = rates.width();
    const int h = rates.height();
    const auto need = static_cast<std::size_t>(cfg.num_isis) + 1;

    double horizon = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        horizon = std::max(horizon, (cfg.num_isis + 2) / rates[i] + 2.0 * cfg.jitter.half_width);
    }

    Grid<SpikeTrain> trains(w, h);
    for (;;) {
        bool complete = true;
        for (int row = 0; row < h; ++row) {
            for (int col = 0; col < w; ++col) {
                trains(row, col) =
                    pixel_spike_train(rates(row, col), cfg.jitter, horizon, cfg.seed, row, col);
                complete = complete && trains(row, col).times.size() >= need;
            }
        }
        if (complete) {
            break;
        }
        horizon *= 2.0;
    }

    PlocResult result{Grid<FeatureStream>(w, h), Grid<FeatureHistogram>(w, h)};
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const auto& center = trains(row, col).times;
            FeatureStream stream;
            for (int s = 0; s < cfg.num_isis; ++s) {
                const double open = center[static_cast<std::size_t>(s)];
                const double close = center[static_cast<std::size_t>(s) + 1];
                int code = 0;
                for (const auto& off : nb.offsets()) {
                    if (!trains.contains(row + off.dy, col + off.dx)) {
                        continue;
                    }
                    for (double t : trains(row + off.dy, col + off.dx).times) {
                        if (t >= open && t < close) {
                            code |= off.coefficient;
                            break;
                        }
                    }
                }
                stream.codes.push_back(static_cast<FeatureCode>(code));
            }
            result.histograms(row, col) = FeatureHistogram::from_stream(stream, nb.code_count());
            result.streams(row, col) = std::move(stream);
        }
    }
    return result;
}

}  // namespace reference

}  // namespace ploc
