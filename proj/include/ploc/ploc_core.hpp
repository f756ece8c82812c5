#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ploc/grid.hpp"
#include "ploc/spike_model.hpp"

namespace ploc {

enum class NeighborhoodKind { N4, N8 };

struct NeighborOffset {
    int dy;
    int dx;
    std::uint8_t coefficient;
};

/// Capture neighborhood with its orientation coefficients:
///
///     N4:  . 1 .      N8:   1   2   4
///          2 R 4            8   R  16
///          . 8 .           32  64 128
class Neighborhood {
public:
    static const Neighborhood& n4();
    static const Neighborhood& n8();
    static const Neighborhood& of(NeighborhoodKind kind);

    NeighborhoodKind kind() const noexcept { return kind_; }
    std::span<const NeighborOffset> offsets() const noexcept { return {offsets_.data(), count_}; }
    std::size_t size() const noexcept { return count_; }

    /// Number of distinct feature codes (16 or 256).
    int code_count() const noexcept { return 1 << count_; }

private:
    Neighborhood(NeighborhoodKind kind, std::span<const NeighborOffset> offsets);

    NeighborhoodKind kind_;
    std::array<NeighborOffset, 8> offsets_{};
    std::size_t count_ = 0;
};

using FeatureCode = std::uint8_t;

/// One code per completed center ISI, in temporal order.
struct FeatureStream {
    std::vector<FeatureCode> codes;

    bool operator==(const FeatureStream&) const = default;
};

/// Per-cell counts N_k; code 0 counts towards the total like any other code.
struct FeatureHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    FeatureHistogram() = default;
    explicit FeatureHistogram(int code_count) : counts(static_cast<std::size_t>(code_count), 0) {}

    void add(FeatureCode code)
    {
        ++counts[code];
        ++total;
    }

    static FeatureHistogram from_stream(const FeatureStream& stream, int code_count);

    bool operator==(const FeatureHistogram&) const = default;
};

inline constexpr std::size_t kAllWindows = std::numeric_limits<std::size_t>::max();

/// Latches every neighbor that fires inside each half-open center window
/// [t_i, t_{i+1}) into one code. `neighbors` is aligned with nb.offsets();
/// an empty span is a silent (or absent) neighbor. Spikes before the first
/// center spike are ignored. At most `max_windows` codes are produced.
FeatureStream compute_feature_stream(std::span<const double> center,
                                     std::span<const std::span<const double>> neighbors,
                                     const Neighborhood& nb, std::size_t max_windows = kAllWindows);

struct PlocConfig {
    RateConfig rates;
    JitterConfig jitter;
    NeighborhoodKind neighborhood = NeighborhoodKind::N4;
    int num_isis = 64;
    std::uint64_t seed = 1;

    void validate() const;
};

struct PlocResult {
    Grid<FeatureStream> streams;
    Grid<FeatureHistogram> histograms;
};

/// Seeded trains for every pixel, each just long enough that every cell
/// completes `num_isis` ISIs and its neighbors cover those windows.
Grid<SpikeTrain> simulate_trains(const Grid<double>& rates, const JitterConfig& jitter,
                                 const Neighborhood& nb, int num_isis, std::uint64_t seed);

/// Seeded trains for every pixel over the common window [0, horizon).
Grid<SpikeTrain> generate_trains(const Grid<double>& rates, const JitterConfig& jitter,
                                 double horizon, std::uint64_t seed);

/// Per-cell feature extraction over given trains (OpenMP over cells).
PlocResult extract_features(const Grid<SpikeTrain>& trains, const Neighborhood& nb,
                            std::size_t max_windows = kAllWindows);

PlocResult run_ploc(const Grid<double>& rates, const PlocConfig& cfg);
PlocResult run_ploc(const GrayImage& img, const PlocConfig& cfg);

/// Observation by wall-clock duration: every cell codes all ISIs completed in
/// [0, duration), so bright cells report more features than dark ones.
PlocResult run_ploc_duration(const GrayImage& img, const PlocConfig& cfg, double duration);

/// 1 where code k appears at least once in the cell's stream.
BinaryImage feature_mask(const Grid<FeatureStream>& streams, int code, const Neighborhood& nb);

namespace reference {

/// Serial PLOC over trains generated to one global horizon, with a naive
/// per-window scan. Must agree exactly with ploc::run_ploc.
PlocResult run_ploc(const Grid<double>& rates, const PlocConfig& cfg);

}  // namespace reference

}  // namespace ploc
