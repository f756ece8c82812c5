#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ploc/ploc_core.hpp"

namespace ploc {

/// Probability that a neighbor oscillating at rate_neighbor fires at least
/// once inside one ISI of a center at rate_center, for uncorrelated phases:
/// min(1, rate_neighbor / rate_center).
double pair_bit_probability(double rate_center, double rate_neighbor);

/// Probability of every feature code of one cell.
struct CodeDistribution {
    std::vector<double> probabilities;

    double operator[](int code) const { return probabilities[static_cast<std::size_t>(code)]; }
    int code_count() const noexcept { return static_cast<int>(probabilities.size()); }
    double total() const noexcept;
};

/// Rates aligned with Neighborhood::offsets(); nullopt is a silent/absent neighbor.
using NeighborRates = std::vector<std::optional<double>>;

/// Independence product over the per-neighbor bit probabilities.
CodeDistribution code_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                   const Neighborhood& nb);

/// Upper bound on phase-grid points enumerated by brute_force_distribution.
inline constexpr std::uint64_t kMaxPhaseGridPoints = std::uint64_t{1} << 30;

/// Exhaustive oracle: the center fires at 0, T, 2T, ...; every active
/// neighbor's initial phase runs over the midpoints of a uniform grid on
/// [0, T_n); for each point of the joint grid the first `num_isis` windows are
/// captured with exact unjittered arithmetic and code frequencies averaged.
/// OpenMP-parallel over the first grid axis.
CodeDistribution brute_force_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                          const Neighborhood& nb, int resolution, int num_isis);

/// Convolution of the uniform phase density on [0, T2) with the triangular
/// jitter density, on its leading section -Tj <= t < 0:
/// (t + Tj)^2 / (2 T2 Tj^2).
double jittered_pdf_leading_section(double t, double period, double jitter_half_width);

struct JitterModel {
    double period = 0.0;             ///< T2
    double jitter_half_width = 0.0;  ///< Tj

    void validate() const;
};

/// Probability that a jittered neighbor pulse leaves the ISI it belongs to:
/// Tj / (3 T2).
double jitter_omission_probability(double period, double jitter_half_width);

struct OmissionEstimate {
    std::uint64_t isis = 0;
    /// Center ISIs whose own neighbor pulse (nominal time inside the ISI) was
    /// jittered out of it.
    std::uint64_t displaced = 0;
    /// Center ISIs with no neighbor spike at all after jitter.
    std::uint64_t empty = 0;

    double displacement_rate() const noexcept
    {
        return isis ? static_cast<double>(displaced) / static_cast<double>(isis) : 0.0;
    }
    double empty_rate() const noexcept
    {
        return isis ? static_cast<double>(empty) / static_cast<double>(isis) : 0.0;
    }
};

/// Monte Carlo over equal-rate center/neighbor pairs: a regular center train
/// and a neighbor train with random initial phase and triangular jitter.
/// `total_isis` center ISIs are split into runs of `isis_per_run`, each run
/// drawing a fresh phase. OpenMP-parallel over runs.
OmissionEstimate simulate_omissions(const JitterModel& model, std::uint64_t total_isis,
                                    int isis_per_run, std::uint64_t seed);

namespace reference {

/// Serial oracle with a direct per-spike search; exact agreement with
/// ploc::brute_force_distribution.
CodeDistribution brute_force_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                          const Neighborhood& nb, int resolution, int num_isis);

OmissionEstimate simulate_omissions(const JitterModel& model, std::uint64_t total_isis,
                                    int isis_per_run, std::uint64_t seed);

}  // namespace reference

}  // namespace ploc
