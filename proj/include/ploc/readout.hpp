#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ploc/grid.hpp"
#include "ploc/ploc_core.hpp"
#include "ploc/postprocess.hpp"

namespace ploc {

struct SpikeEvent {
    double time;
    int row;
    int col;
};

/// All spikes of all pixels, sorted by time (ties by row-major pixel index).
std::vector<SpikeEvent> merge_events(const Grid<SpikeTrain>& trains);

/// State of one digital PLOC cell: master RS-latches per neighbor, slave
/// latches holding the last completed ISI, and the valid bit.
struct LatchCell {
    std::uint8_t master = 0;
    std::uint8_t slave = 0;
    bool valid = false;
    bool armed = false;  ///< false until the first own pulse clears the masters
    std::uint64_t valid_sets = 0;
};

/// Behavioral latch array. Events sharing one instant are applied as
/// neighbor captures first, then center transfers (the delayed reset).
class LatchArray {
public:
    LatchArray(int width, int height, const Neighborhood& nb);

    /// Pixel (row, col) pulsed: set the matching master latch in every cell
    /// that has it as a neighbor.
    void capture(int row, int col);

    /// Own pulse of cell (row, col): masters -> slaves, masters reset, valid
    /// set. Returns true if a word was produced (false for the arming pulse).
    /// `overwrote` reports whether an unread word was destroyed.
    bool transfer(int row, int col, bool& overwrote);

    /// Bus read: returns true and clears valid if the cell holds an unread word.
    bool read(int row, int col, std::uint8_t& word);

    const LatchCell& cell(int row, int col) const { return cells_(row, col); }
    int width() const noexcept { return cells_.width(); }
    int height() const noexcept { return cells_.height(); }

private:
    Grid<LatchCell> cells_;
    const Neighborhood* nb_;
};

struct SlaveWord {
    double time;
    std::uint8_t word;
};

struct LatchTrace {
    Grid<std::vector<SlaveWord>> words;  ///< per cell, in production order
    Grid<std::uint64_t> valid_sets;
};

/// Drives a LatchArray with a globally time-sorted event stream.
LatchTrace step_latch_array(std::span<const SpikeEvent> events, int width, int height,
                            const Neighborhood& nb);

/// Round-robin row-major bus scan; every cell is visited frame_rate times
/// per second, so the bus moves frame_rate * cell_count words per second.
struct ScanSchedule {
    double frame_rate = 0.0;

    void validate() const;
};

struct ReadoutRecord {
    double time;
    int m;
    int n;
    std::uint8_t word;
    std::uint64_t lost_count;  ///< words lost array-wide up to this read
};

struct ReadoutResult {
    std::vector<ReadoutRecord> records;
    std::uint64_t produced = 0;
    std::uint64_t lost = 0;
    std::vector<std::string> warnings;
};

/// Simulates the latch array together with the scanning bus over
/// [0, horizon), then keeps scanning for one more frame to drain valid words.
ReadoutResult scan_readout(std::span<const SpikeEvent> events, int width, int height,
                           const Neighborhood& nb, const ScanSchedule& schedule, double horizon,
                           double max_pixel_rate);

/// Edge accumulator of one cell; full once 2^N features have been counted.
class Accumulator {
public:
    Accumulator(int capacity_bits, int code_count);

    /// Counts one feature; returns true when the accumulator became full.
    bool push(FeatureCode code);
    void clear();

    bool full() const noexcept { return total_ == capacity(); }
    int capacity_bits() const noexcept { return bits_; }
    std::uint64_t capacity() const noexcept { return std::uint64_t{1} << bits_; }
    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

private:
    int bits_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> counts_;
};

/// Significance by fixed-point shift: code k is set iff
/// (counts[k] << 32) >> N >= ceil(theta_m * 2^32). Equals
/// significance_threshold on the same counts.
FeatureVector shift_normalize(const Accumulator& acc, double theta_m);

/// Feeds a readout stream into per-cell accumulators; returns the feature
/// vectors emitted each time a cell's accumulator fills.
Grid<std::vector<FeatureVector>> accumulate_readout(std::span<const ReadoutRecord> records,
                                                    int width, int height, int capacity_bits,
                                                    int code_count, double theta_m);

}  // namespace ploc
