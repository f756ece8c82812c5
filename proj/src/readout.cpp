#include "ploc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ploc/error.hpp"

namespace ploc {
namespace {

constexpr int kFixedPointBits = 32;

void check_events(std::span<const SpikeEvent> events, int width, int height)
{
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.row < 0 || e.col < 0 || e.row >= height || e.col >= width) {
            throw ContractViolation("spike event outside the array");
        }
        if (i > 0 && events[i - 1].time > e.time) {
            throw ContractViolation("spike events are not time-sorted");
        }
    }
}

// [first, last) range of events sharing events[first].time
std::size_t instant_end(std::span<const SpikeEvent> events, std::size_t first)
{
    std::size_t last = first + 1;
    while (last < events.size() && events[last].time == events[first].time) {
        ++last;
    }
    return last;
}

}  // namespace

std::vector<SpikeEvent> merge_events(const Grid<SpikeTrain>& trains)
{
    std::vector<SpikeEvent> events;
    std::size_t total = 0;
    for (const auto& t : trains.cells()) {
        total += t.times.size();
    }
    events.reserve(total);
    for (int row = 0; row < trains.height(); ++row) {
        for (int col = 0; col < trains.width(); ++col) {
            for (double t : trains(row, col).times) {
                events.push_back({t, row, col});
            }
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const SpikeEvent& a, const SpikeEvent& b) { return a.time < b.time; });
    return events;
}

LatchArray::LatchArray(int width, int height, const Neighborhood& nb)
    : cells_(width, height), nb_(&nb)
{
}

void LatchArray::capture(int row, int col)
{
    for (const auto& off : nb_->offsets()) {
        const int r = row - off.dy;
        const int c = col - off.dx;
        if (cells_.contains(r, c)) {
            auto& cell = cells_(r, c);
            cell.master = static_cast<std::uint8_t>(cell.master | off.coefficient);
        }
    }
}

bool LatchArray::transfer(int row, int col, bool& overwrote)
{
    auto& cell = cells_(row, col);
    overwrote = false;
    if (!cell.armed) {
        cell.armed = true;
        cell.master = 0;
        return false;
    }
    overwrote = cell.valid;
    cell.slave = cell.master;
    cell.master = 0;
    cell.valid = true;
    ++cell.valid_sets;
    return true;
}

bool LatchArray::read(int row, int col, std::uint8_t& word)
{
    auto& cell = cells_(row, col);
    if (!cell.valid) {
        return false;
    }
    word = cell.slave;
    cell.valid = false;
    return true;
}

LatchTrace step_latch_array(std::span<const SpikeEvent> events, int width, int height,
                            const Neighborhood& nb)
{
    check_events(events, width, height);
    LatchArray array(width, height, nb);
    LatchTrace trace{Grid<std::vector<SlaveWord>>(width, height),
                     Grid<std::uint64_t>(width, height)};

    for (std::size_t first = 0; first < events.size();) {
        const std::size_t last = instant_end(events, first);
        for (std::size_t i = first; i < last; ++i) {
            array.capture(events[i].row, events[i].col);
        }
        for (std::size_t i = first; i < last; ++i) {
            const auto& e = events[i];
            bool overwrote = false;
            if (array.transfer(e.row, e.col, overwrote)) {
                trace.words(e.row, e.col).push_back({e.time, array.cell(e.row, e.col).slave});
                // nobody reads in this model; the valid bit is consumed here
                std::uint8_t word = 0;
                array.read(e.row, e.col, word);
            }
        }
        first = last;
    }
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            trace.valid_sets(row, col) = array.cell(row, col).valid_sets;
        }
    }
    return trace;
}

void ScanSchedule::validate() const
{
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
        throw ConfigError("scan frame rate must be positive");
    }
}

ReadoutResult scan_readout(std::span<const SpikeEvent> events, int width, int height,
                           const Neighborhood& nb, const ScanSchedule& schedule, double horizon,
                           double max_pixel_rate)
{
    schedule.validate();
    check_events(events, width, height);
    if (!(horizon > 0.0)) {
        throw ConfigError("readout horizon must be positive");
    }

    ReadoutResult result;
    if (schedule.frame_rate < max_pixel_rate) {
        result.warnings.push_back("scan frame rate " + std::to_string(schedule.frame_rate) +
                                  " Hz is below the maximum pixel rate " +
                                  std::to_string(max_pixel_rate) + " Hz; words may be lost");
    }

    LatchArray array(width, height, nb);
    const auto cells = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    const double word_period = 1.0 / (schedule.frame_rate * static_cast<double>(cells));
    const double scan_end = horizon + 1.0 / schedule.frame_rate;
    std::uint64_t tick = 0;

    auto tick_time = [&](std::uint64_t k) { return static_cast<double>(k) * word_period; };
    auto scan_one = [&] {
        const auto idx = tick % cells;
        const int row = static_cast<int>(idx / static_cast<std::uint64_t>(width));
        const int col = static_cast<int>(idx % static_cast<std::uint64_t>(width));
        std::uint8_t word = 0;
        if (array.read(row, col, word)) {
            result.records.push_back({tick_time(tick), row, col, word, result.lost});
        }
        ++tick;
    };

    for (std::size_t first = 0; first < events.size();) {
        const std::size_t last = instant_end(events, first);
        const double now = events[first].time;
        while (tick_time(tick) < now) {
            scan_one();
        }
        for (std::size_t i = first; i < last; ++i) {
            array.capture(events[i].row, events[i].col);
        }
        while (tick_time(tick) == now) {
            scan_one();
        }
        for (std::size_t i = first; i < last; ++i) {
            bool overwrote = false;
            if (array.transfer(events[i].row, events[i].col, overwrote)) {
                ++result.produced;
                if (overwrote) {
                    ++result.lost;
                }
            }
        }
        first = last;
    }
    while (tick_time(tick) < scan_end) {
        scan_one();
    }

    if (result.lost > 0) {
        result.warnings.push_back(std::to_string(result.lost) +
                                  " feature words overwritten before readout");
    }
    return result;
}

Accumulator::Accumulator(int capacity_bits, int code_count) : bits_(capacity_bits)
{
    if (capacity_bits < 1 || capacity_bits > 30) {
        throw ConfigError("accumulator capacity bits must lie in [1, 30]");
    }
    if (code_count < 1 || code_count > 256) {
        throw ArgumentError("code count must lie in [1, 256]");
    }
    counts_.assign(static_cast<std::size_t>(code_count), 0);
}

bool Accumulator::push(FeatureCode code)
{
    if (full()) {
        throw ContractViolation("accumulator is full; normalize and clear first");
    }
    if (code >= counts_.size()) {
        throw ArgumentError("feature code out of range");
    }
    ++counts_[code];
    ++total_;
    return full();
}

void Accumulator::clear()
{
    std::fill(counts_.begin(), counts_.end(), 0);
    total_ = 0;
}

FeatureVector shift_normalize(const Accumulator& acc, double theta_m)
{
    if (!(theta_m >= 0.0 && theta_m <= 1.0)) {
        throw ConfigError("theta_m must lie in [0, 1]");
    }
    if (!acc.full()) {
        throw ContractViolation("shift normalization before the accumulator reached 2^N features");
    }
    const auto threshold =
        static_cast<std::uint64_t>(std::ceil(std::ldexp(theta_m, kFixedPointBits)));
    FeatureVector v;
    const auto counts = acc.counts();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const std::uint64_t normalized = (counts[k] << kFixedPointBits) >> acc.capacity_bits();
        if (counts[k] > 0 && normalized >= threshold) {
            v.set(k);
        }
    }
    return v;
}

Grid<std::vector<FeatureVector>> accumulate_readout(std::span<const ReadoutRecord> records,
                                                    int width, int height, int capacity_bits,
                                                    int code_count, double theta_m)
{
    Grid<Accumulator> acc(width, height, Accumulator(capacity_bits, code_count));
    Grid<std::vector<FeatureVector>> out(width, height);
    for (const auto& rec : records) {
        auto& a = acc(rec.m, rec.n);
        if (a.push(rec.word)) {
            out(rec.m, rec.n).push_back(shift_normalize(a, theta_m));
            a.clear();
        }
    }
    return out;
}

}  // namespace ploc
