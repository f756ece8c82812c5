#include "ploc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ploc/error.hpp"
#include "ploc/rng.hpp"
#include "ploc/spike_model.hpp"

namespace ploc {
namespace {

constexpr std::uint64_t kOmissionStream = 0x6F6D6973ULL;

void check_rate(double rate, const char* what)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ArgumentError(std::string(what) + " rate must be positive");
    }
}

struct ActiveNeighbor {
    double period;  // in units of the center period
    std::uint8_t coefficient;
};

std::vector<ActiveNeighbor> active_neighbors(double rate_center, const NeighborRates& rates,
                                             const Neighborhood& nb, int resolution, int num_isis)
{
    check_rate(rate_center, "center");
    if (rates.size() != nb.size()) {
        throw ArgumentError("neighbor rate list does not match the neighborhood size");
    }
    if (resolution < 16) {
        throw ArgumentError("phase grid resolution must be >= 16");
    }
    if (num_isis < 1) {
        throw ArgumentError("num_isis must be >= 1");
    }
    std::vector<ActiveNeighbor> active;
    const auto offsets = nb.offsets();
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (rates[k]) {
            check_rate(*rates[k], "neighbor");
            active.push_back({rate_center / *rates[k], offsets[k].coefficient});
        }
    }
    std::uint64_t points = 1;
    for (std::size_t k = 0; k < active.size(); ++k) {
        points *= static_cast<std::uint64_t>(resolution);
        if (points > kMaxPhaseGridPoints) {
            throw ArgumentError("phase grid too large: resolution^" + std::to_string(active.size()) +
                                " exceeds the enumeration limit");
        }
    }
    return active;
}

double grid_phase(int j, int resolution, double period)
{
    return (j + 0.5) / resolution * period;
}

CodeDistribution normalize(const std::vector<std::uint64_t>& counts)
{
    const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    CodeDistribution dist;
    dist.probabilities.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
        dist.probabilities[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
    }
    return dist;
}

// contribution[j * num_isis + s]: coefficient if the neighbor at grid phase j
// fires inside center window s, else 0.
std::vector<std::uint8_t> contribution_table(const ActiveNeighbor& n, int resolution, int num_isis)
{
    std::vector<std::uint8_t> table(static_cast<std::size_t>(resolution) *
                                    static_cast<std::size_t>(num_isis));
    for (int j = 0; j < resolution; ++j) {
        const double phase = grid_phase(j, resolution, n.period);
        for (int s = 0; s < num_isis; ++s) {
            double k = std::max(0.0, std::ceil((s - phase) / n.period));
            while (phase + k * n.period < s) {
                k += 1.0;
            }
            while (k > 0.0 && phase + (k - 1.0) * n.period >= s) {
                k -= 1.0;
            }
            const bool fired = phase + k * n.period < s + 1;
            table[static_cast<std::size_t>(j) * static_cast<std::size_t>(num_isis) +
                  static_cast<std::size_t>(s)] = fired ? n.coefficient : 0;
        }
    }
    return table;
}

void enumerate(const std::vector<std::vector<std::uint8_t>>& tables, std::size_t depth,
               const std::vector<std::uint8_t>& partial, int resolution, int num_isis,
               std::vector<std::uint64_t>& counts)
{
    if (depth == tables.size()) {
        for (auto code : partial) {
            ++counts[code];
        }
        return;
    }
    const auto& table = tables[depth];
    std::vector<std::uint8_t> next(partial.size());
    for (int j = 0; j < resolution; ++j) {
        const auto* row = &table[static_cast<std::size_t>(j) * static_cast<std::size_t>(num_isis)];
        for (std::size_t s = 0; s < partial.size(); ++s) {
            next[s] = static_cast<std::uint8_t>(partial[s] | row[s]);
        }
        enumerate(tables, depth + 1, next, resolution, num_isis, counts);
    }
}

struct RunCounts {
    std::uint64_t displaced = 0;
    std::uint64_t empty = 0;
};

RunCounts omission_run(const JitterModel& model, int isis, std::uint64_t seed, std::uint64_t run)
{
    const CounterRng rng(seed, run, kOmissionStream);
    const double period = model.period;
    const double phase = rng.uniform(0) * period;
    RngStream stream(rng, 1);

    // Neighbor pulses k = -1 .. isis; pulse k belongs to center window k.
    std::vector<double> jittered(static_cast<std::size_t>(isis) + 2);
    for (int k = -1; k <= isis; ++k) {
        jittered[static_cast<std::size_t>(k + 1)] =
            phase + k * period + sample_triangular(model.jitter_half_width, stream);
    }

    RunCounts counts;
    for (int s = 0; s < isis; ++s) {
        const double open = s * period;
        const double close = (s + 1) * period;
        const double own = jittered[static_cast<std::size_t>(s + 1)];
        if (own < open || own >= close) {
            ++counts.displaced;
        }
        const bool any = std::any_of(jittered.begin(), jittered.end(),
                                     [&](double t) { return t >= open && t < close; });
        if (!any) {
            ++counts.empty;
        }
    }
    return counts;
}

void check_omission_args(const JitterModel& model, std::uint64_t total_isis, int isis_per_run)
{
    model.validate();
    if (isis_per_run < 1) {
        throw ArgumentError("isis_per_run must be >= 1");
    }
    if (total_isis == 0) {
        throw ArgumentError("total_isis must be >= 1");
    }
}

}  // namespace

double pair_bit_probability(double rate_center, double rate_neighbor)
{
    check_rate(rate_center, "center");
    check_rate(rate_neighbor, "neighbor");
    return std::min(1.0, rate_neighbor / rate_center);
}

double CodeDistribution::total() const noexcept
{
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

CodeDistribution code_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                   const Neighborhood& nb)
{
    check_rate(rate_center, "center");
    if (neighbor_rates.size() != nb.size()) {
        throw ArgumentError("neighbor rate list does not match the neighborhood size");
    }
    std::vector<double> bit(nb.size(), 0.0);
    for (std::size_t k = 0; k < nb.size(); ++k) {
        if (neighbor_rates[k]) {
            bit[k] = pair_bit_probability(rate_center, *neighbor_rates[k]);
        }
    }
    CodeDistribution dist;
    dist.probabilities.resize(static_cast<std::size_t>(nb.code_count()));
    const auto offsets = nb.offsets();
    for (int code = 0; code < nb.code_count(); ++code) {
        double p = 1.0;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            p *= (code & offsets[k].coefficient) ? bit[k] : 1.0 - bit[k];
        }
        dist.probabilities[static_cast<std::size_t>(code)] = p;
    }
    return dist;
}

CodeDistribution brute_force_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                          const Neighborhood& nb, int resolution, int num_isis)
{
    const auto active = active_neighbors(rate_center, neighbor_rates, nb, resolution, num_isis);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(nb.code_count()), 0);
    if (active.empty()) {
        counts[0] = static_cast<std::uint64_t>(num_isis);
        return normalize(counts);
    }

    std::vector<std::vector<std::uint8_t>> tables;
    tables.reserve(active.size());
    for (const auto& n : active) {
        tables.push_back(contribution_table(n, resolution, num_isis));
    }

#pragma omp parallel
    {
        std::vector<std::uint64_t> local(counts.size(), 0);
        std::vector<std::uint8_t> partial(static_cast<std::size_t>(num_isis));
#pragma omp for schedule(static)
        for (int j = 0; j < resolution; ++j) {
            const auto* row =
                &tables[0][static_cast<std::size_t>(j) * static_cast<std::size_t>(num_isis)];
            std::copy(row, row + num_isis, partial.begin());
            enumerate(tables, 1, partial, resolution, num_isis, local);
        }
#pragma omp critical
        for (std::size_t c = 0; c < counts.size(); ++c) {
            counts[c] += local[c];
        }
    }
    return normalize(counts);
}

double jittered_pdf_leading_section(double t, double period, double jitter_half_width)
{
    if (!(period > 0.0)) {
        throw ArgumentError("period must be positive");
    }
    if (!(jitter_half_width > 0.0)) {
        throw ArgumentError("jitter half width must be positive");
    }
    if (t < -jitter_half_width || t >= 0.0) {
        throw ArgumentError("t outside the leading section [-Tj, 0)");
    }
    const double lead = t + jitter_half_width;
    return lead * lead / (2.0 * period * jitter_half_width * jitter_half_width);
}

void JitterModel::validate() const
{
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw ArgumentError("period must be positive");
    }
    if (!(jitter_half_width >= 0.0)) {
        throw ArgumentError("jitter half width must be >= 0");
    }
    if (jitter_half_width > period) {
        throw ModelValidityError("omission model requires Tj <= T2");
    }
}

double jitter_omission_probability(double period, double jitter_half_width)
{
    JitterModel{period, jitter_half_width}.validate();
    return jitter_half_width / (3.0 * period);
}

OmissionEstimate simulate_omissions(const JitterModel& model, std::uint64_t total_isis,
                                    int isis_per_run, std::uint64_t seed)
{
    check_omission_args(model, total_isis, isis_per_run);
    const auto per_run = static_cast<std::uint64_t>(isis_per_run);
    const auto runs = static_cast<std::int64_t>((total_isis + per_run - 1) / per_run);

    std::uint64_t displaced = 0;
    std::uint64_t empty = 0;
#pragma omp parallel for schedule(static) reduction(+ : displaced, empty)
    for (std::int64_t r = 0; r < runs; ++r) {
        const auto c = omission_run(model, isis_per_run, seed, static_cast<std::uint64_t>(r));
        displaced += c.displaced;
        empty += c.empty;
    }
    return {static_cast<std::uint64_t>(runs) * per_run, displaced, empty};
}

namespace reference {

CodeDistribution brute_force_distribution(double rate_center, const NeighborRates& neighbor_rates,
                                          const Neighborhood& nb, int resolution, int num_isis)
{
    const auto active = active_neighbors(rate_center, neighbor_rates, nb, resolution, num_isis);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(nb.code_count()), 0);
    std::vector<int> idx(active.size(), 0);
    for (;;) {
        for (int s = 0; s < num_isis; ++s) {
            int code = 0;
            for (std::size_t k = 0; k < active.size(); ++k) {
                const double phase = grid_phase(idx[k], resolution, active[k].period);
                for (double m = 0.0;; m += 1.0) {
                    const double t = phase + m * active[k].period;
                    if (t >= s + 1) {
                        break;
                    }
                    if (t >= s) {
                        code |= active[k].coefficient;
                        break;
                    }
                }
            }
            ++counts[static_cast<std::size_t>(code)];
        }
        // odometer
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == resolution) {
            idx[k++] = 0;
        }
        if (k == idx.size()) {
            break;
        }
    }
    return normalize(counts);
}

OmissionEstimate simulate_omissions(const JitterModel& model, std::uint64_t total_isis,
                                    int isis_per_run, std::uint64_t seed)
{
    check_omission_args(model, total_isis, isis_per_run);
    const auto per_run = static_cast<std::uint64_t>(isis_per_run);
    const auto runs = (total_isis + per_run - 1) / per_run;
    OmissionEstimate est;
    for (std::uint64_t r = 0; r < runs; ++r) {
        const CounterRng rng(seed, r, kOmissionStream);
        const double period = model.period;
        const double phase = rng.uniform(0) * period;
        RngStream stream(rng, 1);
        std::vector<double> nominal;
        std::vector<double> jittered;
        for (int k = -1; k <= isis_per_run; ++k) {
            nominal.push_back(phase + k * period);
            jittered.push_back(nominal.back() + sample_triangular(model.jitter_half_width, stream));
        }
        std::vector<double> sorted = jittered;
        std::sort(sorted.begin(), sorted.end());
        for (int s = 0; s < isis_per_run; ++s) {
            const double open = s * period;
            const double close = (s + 1) * period;
            // the pulse whose nominal time lies in this window
            for (std::size_t k = 0; k < nominal.size(); ++k) {
                if (nominal[k] >= open && nominal[k] < close &&
                    (jittered[k] < open || jittered[k] >= close)) {
                    ++est.displaced;
                }
            }
            const auto first = std::lower_bound(sorted.begin(), sorted.end(), open);
            if (first == sorted.end() || *first >= close) {
                ++est.empty;
            }
        }
        est.isis += per_run;
    }
    return est;
}

}  // namespace reference

}  // namespace ploc
