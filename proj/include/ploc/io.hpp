#pragma once

#include <optional>
#include <span>
#include <string>

#include "ploc/analytic.hpp"
#include "ploc/grid.hpp"
#include "ploc/ploc_core.hpp"
#include "ploc/postprocess.hpp"
#include "ploc/readout.hpp"

namespace ploc::io {

/// Round-trip formatting of doubles ("%.17g" trimmed by the shortest repr).
std::string format_double(double v);

/// Rows (m, n, code, count, total); zero counts are omitted.
std::string histogram_csv(const Grid<FeatureHistogram>& histograms);

/// Rows (m, n, code) for every set bit.
std::string feature_vectors_csv(const Grid<FeatureVector>& vectors);

/// Rows (code, probability[, brute_force, delta]); zero-probability codes are
/// omitted unless the brute-force column is present and nonzero there.
std::string distribution_csv(const CodeDistribution& dist,
                             const std::optional<CodeDistribution>& brute = std::nullopt);
std::string distribution_json(const CodeDistribution& dist,
                              const std::optional<CodeDistribution>& brute = std::nullopt);

std::string points_csv(std::span<const Point> points);

/// Rows (time, m, n, word, lost_count).
std::string readout_csv(std::span<const ReadoutRecord> records);

}  // namespace ploc::io
