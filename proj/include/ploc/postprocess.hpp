#pragma once

#include <bitset>
#include <initializer_list>
#include <vector>

#include "ploc/grid.hpp"
#include "ploc/ploc_core.hpp"

namespace ploc {

/// Significant-feature indicator b'_k over the full code range (N8 needs 256).
using FeatureVector = std::bitset<256>;

FeatureVector make_feature_set(std::initializer_list<int> codes);
std::vector<int> feature_codes(const FeatureVector& v);

/// b'_k = 1 iff N_k / sum_i N_i >= theta_m. At theta_m == 0 only codes that
/// were observed at least once are set.
FeatureVector significance_threshold(const FeatureHistogram& hist, double theta_m);

Grid<FeatureVector> significance_map(const Grid<FeatureHistogram>& histograms, double theta_m);

/// 1 where bit k is set in the cell's feature vector.
BinaryImage significance_mask(const Grid<FeatureVector>& vectors, int code);

struct CorrelationParams {
    double theta_corr = 0.3;
    int n_corr = 5;
    FeatureVector subset;

    void validate() const;
};

/// Jaccard overlap of a and b restricted to `subset`, thresholded with >=.
/// An empty union counts as uncorrelated.
bool pairwise_correlation(const FeatureVector& a, const FeatureVector& b,
                          const FeatureVector& subset, double theta_corr);

/// 1 where at least n_corr of the eight surrounding cells correlate with the
/// center cell. Cells outside the image never correlate.
BinaryImage correlation_map(const Grid<FeatureVector>& vectors, const CorrelationParams& params);

/// Lines (6, 9), line end points (1, 2, 4, 8) and corners (3, 5, 10, 12) of N4.
FeatureVector salient_subset();

struct SalientParams {
    double theta_m = 0.1;
    double theta_corr = 0.3;
    int n_corr = 5;
    FeatureVector subset = salient_subset();
};

struct Point {
    int m;  ///< row
    int n;  ///< column

    bool operator==(const Point&) const = default;
};

struct SalientResult {
    PlocResult features;
    Grid<FeatureVector> vectors;
    BinaryImage map;
    std::vector<Point> points;  ///< row-major order
};

/// Full N4 pipeline: PLOC capture, significance, correlation over the subset.
SalientResult salient_points(const GrayImage& img, const PlocConfig& cfg,
                             const SalientParams& params);

}  // namespace ploc
