#include "ploc/postprocess.hpp"

#include <cmath>
#include <string>

#include "ploc/error.hpp"

namespace ploc {
namespace {

void check_theta_m(double theta_m)
{
    if (!(theta_m >= 0.0 && theta_m <= 1.0)) {
        throw ConfigError("theta_m must lie in [0, 1]");
    }
}

constexpr int kCorrelationOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                           {0, 1},   {1, -1}, {1, 0},  {1, 1}};

}  // namespace

FeatureVector make_feature_set(std::initializer_list<int> codes)
{
    FeatureVector v;
    for (int c : codes) {
        v.set(static_cast<std::size_t>(c));
    }
    return v;
}

std::vector<int> feature_codes(const FeatureVector& v)
{
    std::vector<int> codes;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v.test(k)) {
            codes.push_back(static_cast<int>(k));
        }
    }
    return codes;
}

FeatureVector significance_threshold(const FeatureHistogram& hist, double theta_m)
{
    check_theta_m(theta_m);
    if (hist.total == 0) {
        throw EmptyHistogramError("significance of an empty histogram is undefined");
    }
    FeatureVector v;
    const auto total = static_cast<double>(hist.total);
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        const auto n = hist.counts[k];
        if (n > 0 && static_cast<double>(n) / total >= theta_m) {
            v.set(k);
        }
    }
    return v;
}

Grid<FeatureVector> significance_map(const Grid<FeatureHistogram>& histograms, double theta_m)
{
    check_theta_m(theta_m);
    Grid<FeatureVector> out(histograms.width(), histograms.height());
    const auto n = static_cast<std::ptrdiff_t>(histograms.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& h = histograms[static_cast<std::size_t>(i)];
        if (h.total > 0) {
            out[static_cast<std::size_t>(i)] = significance_threshold(h, theta_m);
        }
    }
    return out;
}

BinaryImage significance_mask(const Grid<FeatureVector>& vectors, int code)
{
    if (code < 0 || code > 255) {
        throw ArgumentError("feature code out of range");
    }
    BinaryImage mask(vectors.width(), vectors.height());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        mask[i] = vectors[i].test(static_cast<std::size_t>(code)) ? 1 : 0;
    }
    return mask;
}

void CorrelationParams::validate() const
{
    if (!(theta_corr > 0.0 && theta_corr <= 1.0)) {
        throw ConfigError("theta_corr must lie in (0, 1]");
    }
    if (n_corr < 1 || n_corr > 8) {
        throw ConfigError("n_corr must lie in [1, 8]");
    }
    if (subset.none()) {
        throw ConfigError("correlation feature subset must not be empty");
    }
}

bool pairwise_correlation(const FeatureVector& a, const FeatureVector& b,
                          const FeatureVector& subset, double theta_corr)
{
    const auto uni = ((a | b) & subset).count();
    if (uni == 0) {
        return false;
    }
    const auto inter = (a & b & subset).count();
    return static_cast<double>(inter) / static_cast<double>(uni) >= theta_corr;
}

BinaryImage correlation_map(const Grid<FeatureVector>& vectors, const CorrelationParams& params)
{
    params.validate();
    const int w = vectors.width();
    BinaryImage out(w, vectors.height());
    const auto n = static_cast<std::ptrdiff_t>(vectors.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const int row = static_cast<int>(i / w);
        const int col = static_cast<int>(i % w);
        int correlated = 0;
        for (const auto& off : kCorrelationOffsets) {
            const int r = row + off[0];
            const int c = col + off[1];
            if (vectors.contains(r, c) &&
                pairwise_correlation(vectors(row, col), vectors(r, c), params.subset,
                                     params.theta_corr)) {
                ++correlated;
            }
        }
        out[static_cast<std::size_t>(i)] = correlated >= params.n_corr ? 1 : 0;
    }
    return out;
}

FeatureVector salient_subset()
{
    return make_feature_set({1, 2, 3, 4, 5, 6, 8, 9, 10, 12});
}

SalientResult salient_points(const GrayImage& img, const PlocConfig& cfg,
                             const SalientParams& params)
{
    if (cfg.neighborhood != NeighborhoodKind::N4) {
        throw ConfigError("salient point extraction is defined on the N4 neighborhood");
    }
    check_theta_m(params.theta_m);
    const CorrelationParams corr{params.theta_corr, params.n_corr, params.subset};
    corr.validate();

    SalientResult result{run_ploc(img, cfg), {}, {}, {}};
    result.vectors = significance_map(result.features.histograms, params.theta_m);
    result.map = correlation_map(result.vectors, corr);
    for (int row = 0; row < img.height(); ++row) {
        for (int col = 0; col < img.width(); ++col) {
            if (result.map(row, col)) {
                result.points.push_back({row, col});
            }
        }
    }
    return result;
}

}  // namespace ploc
