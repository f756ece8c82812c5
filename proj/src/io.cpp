#include "ploc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace ploc::io {

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string histogram_csv(const Grid<FeatureHistogram>& histograms)
{
    std::ostringstream out;
    out << "m,n,code,count,total\n";
    for (int row = 0; row < histograms.height(); ++row) {
        for (int col = 0; col < histograms.width(); ++col) {
            const auto& h = histograms(row, col);
            for (std::size_t k = 0; k < h.counts.size(); ++k) {
                if (h.counts[k] > 0) {
                    out << row << ',' << col << ',' << k << ',' << h.counts[k] << ',' << h.total
                        << '\n';
                }
            }
        }
    }
    return out.str();
}

std::string feature_vectors_csv(const Grid<FeatureVector>& vectors)
{
    std::ostringstream out;
    out << "m,n,code\n";
    for (int row = 0; row < vectors.height(); ++row) {
        for (int col = 0; col < vectors.width(); ++col) {
            for (int code : feature_codes(vectors(row, col))) {
                out << row << ',' << col << ',' << code << '\n';
            }
        }
    }
    return out.str();
}

std::string distribution_csv(const CodeDistribution& dist, const std::optional<CodeDistribution>& brute)
{
    std::ostringstream out;
    out << (brute ? "code,probability,brute_force,delta\n" : "code,probability\n");
    for (int code = 0; code < dist.code_count(); ++code) {
        const double p = dist[code];
        const double b = brute ? (*brute)[code] : 0.0;
        if (p == 0.0 && b == 0.0) {
            continue;
        }
        char line[128];
        if (brute) {
            std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f\n", code, p, b, std::fabs(p - b));
        } else {
            std::snprintf(line, sizeof line, "%d,%.6f\n", code, p);
        }
        out << line;
    }
    return out.str();
}

std::string distribution_json(const CodeDistribution& dist, const std::optional<CodeDistribution>& brute)
{
    nlohmann::ordered_json doc;
    doc["code_count"] = dist.code_count();
    auto& rows = doc["codes"] = nlohmann::ordered_json::array();
    for (int code = 0; code < dist.code_count(); ++code) {
        const double b = brute ? (*brute)[code] : 0.0;
        if (dist[code] == 0.0 && b == 0.0) {
            continue;
        }
        nlohmann::ordered_json row{{"code", code}, {"probability", dist[code]}};
        if (brute) {
            row["brute_force"] = b;
            row["delta"] = std::fabs(dist[code] - b);
        }
        rows.push_back(row);
    }
    return doc.dump(2) + "\n";
}

std::string points_csv(std::span<const Point> points)
{
    std::ostringstream out;
    out << "m,n\n";
    for (const auto& p : points) {
        out << p.m << ',' << p.n << '\n';
    }
    return out.str();
}

std::string readout_csv(std::span<const ReadoutRecord> records)
{
    std::ostringstream out;
    out << "time,m,n,word,lost_count\n";
    for (const auto& r : records) {
        out << format_double(r.time) << ',' << r.m << ',' << r.n << ',' << static_cast<int>(r.word)
            << ',' << r.lost_count << '\n';
    }
    return out.str();
}

}  // namespace ploc::io
