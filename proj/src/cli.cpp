#include "ploc/cli.hpp"

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ploc/analytic.hpp"
#include "ploc/error.hpp"
#include "ploc/io.hpp"
#include "ploc/netpbm.hpp"
#include "ploc/postprocess.hpp"
#include "ploc/readout.hpp"

namespace ploc::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const char* mode_name(Mode m)
{
    switch (m) {
    case Mode::Run: return "run";
    case Mode::Analytic: return "analytic";
    case Mode::Jitter: return "jitter";
    case Mode::Salient: return "salient";
    case Mode::Readout: return "readout";
    }
    return "?";
}

std::string crc32_hex(std::string_view data)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

// Output directory that records every file it writes.
class OutputDir {
public:
    OutputDir(const std::string& dir, RunReport& report) : dir_(dir), report_(report)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw InputError("cannot create output directory " + dir_.string() + ": " + ec.message());
        }
    }

    void write(const std::string& name, std::string_view contents)
    {
        write_file(dir_ / name, contents);
        report_.manifest.push_back({name, contents.size(), crc32_hex(contents)});
    }

private:
    fs::path dir_;
    RunReport& report_;
};

std::string fmt6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

Json config_json(const RunConfig& cfg)
{
    Json j;
    j["mode"] = mode_name(cfg.mode);
    j["input"] = cfg.input;
    j["neighborhood"] = cfg.neighborhood == NeighborhoodKind::N4 ? "n4" : "n8";
    j["isis"] = cfg.isis;
    j["duration"] = cfg.duration;
    j["rate_max"] = cfg.rate_max;
    j["rate_min"] = cfg.ploc_config().rates.rate_min;
    j["jitter"] = cfg.jitter;
    j["seed"] = cfg.seed;
    j["theta_m"] = cfg.theta_m;
    j["theta_corr"] = cfg.theta_corr;
    j["n_corr"] = cfg.n_corr;
    j["features"] = cfg.effective_features();
    return j;
}

void write_report(const RunConfig& cfg, const RunReport& report)
{
    std::string text;
    if (cfg.report == ReportFormat::Json) {
        Json j;
        j["mode"] = report.mode;
        j["config"] = config_json(cfg);
        j["cells"] = report.cells;
        j["isis_simulated"] = report.isis;
        auto& files = j["outputs"] = Json::array();
        for (const auto& f : report.manifest) {
            files.push_back({{"file", f.name}, {"bytes", f.bytes}, {"crc32", f.crc32}});
        }
        j["warnings"] = report.warnings;
        text = j.dump(2) + "\n";
        write_file(fs::path(cfg.out) / "report.json", text);
    } else {
        std::ostringstream out;
        out << "key,value\n";
        out << "mode," << report.mode << "\n";
        out << "cells," << report.cells << "\n";
        out << "isis_simulated," << report.isis << "\n";
        for (const auto& f : report.manifest) {
            out << "output," << f.name << ":" << f.bytes << ":" << f.crc32 << "\n";
        }
        for (const auto& w : report.warnings) {
            out << "warning,\"" << w << "\"\n";
        }
        write_file(fs::path(cfg.out) / "report.csv", out.str());
    }
}

std::uint64_t total_codes(const PlocResult& r)
{
    std::uint64_t n = 0;
    for (const auto& h : r.histograms.cells()) {
        n += h.total;
    }
    return n;
}

FeatureVector subset_of(const std::vector<int>& codes)
{
    FeatureVector v;
    for (int c : codes) {
        v.set(static_cast<std::size_t>(c));
    }
    return v;
}

std::vector<double> parse_double_list(const std::string& text, const char* field)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw ConfigError(std::string(field) + ": not a number: '" + tok + "'");
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* field)
{
    std::vector<int> out;
    for (double v : parse_double_list(text, field)) {
        if (v != std::floor(v)) {
            throw ConfigError(std::string(field) + ": not an integer");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<std::optional<double>> parse_rates(const std::string& text)
{
    std::vector<std::optional<double>> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "silent" || tok == "-") {
            out.emplace_back();
        } else {
            out.emplace_back(parse_double_list(tok, "neighbor-rates").at(0));
        }
    }
    return out;
}

GrayImage salient_overlay(const GrayImage& img, const std::vector<Point>& points)
{
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(img[i] / 2);
    }
    for (const auto& p : points) {
        out(p.m, p.n) = 255;
    }
    return out;
}

}  // namespace

PlocConfig RunConfig::ploc_config() const
{
    PlocConfig c;
    c.rates = rate_min ? RateConfig{rate_max, *rate_min} : RateConfig::with_max(rate_max);
    c.jitter.half_width = jitter;
    c.neighborhood = neighborhood;
    c.num_isis = isis;
    c.seed = seed;
    return c;
}

std::vector<int> RunConfig::effective_features() const
{
    if (!features.empty()) {
        return features;
    }
    if (mode == Mode::Salient) {
        return feature_codes(salient_subset());
    }
    return {7};
}

void RunConfig::validate() const
{
    const bool needs_image = mode == Mode::Run || mode == Mode::Salient || mode == Mode::Readout;
    if (needs_image && input.empty()) {
        throw ConfigError("input: an input PGM is required in this mode");
    }
    if (out.empty()) {
        throw ConfigError("out: output directory must not be empty");
    }
    if (isis < 1) {
        throw ConfigError("isis: must be >= 1");
    }
    if (duration < 0.0) {
        throw ConfigError("duration: must be >= 0");
    }
    if (!(rate_max > 0.0)) {
        throw ConfigError("rate-max: must be positive");
    }
    if (rate_min && !(*rate_min > 0.0 && *rate_min <= rate_max)) {
        throw ConfigError("rate-min: must satisfy 0 < rate-min <= rate-max");
    }
    if (!(jitter >= 0.0)) {
        throw ConfigError("jitter: must be >= 0");
    }
    if (!(theta_m >= 0.0 && theta_m <= 1.0)) {
        throw ConfigError("theta-m: must lie in [0, 1]");
    }
    if (!(theta_corr > 0.0 && theta_corr <= 1.0)) {
        throw ConfigError("theta-corr: must lie in (0, 1]");
    }
    if (n_corr < 1 || n_corr > 8) {
        throw ConfigError("n-corr: must lie in [1, 8]");
    }
    const int codes = Neighborhood::of(neighborhood).code_count();
    for (int f : effective_features()) {
        if (f < 0 || f >= codes) {
            throw ConfigError("features: code " + std::to_string(f) + " outside [0, " +
                              std::to_string(codes - 1) + "]");
        }
    }
    if (mode == Mode::Salient && neighborhood != NeighborhoodKind::N4) {
        throw ConfigError("neighborhood: salient mode requires n4");
    }
    if (mode == Mode::Analytic) {
        if (!(center_rate > 0.0)) {
            throw ConfigError("center-rate: must be positive");
        }
        if (!neighbor_rates.empty() &&
            neighbor_rates.size() != Neighborhood::of(neighborhood).size()) {
            throw ConfigError("neighbor-rates: expected one entry per neighbor (" +
                              std::to_string(Neighborhood::of(neighborhood).size()) + ")");
        }
        for (const auto& r : neighbor_rates) {
            if (r && !(*r > 0.0)) {
                throw ConfigError("neighbor-rates: rates must be positive (use 'silent')");
            }
        }
        if (grid_resolution < 16) {
            throw ConfigError("grid-res: must be >= 16");
        }
        if (brute_isis < 1) {
            throw ConfigError("brute-isis: must be >= 1");
        }
    }
    if (mode == Mode::Jitter) {
        if (t2_sweep.empty() || tj_sweep.empty()) {
            throw ConfigError("t2/tj: sweeps must not be empty");
        }
        for (double t : t2_sweep) {
            if (!(t > 0.0)) {
                throw ConfigError("t2: periods must be positive");
            }
        }
        for (double t : tj_sweep) {
            if (!(t >= 0.0)) {
                throw ConfigError("tj: jitter widths must be >= 0");
            }
        }
        if (mc_isis < 1 || mc_isis_per_run < 1) {
            throw ConfigError("mc-isis: must be >= 1");
        }
    }
    if (mode == Mode::Readout) {
        if (scan_rate && !(*scan_rate > 0.0)) {
            throw ConfigError("scan-rate: must be positive");
        }
        if (accumulator_bits < 1 || accumulator_bits > 30) {
            throw ConfigError("acc-bits: must lie in [1, 30]");
        }
    }
}

RunReport cmd_run(const RunConfig& cfg)
{
    RunReport report;
    report.mode = "run";
    const auto img = read_pgm(cfg.input);
    const auto pc = cfg.ploc_config();
    const auto& nb = Neighborhood::of(pc.neighborhood);

    const auto result = cfg.duration > 0.0 ? run_ploc_duration(img, pc, cfg.duration)
                                           : run_ploc(img, pc);
    const auto vectors = significance_map(result.histograms, cfg.theta_m);
    const CorrelationParams corr{cfg.theta_corr, cfg.n_corr, subset_of(cfg.effective_features())};
    const auto corr_map = correlation_map(vectors, corr);

    report.cells = img.size();
    report.isis = total_codes(result);

    OutputDir out(cfg.out, report);
    for (int k = 0; k < nb.code_count(); ++k) {
        out.write("feature_" + std::to_string(k) + ".pbm",
                  encode_pbm(feature_mask(result.streams, k, nb)));
    }
    out.write("histogram.csv", io::histogram_csv(result.histograms));
    for (int k = 0; k < nb.code_count(); ++k) {
        out.write("significant_" + std::to_string(k) + ".pbm",
                  encode_pbm(significance_mask(vectors, k)));
    }
    out.write("feature_vectors.csv", io::feature_vectors_csv(vectors));
    out.write("correlation.pbm", encode_pbm(corr_map));
    return report;
}

RunReport cmd_analytic(const RunConfig& cfg)
{
    RunReport report;
    report.mode = "analytic";
    const auto& nb = Neighborhood::of(cfg.neighborhood);
    NeighborRates rates = cfg.neighbor_rates;
    if (rates.empty()) {
        rates.assign(nb.size(), std::nullopt);
    }
    const auto dist = code_distribution(cfg.center_rate, rates, nb);
    std::optional<CodeDistribution> brute;
    if (cfg.brute_force) {
        brute = brute_force_distribution(cfg.center_rate, rates, nb, cfg.grid_resolution,
                                         cfg.brute_isis);
        for (int c = 0; c < dist.code_count(); ++c) {
            if (std::fabs(dist[c] - (*brute)[c]) > 0.01) {
                report.warnings.push_back("code " + std::to_string(c) +
                                          ": product form and brute force differ by more than 0.01");
            }
        }
    }
    report.cells = 1;
    OutputDir out(cfg.out, report);
    out.write("distribution.csv", io::distribution_csv(dist, brute));
    out.write("distribution.json", io::distribution_json(dist, brute));
    return report;
}

RunReport cmd_jitter(const RunConfig& cfg)
{
    RunReport report;
    report.mode = "jitter";
    std::ostringstream csv;
    csv << "t2,tj,analytic,monte_carlo,relative_error,empty_window_rate,status\n";
    for (double t2 : cfg.t2_sweep) {
        for (double tj : cfg.tj_sweep) {
            csv << io::format_double(t2) << ',' << io::format_double(tj) << ',';
            if (tj > t2) {
                csv << ",,,,invalid_tj_exceeds_t2\n";
                report.warnings.push_back("row (t2=" + io::format_double(t2) + ", tj=" +
                                          io::format_double(tj) + ") skipped: Tj > T2");
                continue;
            }
            const double analytic = jitter_omission_probability(t2, tj);
            const auto est = simulate_omissions({t2, tj}, cfg.mc_isis, cfg.mc_isis_per_run, cfg.seed);
            const double mc = est.displacement_rate();
            const double rel = analytic > 0.0 ? std::fabs(mc - analytic) / analytic : (mc == 0.0 ? 0.0 : 1.0);
            report.isis += est.isis;
            csv << fmt6(analytic) << ',' << fmt6(mc) << ',' << fmt6(rel) << ','
                << fmt6(est.empty_rate()) << ",ok\n";
        }
    }
    OutputDir out(cfg.out, report);
    out.write("jitter.csv", csv.str());
    return report;
}

RunReport cmd_salient(const RunConfig& cfg)
{
    RunReport report;
    report.mode = "salient";
    const auto img = read_pgm(cfg.input);
    SalientParams params{cfg.theta_m, cfg.theta_corr, cfg.n_corr,
                         subset_of(cfg.effective_features())};
    const auto result = salient_points(img, cfg.ploc_config(), params);
    report.cells = img.size();
    report.isis = total_codes(result.features);

    OutputDir out(cfg.out, report);
    out.write("salient_points.csv", io::points_csv(result.points));
    out.write("salient_overlay.pgm", encode_pgm(salient_overlay(img, result.points)));
    out.write("salient_map.pbm", encode_pbm(result.map));
    return report;
}

RunReport cmd_readout(const RunConfig& cfg)
{
    RunReport report;
    report.mode = "readout";
    const auto img = read_pgm(cfg.input);
    const auto pc = cfg.ploc_config();
    const auto& nb = Neighborhood::of(pc.neighborhood);
    const auto rates = build_rate_map(img, pc.rates);
    const auto [lo, hi] = std::minmax_element(rates.cells().begin(), rates.cells().end());
    const double horizon = cfg.duration > 0.0 ? cfg.duration : (pc.num_isis + 1) / *lo;

    const auto trains = generate_trains(rates, pc.jitter, horizon, pc.seed);
    const auto events = merge_events(trains);
    const ScanSchedule schedule{cfg.scan_rate.value_or(cfg.rate_max)};
    auto result = scan_readout(events, img.width(), img.height(), nb, schedule, horizon, *hi);
    report.warnings = result.warnings;
    report.cells = img.size();
    report.isis = result.produced;

    const auto vectors = accumulate_readout(result.records, img.width(), img.height(),
                                            cfg.accumulator_bits, nb.code_count(), cfg.theta_m);
    std::ostringstream acc;
    acc << "m,n,block,code\n";
    for (int row = 0; row < img.height(); ++row) {
        for (int col = 0; col < img.width(); ++col) {
            const auto& blocks = vectors(row, col);
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (int code : feature_codes(blocks[b])) {
                    acc << row << ',' << col << ',' << b << ',' << code << '\n';
                }
            }
        }
    }

    OutputDir out(cfg.out, report);
    out.write("readout.csv", io::readout_csv(result.records));
    out.write("accumulator_features.csv", acc.str());
    return report;
}

RunReport execute(const RunConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    switch (cfg.mode) {
    case Mode::Run: report = cmd_run(cfg); break;
    case Mode::Analytic: report = cmd_analytic(cfg); break;
    case Mode::Jitter: report = cmd_jitter(cfg); break;
    case Mode::Salient: report = cmd_salient(cfg); break;
    case Mode::Readout: report = cmd_readout(cfg); break;
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(cfg, report);
    return report;
}

int main_entry(int argc, const char* const* argv)
{
    CLI::App app{"Pulsed local orientation coding simulator"};
    app.set_config("--config", "", "key = value file; command line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    RunConfig cfg;
    std::string neighborhood = "n4";
    std::string report = "json";
    std::string features;
    std::string neighbor_rates;
    std::string t2;
    std::string tj;
    double rate_min = 0.0;
    double scan_rate = 0.0;

    const std::map<std::string, Mode> modes{{"run", Mode::Run},
                                            {"analytic", Mode::Analytic},
                                            {"jitter", Mode::Jitter},
                                            {"salient", Mode::Salient},
                                            {"readout", Mode::Readout}};
    std::string mode = "run";
    app.add_option("--mode", mode, "what to compute")
        ->check(CLI::IsMember({"run", "analytic", "jitter", "salient", "readout"}));
    app.add_option("--input", cfg.input, "input PGM (P2 or P5, maxval 255)");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--report", report, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--neighborhood", neighborhood, "capture neighborhood")
        ->check(CLI::IsMember({"n4", "n8"}));
    app.add_option("--isis", cfg.isis, "center ISIs observed per cell");
    app.add_option("--duration", cfg.duration,
                   "observation time in seconds (run: overrides --isis; readout: horizon)");
    app.add_option("--rate-max", cfg.rate_max, "pulse rate of white pixels [Hz]");
    auto* rate_min_opt = app.add_option("--rate-min", rate_min, "pulse rate of black pixels [Hz]");
    app.add_option("--jitter", cfg.jitter, "triangular jitter half width Tj [s]");
    app.add_option("--seed", cfg.seed, "global random seed");
    app.add_option("--theta-m", cfg.theta_m, "significance threshold");
    app.add_option("--theta-corr", cfg.theta_corr, "correlation threshold");
    app.add_option("--n-corr", cfg.n_corr, "correlated-neighbor count threshold");
    app.add_option("--features", features, "comma list of feature codes for the correlation");
    app.add_option("--center-rate", cfg.center_rate, "analytic: center rate");
    app.add_option("--neighbor-rates", neighbor_rates,
                   "analytic: comma list in neighborhood order, 'silent' for none");
    app.add_flag("--brute-force", cfg.brute_force, "analytic: add the phase-grid oracle");
    app.add_option("--grid-res", cfg.grid_resolution, "analytic: phase grid resolution");
    app.add_option("--brute-isis", cfg.brute_isis, "analytic: ISIs per phase grid point");
    app.add_option("--t2", t2, "jitter: comma list of periods T2 [s]");
    app.add_option("--tj", tj, "jitter: comma list of jitter widths Tj [s]");
    app.add_option("--mc-isis", cfg.mc_isis, "jitter: Monte Carlo ISIs per row");
    auto* scan_opt = app.add_option("--scan-rate", scan_rate, "readout: cell visits per second");
    app.add_option("--acc-bits", cfg.accumulator_bits, "readout: accumulator capacity 2^N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        cfg.mode = modes.at(mode);
        cfg.neighborhood = neighborhood == "n8" ? NeighborhoodKind::N8 : NeighborhoodKind::N4;
        cfg.report = report == "csv" ? ReportFormat::Csv : ReportFormat::Json;
        if (rate_min_opt->count() > 0) {
            cfg.rate_min = rate_min;
        }
        if (scan_opt->count() > 0) {
            cfg.scan_rate = scan_rate;
        }
        if (!features.empty()) {
            cfg.features = parse_int_list(features, "features");
        }
        if (!neighbor_rates.empty()) {
            cfg.neighbor_rates = parse_rates(neighbor_rates);
        }
        if (!t2.empty()) {
            cfg.t2_sweep = parse_double_list(t2, "t2");
        }
        if (!tj.empty()) {
            cfg.tj_sweep = parse_double_list(tj, "tj");
        }

        const auto result = execute(cfg);
        std::cout << result.mode << ": " << result.cells << " cells, " << result.isis
                  << " ISIs, " << result.manifest.size() << " files in " << cfg.out << ", "
                  << result.wall_time_s << " s\n";
        for (const auto& w : result.warnings) {
            std::cerr << "warning: " << w << "\n";
        }
        return kExitOk;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitContractViolation;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace ploc::cli
