#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ploc/cli.hpp"
#include "ploc/netpbm.hpp"
#include "ploc/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ploc;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "ploc_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(std::vector<std::string> args)
{
    args.insert(args.begin(), "ploc");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p)
{
    return read_file(p);
}

fs::path data(const std::string& name)
{
    return fs::path(PLOC_DATA_DIR) / name;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("corpus files match the generator")
{
    for (const auto& item : synthetic::corpus()) {
        CHECK(read_pgm(data(item.name + ".pgm")) == item.image);
    }
}

TEST_CASE("exit codes")
{
    const auto dir = scratch("exit");
    CHECK(run({"--help"}) == cli::kExitOk);
    CHECK(run({"--bogus"}) == cli::kExitConfigError);
    CHECK(run({"--mode", "nonsense"}) == cli::kExitConfigError);
    CHECK(run({"--mode", "run", "--out", dir.string()}) == cli::kExitConfigError);
    CHECK(run({"--input", (dir / "missing.pgm").string(), "--out", dir.string()}) ==
          cli::kExitInputError);

    write_file(dir / "bad.pgm", "P2\n2 2\n255\n1 2 3\n");
    CHECK(run({"--input", (dir / "bad.pgm").string(), "--out", dir.string()}) == cli::kExitInputError);

    const auto img = data("uniform.pgm").string();
    CHECK(run({"--input", img, "--out", dir.string(), "--theta-m", "1.5"}) == cli::kExitConfigError);
    CHECK(run({"--input", img, "--out", dir.string(), "--n-corr", "9"}) == cli::kExitConfigError);
    CHECK(run({"--input", img, "--out", dir.string(), "--isis", "0"}) == cli::kExitConfigError);
    CHECK(run({"--input", img, "--out", dir.string(), "--features", "16"}) == cli::kExitConfigError);
    CHECK(run({"--mode", "salient", "--input", img, "--out", dir.string(), "--neighborhood", "n8"}) ==
          cli::kExitConfigError);
    CHECK(run({"--mode", "analytic", "--out", dir.string(), "--center-rate", "1",
               "--neighbor-rates", "1,2"}) == cli::kExitConfigError);
    CHECK(run({"--mode", "jitter", "--out", dir.string(), "--t2", "0.001", "--tj", "x"}) ==
          cli::kExitConfigError);
}

TEST_CASE("config file: strict keys, flags take precedence")
{
    const auto dir = scratch("config");
    write_file(dir / "bad.ini", "isis = 8\nnot_a_key = 3\n");
    CHECK(run({"--config", (dir / "bad.ini").string()}) == cli::kExitConfigError);
    write_file(dir / "badval.ini", "isis = many\n");
    CHECK(run({"--config", (dir / "badval.ini").string()}) == cli::kExitConfigError);

    const auto out = dir / "out";
    write_file(dir / "good.ini", "mode = run\ninput = " + data("uniform.pgm").string() +
                                     "\nisis = 8\nseed = 3\nout = " + out.string() + "\n");
    REQUIRE(run({"--config", (dir / "good.ini").string(), "--isis", "5"}) == cli::kExitOk);
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report["config"]["isis"] == 5);
    CHECK(report["config"]["seed"] == 3);
    CHECK(report["isis_simulated"] == 5 * 32 * 32);
}

TEST_CASE("run mode on a single pixel")
{
    const auto dir = scratch("pixel");
    write_file(dir / "one.pgm", "P2\n1 1\n255\n128\n");
    REQUIRE(run({"--input", (dir / "one.pgm").string(), "--out", dir.string(), "--isis", "10"}) ==
            cli::kExitOk);
    const auto rows = lines(slurp(dir / "histogram.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == "0,0,0,10,10");
    CHECK(parse_pbm(std::span<const std::uint8_t>(
              reinterpret_cast<const std::uint8_t*>(slurp(dir / "feature_0.pbm").data()),
              slurp(dir / "feature_0.pbm").size())) == BinaryImage(1, 1, 1));
}

TEST_CASE("report manifest and csv report")
{
    const auto dir = scratch("manifest");
    REQUIRE(run({"--input", data("step_edge.pgm").string(), "--out", dir.string(), "--isis", "16",
                 "--report", "csv"}) == cli::kExitOk);
    const auto report = slurp(dir / "report.csv");
    CHECK(report.find("mode,run") != std::string::npos);
    CHECK(report.find("feature_7.pbm") != std::string::npos);
    CHECK(report.find("correlation.pbm") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("feature 7 marks the horizon of the road scene, not its uniform sky")
{
    const auto dir = scratch("road");
    REQUIRE(run({"--input", data("road.pgm").string(), "--out", dir.string()}) == cli::kExitOk);
    const auto text = slurp(dir / "feature_7.pbm");
    const auto mask = parse_pbm(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    const int horizon = mask.height() / 3;
    int edge = 0;
    for (int col = 1; col < mask.width() - 1; ++col) {
        edge += mask(horizon - 1, col);
    }
    int sky = 0;
    int sky_area = 0;
    for (int row = 1; row < horizon - 2; ++row) {
        for (int col = 1; col < mask.width() - 1; ++col) {
            sky += mask(row, col);
            ++sky_area;
        }
    }
    const double edge_density = static_cast<double>(edge) / (mask.width() - 2);
    const double sky_density = static_cast<double>(sky) / sky_area;
    CHECK(edge_density > 0.9);
    CHECK(sky_density < 0.05 * edge_density);
}

TEST_CASE("every mode writes its files and repeats byte for byte")
{
    const std::vector<std::vector<std::string>> modes = {
        {"--mode", "run", "--input", data("l_corner.pgm").string(), "--isis", "20", "--jitter", "1e-5"},
        {"--mode", "analytic", "--center-rate", "600", "--neighbor-rates", "300,400,900,900",
         "--brute-force", "--brute-isis", "2"},
        {"--mode", "jitter", "--t2", "0.001", "--tj", "1e-5,2e-3", "--mc-isis", "20000"},
        {"--mode", "salient", "--input", data("l_corner.pgm").string(), "--isis", "100"},
        {"--mode", "readout", "--input", data("step_edge.pgm").string(), "--isis", "8"},
    };
    for (const auto& args : modes) {
        const auto a = scratch("det_a");
        const auto b = scratch("det_b");
        auto with_a = args;
        with_a.insert(with_a.end(), {"--out", a.string()});
        auto with_b = args;
        with_b.insert(with_b.end(), {"--out", b.string()});
        REQUIRE(run(with_a) == cli::kExitOk);
        REQUIRE(run(with_b) == cli::kExitOk);
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            const auto name = entry.path().filename();
            REQUIRE(fs::exists(b / name));
            CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
            ++files;
        }
        CHECK(files >= 2);
    }
}

TEST_CASE("jitter rows with Tj above T2 are flagged, not computed")
{
    const auto dir = scratch("jitter");
    REQUIRE(run({"--mode", "jitter", "--t2", "0.001", "--tj", "0.002", "--out", dir.string()}) ==
            cli::kExitOk);
    const auto rows = lines(slurp(dir / "jitter.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].find("invalid_tj_exceeds_t2") != std::string::npos);
}

TEST_CASE("analytic mode reproduces the mixed distribution")
{
    const auto dir = scratch("analytic");
    REQUIRE(run({"--mode", "analytic", "--center-rate", "600", "--neighbor-rates", "300,400,900,900",
                 "--out", dir.string()}) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "distribution.json"));
    CHECK(j.dump().find("13") != std::string::npos);
    const auto csv = slurp(dir / "distribution.csv");
    CHECK(csv.find("13,0.166667") != std::string::npos);
    CHECK(csv.find("14,0.333333") != std::string::npos);
}
