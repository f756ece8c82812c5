#include "ploc/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ploc/error.hpp"

namespace ploc {
namespace {

// Header tokenizer that tracks position for diagnostics.
class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::string_view source)
        : bytes_(bytes), source_(source)
    {
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        std::ostringstream msg;
        msg << source_ << ": line " << line_ << ", byte " << pos_ << ": " << what;
        throw InputError(msg.str());
    }

    std::string magic()
    {
        if (bytes_.size() < 2) {
            fail("file too short for a netpbm header");
        }
        std::string m{static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
        pos_ = 2;
        return m;
    }

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(c)) {
                if (c == '\n') {
                    ++line_;
                }
                ++pos_;
            } else {
                break;
            }
        }
    }

    long integer(const char* what)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) {
            fail(std::string("unexpected end of file reading ") + what);
        }
        if (!std::isdigit(bytes_[pos_])) {
            fail(std::string("expected ") + what);
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) {
                fail(std::string(what) + " too large");
            }
            ++pos_;
        }
        return v;
    }

    // Raster bits of P1 may be packed without separators.
    int bit()
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) {
            fail("unexpected end of raster");
        }
        const auto c = bytes_[pos_++];
        if (c != '0' && c != '1') {
            --pos_;
            fail("expected 0 or 1 in PBM raster");
        }
        return c - '0';
    }

    // Single whitespace byte between header and binary raster.
    void end_of_header()
    {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            fail("missing whitespace after header");
        }
        if (bytes_[pos_] == '\n') {
            ++line_;
        }
        ++pos_;
    }

    std::span<const std::uint8_t> take(std::size_t n)
    {
        if (bytes_.size() - pos_ < n) {
            fail("raster truncated: expected " + std::to_string(n) + " bytes, found " +
                 std::to_string(bytes_.size() - pos_));
        }
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::string_view source_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::pair<int, int> dimensions(Reader& in)
{
    const long w = in.integer("width");
    const long h = in.integer("height");
    if (w <= 0 || h <= 0) {
        in.fail("image dimensions must be positive");
    }
    return {static_cast<int>(w), static_cast<int>(h)};
}

}  // namespace

GrayImage parse_pgm(std::span<const std::uint8_t> bytes, std::string_view source)
{
    Reader in(bytes, source);
    const auto magic = in.magic();
    if (magic != "P2" && magic != "P5") {
        in.fail("not a PGM file (magic '" + magic + "')");
    }
    const auto [w, h] = dimensions(in);
    const long maxval = in.integer("maxval");
    if (maxval != 255) {
        in.fail("only 8-bit PGM with maxval 255 is supported, got " + std::to_string(maxval));
    }
    GrayImage img(w, h);
    if (magic == "P5") {
        in.end_of_header();
        const auto raster = in.take(img.size());
        std::copy(raster.begin(), raster.end(), img.cells().begin());
    } else {
        for (std::size_t i = 0; i < img.size(); ++i) {
            const long v = in.integer("pixel value");
            if (v > 255) {
                in.fail("pixel value " + std::to_string(v) + " exceeds maxval");
            }
            img[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

GrayImage read_pgm(const std::filesystem::path& path)
{
    const auto data = read_file(path);
    return parse_pgm({reinterpret_cast<const std::uint8_t*>(data.data()), data.size()},
                     path.string());
}

std::string encode_pgm(const GrayImage& img)
{
    std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                      "\n255\n";
    out.append(img.cells().begin(), img.cells().end());
    return out;
}

std::string encode_pbm(const BinaryImage& img, PbmFormat format)
{
    const int w = img.width();
    std::string out = (format == PbmFormat::Binary ? "P4\n" : "P1\n") + std::to_string(w) + " " +
                      std::to_string(img.height()) + "\n";
    for (int row = 0; row < img.height(); ++row) {
        if (format == PbmFormat::Binary) {
            for (int col = 0; col < w; col += 8) {
                unsigned byte = 0;
                for (int b = 0; b < 8; ++b) {
                    byte <<= 1;
                    if (col + b < w && img(row, col + b)) {
                        byte |= 1;
                    }
                }
                out.push_back(static_cast<char>(byte));
            }
        } else {
            for (int col = 0; col < w; ++col) {
                out.push_back(img(row, col) ? '1' : '0');
                out.push_back(col + 1 < w ? ' ' : '\n');
            }
        }
    }
    return out;
}

BinaryImage parse_pbm(std::span<const std::uint8_t> bytes, std::string_view source)
{
    Reader in(bytes, source);
    const auto magic = in.magic();
    if (magic != "P1" && magic != "P4") {
        in.fail("not a PBM file (magic '" + magic + "')");
    }
    const auto [w, h] = dimensions(in);
    BinaryImage img(w, h);
    if (magic == "P4") {
        in.end_of_header();
        const auto stride = static_cast<std::size_t>((w + 7) / 8);
        const auto raster = in.take(stride * static_cast<std::size_t>(h));
        for (int row = 0; row < h; ++row) {
            for (int col = 0; col < w; ++col) {
                const auto byte = raster[static_cast<std::size_t>(row) * stride +
                                         static_cast<std::size_t>(col / 8)];
                img(row, col) = (byte >> (7 - col % 8)) & 1;
            }
        }
    } else {
        for (std::size_t i = 0; i < img.size(); ++i) {
            img[i] = static_cast<std::uint8_t>(in.bit());
        }
    }
    return img;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw InputError("write failed for " + path.string());
    }
}

}  // namespace ploc
