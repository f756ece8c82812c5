#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "ploc/grid.hpp"

namespace ploc {

/// Parses 8-bit PGM (P2 ASCII or P5 binary, maxval 255). Malformed data
/// raises InputError naming the source, line and byte offset.
GrayImage parse_pgm(std::span<const std::uint8_t> bytes, std::string_view source = "<memory>");
GrayImage read_pgm(const std::filesystem::path& path);

/// Binary P5 encoding.
std::string encode_pgm(const GrayImage& img);

enum class PbmFormat { Ascii, Binary };

/// PBM with 1 = black, so marked cells print black as in the usual figures.
std::string encode_pbm(const BinaryImage& img, PbmFormat format = PbmFormat::Binary);

/// Parses P1 or P4.
BinaryImage parse_pbm(std::span<const std::uint8_t> bytes, std::string_view source = "<memory>");

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ploc
