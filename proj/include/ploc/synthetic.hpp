#pragma once

#include <string>
#include <vector>

#include "ploc/grid.hpp"

namespace ploc::synthetic {

GrayImage uniform(int width, int height, std::uint8_t gray);

/// Bright upper half over a dark lower half (horizontal edge at height / 2),
/// so the edge row above the boundary emits feature 7.
GrayImage step_edge(int width, int height, std::uint8_t dark = 40, std::uint8_t bright = 220);

/// One bright pixel at (height / 2, width / 2) on dark ground.
GrayImage isolated_point(int width, int height, std::uint8_t dark = 0, std::uint8_t bright = 255);

/// Bright lower-right quadrant starting at (height / 2, width / 2), black
/// elsewhere, anti-aliased with a Gaussian of the given sigma. The corner cell
/// is (height / 2, width / 2).
GrayImage l_corner(int width, int height, double sigma = 0.8);

/// Vertical bars alternating every `bar_width` columns.
GrayImage bar_grating(int width, int height, int bar_width, std::uint8_t dark = 40,
                      std::uint8_t bright = 220);

/// Road-like scene: bright sky band, dark tarmac, a bright slanted middle
/// line and a mid-gray verge on the right.
GrayImage road(int width = 96, int height = 64);

/// Separable Gaussian blur with edge clamping, rounded back to 8 bits.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

struct NamedImage {
    std::string name;
    GrayImage image;
};

/// The bundled test corpus written to data/ by ploc_synth.
std::vector<NamedImage> corpus();

}  // namespace ploc::synthetic
