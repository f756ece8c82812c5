#include "ploc/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace ploc::synthetic {

GrayImage uniform(int width, int height, std::uint8_t gray)
{
    return GrayImage(width, height, gray);
}

GrayImage step_edge(int width, int height, std::uint8_t dark, std::uint8_t bright)
{
    GrayImage img(width, height, dark);
    for (int row = 0; row < height / 2; ++row) {
        for (int col = 0; col < width; ++col) {
            img(row, col) = bright;
        }
    }
    return img;
}

GrayImage isolated_point(int width, int height, std::uint8_t dark, std::uint8_t bright)
{
    GrayImage img(width, height, dark);
    img(height / 2, width / 2) = bright;
    return img;
}

GrayImage l_corner(int width, int height, double sigma)
{
    GrayImage img(width, height, 0);
    for (int row = height / 2; row < height; ++row) {
        for (int col = width / 2; col < width; ++col) {
            img(row, col) = 255;
        }
    }
    return sigma > 0.0 ? gaussian_blur(img, sigma) : img;
}

GrayImage bar_grating(int width, int height, int bar_width, std::uint8_t dark, std::uint8_t bright)
{
    GrayImage img(width, height);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            img(row, col) = (col / bar_width) % 2 ? bright : dark;
        }
    }
    return img;
}

GrayImage road(int width, int height)
{
    constexpr std::uint8_t kSky = 200;
    constexpr std::uint8_t kTarmac = 70;
    constexpr std::uint8_t kLine = 235;
    constexpr std::uint8_t kVerge = 130;

    const int horizon = height / 3;
    GrayImage img(width, height, kTarmac);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            if (row < horizon) {
                img(row, col) = kSky;
                continue;
            }
            const double depth = static_cast<double>(row - horizon) / (height - horizon);
            // verge boundary recedes towards the vanishing point
            if (col > width - 1 - static_cast<int>(depth * width / 4)) {
                img(row, col) = kVerge;
            }
            // slanted middle line, three pixels wide
            const int line_col = width / 2 - static_cast<int>(depth * width / 6);
            if (col >= line_col - 1 && col <= line_col + 1) {
                img(row, col) = kLine;
            }
        }
    }
    return img;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma)
{
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * i * i / (sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : kernel) {
        v /= sum;
    }

    const int w = img.width();
    const int h = img.height();
    Grid<double> tmp(w, h);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       img(row, std::clamp(col + i, 0, w - 1));
            }
            tmp(row, col) = acc;
        }
    }
    GrayImage out(w, h);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp(std::clamp(row + i, 0, h - 1), col);
            }
            out(row, col) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    }
    return out;
}

std::vector<NamedImage> corpus()
{
    return {
        {"uniform", uniform(32, 32, 128)},
        {"step_edge", step_edge(32, 32)},
        {"isolated_point", isolated_point(32, 32)},
        {"l_corner", l_corner(32, 32)},
        {"bar_grating", bar_grating(32, 32, 4)},
        {"road", road()},
    };
}

}  // namespace ploc::synthetic
