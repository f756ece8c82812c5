#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ploc/error.hpp"

namespace ploc {

/// Row-major 2D container. Coordinates are (row, col); row grows downwards.
template <class T>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{}) : width_(width), height_(height)
    {
        if (width <= 0 || height <= 0) {
            throw ArgumentError("grid dimensions must be positive");
        }
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }

    bool contains(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    std::size_t index(int row, int col) const noexcept
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    T& operator()(int row, int col) { return cells_[index(row, col)]; }
    const T& operator()(int row, int col) const { return cells_[index(row, col)]; }

    T& operator[](std::size_t i) { return cells_[i]; }
    const T& operator[](std::size_t i) const { return cells_[i]; }

    std::span<T> cells() noexcept { return cells_; }
    std::span<const T> cells() const noexcept { return cells_; }

    bool operator==(const Grid&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

/// 8-bit grayscale image; the simulator input.
using GrayImage = Grid<std::uint8_t>;

/// 0/1 raster used for masks and correlation maps (1 = marked).
using BinaryImage = Grid<std::uint8_t>;

}  // namespace ploc
