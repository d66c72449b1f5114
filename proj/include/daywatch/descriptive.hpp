// SPDX-License-Identifier: Apache-2.0
//
// Spatial accumulation of track points: the scene heatmap and the
// pools-by-days footmap, plus their log-scaled jet renderings.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daywatch/core.hpp"

namespace daywatch {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(Rgb, Rgb) = default;
};

/// Row-major color image.
struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<Rgb> pixels;

    const Rgb& at(std::uint32_t row, std::uint32_t col) const { return pixels[std::size_t{row} * width + col]; }
};

/// Dense row-major count matrix.
class CountMatrix {
public:
    CountMatrix() = default;
    CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint64_t& at(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
    const std::vector<std::uint64_t>& cells() const noexcept { return cells_; }

    std::uint64_t total() const noexcept;
    std::uint64_t max() const noexcept;

    friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> cells_;
};

struct HeatmapGrid {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    CountMatrix counts;  // rows = y, cols = x
    std::uint64_t out_of_bounds = 0;
};

struct Footmap {
    std::uint32_t pool_count = 0;
    std::vector<Date> day_dates;
    CountMatrix values;  // rows = pools (row-major patch order), cols = days
    std::uint64_t out_of_bounds = 0;
};

HeatmapGrid accumulate_heatmap(const Dataset& dataset);

/// Patch index of an in-bounds point: patches enumerate left to right, then
/// top to bottom.
std::uint32_t pool_index(const SceneConfig& scene, double x, double y);

Footmap compute_footmap(const Dataset& dataset);

/// ln(1+count) / ln(1+max); 0 everywhere when max is 0.
double log_intensity(std::uint64_t count, std::uint64_t max_count);

/// Four-segment piecewise-linear jet: blue, cyan, yellow, red at 0, 1/3,
/// 2/3 and 1.
Rgb jet(double intensity);

Image render_log(const CountMatrix& counts);
Image render_heatmap_log(const HeatmapGrid& grid);
Image render_footmap(const Footmap& footmap);

std::string counts_to_csv(const CountMatrix& counts);
std::string footmap_dates_csv(const Footmap& footmap);

/// Binary P6 PPM.
std::string encode_ppm(const Image& image);

}  // namespace daywatch
