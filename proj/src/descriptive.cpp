// SPDX-License-Identifier: Apache-2.0
#include "daywatch/descriptive.hpp"

#include <algorithm>
#include <cmath>

namespace daywatch {

std::uint64_t CountMatrix::total() const noexcept {
    std::uint64_t sum = 0;
    for (auto c : cells_) sum += c;
    return sum;
}

std::uint64_t CountMatrix::max() const noexcept {
    std::uint64_t m = 0;
    for (auto c : cells_) m = std::max(m, c);
    return m;
}

HeatmapGrid accumulate_heatmap(const Dataset& dataset) {
    const auto& scene = dataset.scene;
    HeatmapGrid grid{scene.width, scene.height, CountMatrix(scene.height, scene.width), 0};
    for (const auto& day : dataset.days) {
        for (const auto& track : day.tracks) {
            for (const auto& p : track.points) {
                if (!scene.contains(p.x, p.y)) {
                    ++grid.out_of_bounds;
                    continue;
                }
                ++grid.counts.at(static_cast<std::size_t>(std::floor(p.y)),
                                 static_cast<std::size_t>(std::floor(p.x)));
            }
        }
    }
    return grid;
}

std::uint32_t pool_index(const SceneConfig& scene, double x, double y) {
    const auto col = static_cast<std::uint32_t>(std::floor(x)) / scene.patch_size;
    const auto row = static_cast<std::uint32_t>(std::floor(y)) / scene.patch_size;
    return row * scene.pools_x() + col;
}

Footmap compute_footmap(const Dataset& dataset) {
    const auto& scene = dataset.scene;
    scene.validate();
    Footmap fm;
    fm.pool_count = scene.pool_count();
    fm.values = CountMatrix(fm.pool_count, dataset.days.size());
    for (std::size_t d = 0; d < dataset.days.size(); ++d) {
        const auto& day = dataset.days[d];
        fm.day_dates.push_back(day.date);
        for (const auto& track : day.tracks) {
            for (const auto& p : track.points) {
                if (!scene.contains(p.x, p.y)) {
                    ++fm.out_of_bounds;
                    continue;
                }
                ++fm.values.at(pool_index(scene, p.x, p.y), d);
            }
        }
    }
    return fm;
}

double log_intensity(std::uint64_t count, std::uint64_t max_count) {
    if (max_count == 0) return 0.0;
    if (count >= max_count) return 1.0;
    return std::log1p(static_cast<double>(count)) / std::log1p(static_cast<double>(max_count));
}

Rgb jet(double v) {
    v = std::clamp(v, 0.0, 1.0);
    double r = 0, g = 0, b = 0;
    if (v < 1.0 / 3.0) {  // blue -> cyan
        const double t = 3.0 * v;
        r = 0, g = t, b = 1;
    } else if (v < 2.0 / 3.0) {  // cyan -> yellow
        const double t = 3.0 * v - 1.0;
        r = t, g = 1, b = 1 - t;
    } else {  // yellow -> red
        const double t = 3.0 * v - 2.0;
        r = 1, g = 1 - t, b = 0;
    }
    // Ceiling quantization: only v == 0 is pure blue and only v == 1 is pure red.
    const auto q = [](double c) { return static_cast<std::uint8_t>(std::clamp(std::ceil(c * 255.0), 0.0, 255.0)); };
    return {q(r), q(g), q(b)};
}

Image render_log(const CountMatrix& counts) {
    Image img{static_cast<std::uint32_t>(counts.cols()), static_cast<std::uint32_t>(counts.rows()), {}};
    img.pixels.reserve(counts.cells().size());
    const auto max = counts.max();
    for (auto c : counts.cells()) img.pixels.push_back(jet(log_intensity(c, max)));
    return img;
}

Image render_heatmap_log(const HeatmapGrid& grid) { return render_log(grid.counts); }

Image render_footmap(const Footmap& footmap) { return render_log(footmap.values); }

std::string counts_to_csv(const CountMatrix& counts) {
    std::string out;
    for (std::size_t r = 0; r < counts.rows(); ++r) {
        for (std::size_t c = 0; c < counts.cols(); ++c) {
            if (c) out += ',';
            out += std::to_string(counts.at(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string footmap_dates_csv(const Footmap& footmap) {
    std::string out = "column,date\n";
    for (std::size_t i = 0; i < footmap.day_dates.size(); ++i)
        out += std::to_string(i) + "," + footmap.day_dates[i].to_string() + "\n";
    return out;
}

std::string encode_ppm(const Image& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size() * 3);
    for (const auto& p : image.pixels) {
        out += static_cast<char>(p.r);
        out += static_cast<char>(p.g);
        out += static_cast<char>(p.b);
    }
    return out;
}

}  // namespace daywatch
