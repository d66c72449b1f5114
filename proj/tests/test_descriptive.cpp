// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "daywatch/descriptive.hpp"
#include "daywatch/error.hpp"
#include "daywatch/geometry.hpp"
#include "daywatch/synthetic.hpp"

namespace dw = daywatch;

namespace {

dw::Dataset one_day(std::uint32_t w, std::uint32_t h, std::vector<dw::TrackPoint> pts) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(w, h);
    dw::DayRecord day;
    day.date = dw::Date::from_ymd(2012, 1, 2);
    day.tracks.push_back({"t", std::move(pts)});
    ds.days.push_back(day);
    return ds;
}

dw::Dataset random_dataset(std::mt19937_64& rng, std::size_t days) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(160, 80);
    std::uniform_real_distribution<double> x(-20, 180), y(-20, 100);
    for (std::size_t d = 0; d < days; ++d) {
        dw::DayRecord day;
        day.date = dw::Date::from_ymd(2012, 3, 1).plus_days(static_cast<std::int32_t>(d));
        for (int t = 0; t < 4; ++t) {
            dw::Track track{"t" + std::to_string(t), {}};
            for (std::uint64_t f = 0; f < 1 + rng() % 30; ++f) track.points.push_back({f, x(rng), y(rng)});
            day.tracks.push_back(track);
        }
        ds.days.push_back(day);
    }
    return ds;
}

}  // namespace

TEST(Heatmap, EmptyDatasetIsAllZero) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(160, 80);
    const auto g = dw::accumulate_heatmap(ds);
    EXPECT_EQ(g.counts.rows(), 80u);
    EXPECT_EQ(g.counts.cols(), 160u);
    EXPECT_EQ(g.counts.total(), 0u);
}

TEST(Heatmap, FloorBinning) {
    const auto ds = one_day(160, 160, {{0, 5.2, 7.9}, {1, 5.2, 7.9}, {2, 5.2, 7.9}});
    const auto g = dw::accumulate_heatmap(ds);
    EXPECT_EQ(g.counts.at(7, 5), 3u);
    EXPECT_EQ(g.counts.total(), 3u);
}

TEST(Heatmap, OutOfBoundsPointsAreSkippedAndTallied) {
    const auto ds = one_day(160, 160, {{0, -0.1, 5}, {1, 160.0, 5}, {2, 5, 160.0}, {3, 159.99, 159.99}});
    const auto g = dw::accumulate_heatmap(ds);
    EXPECT_EQ(g.out_of_bounds, 3u);
    EXPECT_EQ(g.counts.at(159, 159), 1u);
}

// Independent recount: points within 4 sigma plus the jitter of a lane
// centerline hold nearly all the mass.
TEST(Heatmap, LaneCorridorsHoldTheMass) {
    const auto spec = dw::two_lane_spec(7);
    const auto ds = dw::generate_synthetic_dataset(spec, 12);
    const auto g = dw::accumulate_heatmap(ds);
    std::uint64_t near = 0;
    for (std::size_t r = 0; r < g.counts.rows(); ++r)
        for (std::size_t c = 0; c < g.counts.cols(); ++c) {
            const auto n = g.counts.at(r, c);
            if (!n) continue;
            const dw::Vec2 center{static_cast<double>(c) + 0.5, static_cast<double>(r) + 0.5};
            for (const auto& lane : spec.lanes)
                if (dw::distance_to_polyline(lane.centerline, center) <= 4.0 * lane.sigma * 1.25 + 1.0) {
                    near += n;
                    break;
                }
        }
    EXPECT_GE(static_cast<double>(near), 0.99 * static_cast<double>(g.counts.total()));
}

TEST(LogIntensity, HandComputedFixture) {
    EXPECT_EQ(dw::log_intensity(0, 8), 0.0);
    EXPECT_NEAR(dw::log_intensity(2, 8), std::log(3.0) / std::log(9.0), 1e-15);
    EXPECT_NEAR(dw::log_intensity(2, 8), 0.5, 1e-15);
    EXPECT_EQ(dw::log_intensity(8, 8), 1.0);
    EXPECT_EQ(dw::log_intensity(0, 0), 0.0);
}

TEST(Jet, EndpointsAndStops) {
    EXPECT_EQ(dw::jet(0.0), (dw::Rgb{0, 0, 255}));
    EXPECT_EQ(dw::jet(1.0), (dw::Rgb{255, 0, 0}));
    EXPECT_EQ(dw::jet(1.0 / 3.0), (dw::Rgb{0, 255, 255}));
    EXPECT_EQ(dw::jet(2.0 / 3.0), (dw::Rgb{255, 255, 0}));
    EXPECT_NE(dw::jet(0.999999), dw::jet(1.0));
    EXPECT_NE(dw::jet(1e-9), dw::jet(0.0));
}

TEST(Render, AllZeroGridIsUniformMinimumColour) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(160, 80);
    const auto img = dw::render_heatmap_log(dw::accumulate_heatmap(ds));
    ASSERT_EQ(img.pixels.size(), 160u * 80u);
    for (const auto& p : img.pixels) EXPECT_EQ(p, dw::jet(0.0));
}

TEST(Render, ArgmaxIsTheUniquePureRedCell) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        dw::CountMatrix m(7, 9);
        for (std::size_t r = 0; r < 7; ++r)
            for (std::size_t c = 0; c < 9; ++c) m.at(r, c) = rng() % 50;
        m.at(rng() % 7, rng() % 9) = 60;
        const auto img = dw::render_log(m);
        std::size_t red = 0;
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            if (img.pixels[i] == dw::Rgb{255, 0, 0}) {
                ++red;
                EXPECT_EQ(m.cells()[i], 60u);
            }
        EXPECT_EQ(red, 1u);
    }
}

TEST(Render, RankPreservingProperty) {
    for (std::uint64_t max : {1u, 7u, 100u, 5000u}) {
        double prev = -1.0;
        for (std::uint64_t c = 0; c <= max; ++c) {
            const double v = dw::log_intensity(c, max);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(Footmap, EmptyDatasetHasPoolsButNoColumns) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(160, 160);
    const auto f = dw::compute_footmap(ds);
    EXPECT_EQ(f.pool_count, 4u);
    EXPECT_EQ(f.values.rows(), 4u);
    EXPECT_EQ(f.values.cols(), 0u);
}

TEST(Footmap, RowMajorPoolOrder) {
    const auto f = dw::compute_footmap(one_day(160, 160, {{0, 85, 10}}));
    for (std::uint32_t p = 0; p < 4; ++p) EXPECT_EQ(f.values.at(p, 0), p == 1 ? 1u : 0u);
    const auto scene = dw::SceneConfig::make(240, 160);
    EXPECT_EQ(dw::pool_index(scene, 0, 0), 0u);
    EXPECT_EQ(dw::pool_index(scene, 239, 0), 2u);
    EXPECT_EQ(dw::pool_index(scene, 0, 80), 3u);
    EXPECT_EQ(dw::pool_index(scene, 239.9, 159.9), 5u);
}

TEST(Footmap, IndivisiblePatchIsAConfigError) {
    dw::Dataset ds;
    ds.scene.width = 170;
    ds.scene.height = 160;
    EXPECT_THROW(dw::compute_footmap(ds), dw::ConfigError);
}

TEST(Footmap, MassConservationProperty) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ds = random_dataset(rng, 1 + trial % 6);
        const auto g = dw::accumulate_heatmap(ds);
        const auto f = dw::compute_footmap(ds);
        std::uint64_t all = 0;
        for (std::size_t d = 0; d < ds.days.size(); ++d) {
            std::uint64_t in = 0, col = 0;
            for (const auto& t : ds.days[d].tracks)
                for (const auto& p : t.points) in += p.x >= 0 && p.y >= 0 && p.x < 160 && p.y < 80;
            for (std::uint32_t pool = 0; pool < f.pool_count; ++pool) col += f.values.at(pool, d);
            EXPECT_EQ(col, in);
            all += in;
        }
        EXPECT_EQ(g.counts.total(), all);
        EXPECT_EQ(f.values.total(), all);
        EXPECT_EQ(g.out_of_bounds, f.out_of_bounds);
    }
}

TEST(Footmap, DayPermutationPermutesColumnsProperty) {
    std::mt19937_64 rng(8);
    auto ds = random_dataset(rng, 6);
    const auto g = dw::accumulate_heatmap(ds);
    const auto f = dw::compute_footmap(ds);
    auto shuffled = ds;
    std::shuffle(shuffled.days.begin(), shuffled.days.end(), rng);
    EXPECT_EQ(dw::accumulate_heatmap(shuffled).counts, g.counts);
    const auto fs = dw::compute_footmap(shuffled);
    for (std::size_t d = 0; d < shuffled.days.size(); ++d) {
        const auto orig = std::find(f.day_dates.begin(), f.day_dates.end(), fs.day_dates[d]) - f.day_dates.begin();
        for (std::uint32_t p = 0; p < f.pool_count; ++p)
            EXPECT_EQ(fs.values.at(p, d), f.values.at(p, static_cast<std::size_t>(orig)));
    }
}

TEST(Output, CsvAndPpmEncoding) {
    dw::CountMatrix m(2, 3);
    m.at(0, 1) = 4;
    m.at(1, 2) = 7;
    EXPECT_EQ(dw::counts_to_csv(m), "0,4,0\n0,0,7\n");
    const auto ppm = dw::encode_ppm(dw::render_log(m));
    const std::string header = "P6\n3 2\n255\n";
    ASSERT_EQ(ppm.size(), header.size() + 18);
    EXPECT_EQ(ppm.substr(0, header.size()), header);
    // Last pixel holds the maximum: pure red.
    EXPECT_EQ(static_cast<unsigned char>(ppm[ppm.size() - 3]), 255);
    EXPECT_EQ(static_cast<unsigned char>(ppm[ppm.size() - 1]), 0);

    const auto f = dw::compute_footmap(one_day(160, 160, {{0, 1, 1}}));
    EXPECT_EQ(dw::footmap_dates_csv(f), "column,date\n0,2012-01-02\n");
}
