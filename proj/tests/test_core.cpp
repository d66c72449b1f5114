// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "daywatch/core.hpp"
#include "daywatch/error.hpp"
#include "daywatch/io.hpp"
#include "daywatch/synthetic.hpp"
#include "daywatch/trajectory_predict.hpp"

namespace dw = daywatch;
namespace fs = std::filesystem;

namespace {

const dw::Date kDay = dw::Date::from_ymd(2012, 1, 2);

dw::Dataset consecutive_days(std::size_t n) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(160, 160);
    for (std::size_t i = 0; i < n; ++i) {
        dw::DayRecord d;
        d.date = kDay.plus_days(static_cast<std::int32_t>(i));
        d.tracks.push_back({"t", {{0, 1.0, 1.0}, {1, 2.0, 2.0}}});
        ds.days.push_back(d);
    }
    return ds;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("daywatch_core_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Date, ParsesAndFormats) {
    const auto d = dw::Date::parse("2012-01-02");
    EXPECT_EQ(d.to_string(), "2012-01-02");
    EXPECT_EQ(d.weekday(), dw::Weekday::monday);
    EXPECT_EQ(d.plus_days(6).weekday(), dw::Weekday::sunday);
    EXPECT_EQ(dw::Date::parse("2012-02-29").plus_days(1).to_string(), "2012-03-01");
    EXPECT_EQ(dw::weekday_name(dw::Weekday::wednesday), "Wednesday");
}

TEST(Date, RejectsMalformed) {
    for (const char* bad : {"2012-1-02", "2012-13-01", "2011-02-29", "20120102", "2012-01-0x", ""})
        EXPECT_THROW(dw::Date::parse(bad), dw::ParseError) << bad;
    EXPECT_THROW(dw::Date::from_ymd(2012, 2, 30), dw::InvalidInput);
}

TEST(Date, WeekdayMatchesSerialArithmetic) {
    // 1970-01-01 was a Thursday.
    for (std::int32_t s = -400; s < 400; s += 13) {
        const auto d = dw::Date::from_serial(s);
        const int expected = ((s % 7) + 7 + 3) % 7;
        EXPECT_EQ(static_cast<int>(d.weekday()), expected) << s;
    }
}

TEST(ParseDayFile, MinimalTrack) {
    const auto parsed = dw::parse_day_file("1,0,10.0,20.0\n1,1,11.0,21.0", kDay);
    ASSERT_EQ(parsed.day.tracks.size(), 1u);
    EXPECT_EQ(parsed.day.tracks[0].id, "1");
    EXPECT_EQ(parsed.day.tracks[0].points.size(), 2u);
    EXPECT_EQ(parsed.diagnostics.dropped_tracks, 0u);
}

TEST(ParseDayFile, SinglePointTrackIsDropped) {
    const auto parsed = dw::parse_day_file("1,0,10.0,20.0", kDay);
    EXPECT_TRUE(parsed.day.tracks.empty());
    EXPECT_EQ(parsed.diagnostics.dropped_tracks, 1u);
}

TEST(ParseDayFile, NonNumericFieldReportsLine) {
    try {
        dw::parse_day_file("1,0,ten,20.0", kDay);
        FAIL() << "expected a parse error";
    } catch (const dw::ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(ParseDayFile, ErrorsCarryLineNumbers) {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            dw::parse_day_file(text, kDay);
        } catch (const dw::ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("a,0,1,1\na,1,2,2\na,2,3\n"), 3u);
    EXPECT_EQ(line_of("a,0,1,1\n\na,-1,2,2\n"), 3u);
    EXPECT_EQ(line_of("a,0,1,1\nb,0,1,1\na,0,5,5\n"), 3u);  // duplicate (id, frame)
    EXPECT_EQ(line_of("a,0,nan,1\n"), 1u);
    EXPECT_EQ(line_of(",0,1,1\n"), 1u);
}

TEST(ParseDayFile, SortsPointsAndKeepsFirstAppearanceOrder) {
    const auto parsed = dw::parse_day_file("b,5,1,1\na,2,0,0\nb,3,2,2\na,1,3,3\r\n", kDay);
    ASSERT_EQ(parsed.day.tracks.size(), 2u);
    EXPECT_EQ(parsed.day.tracks[0].id, "b");
    EXPECT_EQ(parsed.day.tracks[0].points[0].frame, 3u);
    EXPECT_EQ(parsed.day.tracks[1].points[0].frame, 1u);
    for (const auto& t : parsed.day.tracks) EXPECT_NO_THROW(dw::validate_track(t));
}

TEST(ParseDayFile, TalliesOutOfBoundsPoints) {
    const auto scene = dw::SceneConfig::make(160, 160);
    const auto parsed = dw::parse_day_file("a,0,-1,5\na,1,5,5\na,2,160,5\n", kDay, scene);
    EXPECT_EQ(parsed.diagnostics.out_of_bounds_points, 2u);
    EXPECT_EQ(parsed.day.tracks[0].points.size(), 3u);
}

// Round trip through the text format is exact, coordinates included.
TEST(ParseDayFile, SerializeRoundTripProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1e4, 1e4);
    std::uniform_int_distribution<int> count(2, 20);
    for (int trial = 0; trial < 100; ++trial) {
        dw::DayRecord day;
        day.date = kDay.plus_days(trial);
        const int tracks = count(rng) / 2;
        for (int t = 0; t < tracks; ++t) {
            dw::Track track{"id" + std::to_string(t), {}};
            std::uint64_t frame = rng() % 100;
            for (int p = count(rng); p > 0; --p) {
                track.points.push_back({frame, coord(rng), coord(rng)});
                frame += 1 + rng() % 5;
            }
            day.tracks.push_back(track);
        }
        const auto text = dw::serialize_day(day);
        EXPECT_EQ(dw::parse_day_file(text, day.date).day, day);
    }
}

TEST(ValidateTrack, RejectsBrokenInvariants) {
    EXPECT_THROW(dw::validate_track({"a", {{0, 1, 1}}}), dw::InvalidInput);
    EXPECT_THROW(dw::validate_track({"a", {{1, 1, 1}, {1, 2, 2}}}), dw::InvalidInput);
    EXPECT_THROW(dw::validate_track({"a", {{0, 1, 1}, {1, std::nan(""), 2}}}), dw::InvalidInput);
}

TEST(Annotations, ParsesAndRejects) {
    const auto labels = dw::load_annotations("2012-01-02,1");
    ASSERT_EQ(labels.size(), 1u);
    EXPECT_EQ(labels.at(kDay), 1);
    EXPECT_TRUE(dw::load_annotations("").empty());
    EXPECT_THROW(dw::load_annotations("2012-01-02,2"), dw::ParseError);
    try {
        dw::load_annotations("2012-01-02,0\n2012-01-32,1\n");
        FAIL();
    } catch (const dw::ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    const dw::LabelMap m{{kDay, 0}, {kDay.plus_days(3), 1}};
    EXPECT_EQ(dw::load_annotations(dw::serialize_annotations(m)), m);
}

TEST(Annotations, ApplyLeavesUnlistedDaysUnlabeled) {
    auto ds = consecutive_days(3);
    dw::apply_labels(ds, {{kDay.plus_days(1), 1}, {kDay.plus_days(30), 0}});
    EXPECT_EQ(ds.days[0].label, -1);
    EXPECT_EQ(ds.days[1].label, 1);
    EXPECT_FALSE(ds.days[2].labeled());
}

TEST(FilterDays, ExcludingSixteenOfTwoHundredTwentyEightLeavesTwoHundredTwelve) {
    const auto ds = consecutive_days(228);
    std::set<dw::Date> exclusion;
    for (int i = 0; i < 16; ++i) exclusion.insert(kDay.plus_days(i * 13));
    EXPECT_EQ(dw::filter_days(ds, exclusion).days.size(), 212u);
    EXPECT_EQ(ds.days.size(), 228u);
}

TEST(FilterDays, IdentityAndEmpty) {
    const auto ds = consecutive_days(5);
    EXPECT_EQ(dw::filter_days(ds, {}), ds);
    const auto one = consecutive_days(1);
    EXPECT_TRUE(dw::filter_days(one, {kDay}).days.empty());
    EXPECT_EQ(dw::filter_days(ds, {kDay.plus_days(100)}).days.size(), 5u);
}

TEST(FilterDays, UnionEqualsSequentialProperty) {
    std::mt19937 rng(5);
    const auto ds = consecutive_days(40);
    for (int trial = 0; trial < 50; ++trial) {
        std::set<dw::Date> a, b, both;
        for (int i = 0; i < 10; ++i) {
            const auto da = kDay.plus_days(static_cast<std::int32_t>(rng() % 50));
            const auto db = kDay.plus_days(static_cast<std::int32_t>(rng() % 50));
            a.insert(da);
            b.insert(db);
            both.insert(da);
            both.insert(db);
        }
        EXPECT_EQ(dw::filter_days(ds, both), dw::filter_days(dw::filter_days(ds, a), b));
    }
}

TEST(DateList, CommentsAndBlankLines) {
    const auto dates = dw::parse_date_list("# excluded\n2012-01-02\n\n2012-01-05  # low fps\n");
    EXPECT_EQ(dates, (std::set<dw::Date>{kDay, kDay.plus_days(3)}));
}

TEST(SceneConfig, PatchMustDivideScene) {
    EXPECT_THROW(dw::SceneConfig::make(170, 160), dw::ConfigError);
    EXPECT_THROW(dw::SceneConfig::make(0, 160), dw::ConfigError);
    const auto s = dw::SceneConfig::make(320, 240);
    EXPECT_EQ(s.pool_count(), 12u);
    EXPECT_TRUE(s.contains(0, 0));
    EXPECT_FALSE(s.contains(320, 0));
}

TEST(SceneConfig, TextRoundTripAndErrors) {
    const auto s = dw::parse_scene_config("# camera\nwidth = 320\nheight=240\n[scene]\nduration_minutes = 30\npatch_size = 80\n");
    EXPECT_EQ(s, dw::SceneConfig::make(320, 240));
    EXPECT_EQ(dw::parse_scene_config(dw::serialize_scene_config(dw::SceneConfig::make(160, 80, 10, 80, 2.5))),
              dw::SceneConfig::make(160, 80, 10, 80, 2.5));
    EXPECT_THROW(dw::parse_scene_config("width = 320\nheight = 240\ncolour = red\n"), dw::ParseError);
    EXPECT_THROW(dw::parse_scene_config("width = 330\nheight = 240\n"), dw::ConfigError);
}

TEST(Dataset, NormalizeSortsAndRejectsDuplicates) {
    auto ds = consecutive_days(3);
    std::swap(ds.days[0], ds.days[2]);
    ds.normalize();
    EXPECT_EQ(ds.days[0].date, kDay);
    ASSERT_NE(ds.find(kDay.plus_days(1)), nullptr);
    EXPECT_EQ(ds.find(kDay.plus_days(9)), nullptr);
    ds.days.push_back(ds.days[0]);
    EXPECT_THROW(ds.normalize(), dw::InvalidInput);
}

TEST(Dataset, SaveLoadRoundTrip) {
    auto ds = dw::generate_synthetic_dataset(dw::two_lane_spec(4, {2}), 3);
    const auto dir = scratch_dir("roundtrip");
    dw::save_dataset(ds, dir.string());
    dw::LoadDiagnostics diag;
    const auto loaded = dw::load_dataset(dir.string(), &diag);
    EXPECT_EQ(diag.day_files, 4u);
    EXPECT_EQ(loaded.scene, ds.scene);
    ASSERT_EQ(loaded.days.size(), ds.days.size());
    auto relabeled = loaded;
    dw::apply_labels(relabeled, dw::load_annotations(dw::io::read_file((dir / "labels.csv").string())));
    EXPECT_EQ(relabeled, ds);
    fs::remove_all(dir);
}

TEST(Dataset, LoadEmptyDirectoryFails) {
    const auto dir = scratch_dir("empty");
    try {
        dw::load_dataset(dir.string());
        FAIL();
    } catch (const dw::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("no day files found"), std::string::npos);
    }
    fs::remove_all(dir);
}

TEST(Io, LinesAndSplit) {
    const auto l = dw::io::lines("a\r\nb\n\nc\n");
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[1], "b");
    EXPECT_EQ(l[2], "");
    EXPECT_EQ(dw::io::split("x,,y", ',').size(), 3u);
    EXPECT_EQ(dw::io::trim("  z \t"), "z");
    EXPECT_THROW(dw::io::read_file("/nonexistent/daywatch/file"), dw::IoError);
}

TEST(FormatReal, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125}) EXPECT_EQ(std::stod(dw::format_real(v)), v);
    EXPECT_EQ(dw::format_real(10.0), "10");
}
